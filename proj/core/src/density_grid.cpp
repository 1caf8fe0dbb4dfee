#include "dcflowgen/density_grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "dcflowgen/error.hpp"
#include "fft.hpp"

namespace dcflowgen {
namespace {

// Below this many multiply-adds the direct loop wins over three FFTs.
constexpr std::size_t kDirectWorkLimit = 1u << 16;

void check_widths(const DensityGrid& a, const DensityGrid& b) {
  if (a.masses.empty() || b.masses.empty()) {
    throw Error("convolve", "empty grid");
  }
  const double tol = 1e-9 * std::max(a.bin_width, b.bin_width);
  if (!(a.bin_width > 0.0) || std::abs(a.bin_width - b.bin_width) > tol) {
    throw Error("convolve", "bin widths differ");
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

double DensityGrid::total() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

double DensityGrid::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < masses.size(); ++k) m += masses[k] * node(k);
  return m / total();
}

void DensityGrid::normalize() {
  const double t = total();
  if (!(t > 0.0)) throw Error("density grid", "no mass to normalize");
  for (auto& m : masses) m /= t;
}

DensityGrid convolve_direct(const DensityGrid& a, const DensityGrid& b) {
  check_widths(a, b);
  DensityGrid out{a.origin + b.origin, a.bin_width,
                  std::vector<double>(a.size() + b.size() - 1, 0.0)};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.masses[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      out.masses[i + j] += a.masses[i] * b.masses[j];
    }
  }
  return out;
}

DensityGrid convolve(const DensityGrid& a, const DensityGrid& b) {
  check_widths(a, b);
  if (a.size() * b.size() <= kDirectWorkLimit) return convolve_direct(a, b);

  const std::size_t out_size = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_size);
  std::vector<double> pa(n, 0.0);
  std::vector<double> pb(n, 0.0);
  std::copy(a.masses.begin(), a.masses.end(), pa.begin());
  std::copy(b.masses.begin(), b.masses.end(), pb.begin());
  auto fa = detail::forward_real(pa);
  const auto fb = detail::forward_real(pb);
  for (std::size_t j = 0; j < fa.size(); ++j) fa[j] *= fb[j];
  auto raw = detail::inverse_real(fa, n);

  DensityGrid out{a.origin + b.origin, a.bin_width,
                  std::vector<double>(raw.begin(), raw.begin() + out_size)};
  for (auto& m : out.masses) m = std::max(m, 0.0);
  out.normalize();
  return out;
}

DensityGrid rasterize(const StepDistribution& dist, double bin_width,
                      std::size_t grid_size, double scale) {
  if (!(bin_width > 0.0) || grid_size == 0 || !(scale > 0.0)) {
    throw Error("rasterize", "invalid grid parameters");
  }
  DensityGrid g{0.0, bin_width, std::vector<double>(grid_size, 0.0)};
  // Cell k covers scaled values [(k - 1/2) w, (k + 1/2) w).
  double prev = 0.0;
  const double inv = bin_width / scale;
  for (std::size_t k = 0; k + 1 < grid_size; ++k) {
    const double edge = (static_cast<double>(k) + 0.5) * inv;
    const double c = dist.cdf_left(edge);
    g.masses[k] = std::max(0.0, c - prev);
    prev = std::max(prev, c);
    if (prev >= 1.0) break;
  }
  g.masses[grid_size - 1] += std::max(0.0, 1.0 - prev);
  return g;
}

StepDistribution to_distribution(const DensityGrid& grid, SupportKind kind) {
  const double w = grid.bin_width;
  const double total = grid.total();
  if (!(total > 0.0)) throw Error("density grid", "no mass");

  std::vector<CdfPoint> pts;
  double cum = 0.0;
  // Lower edge of the first occupied cell.
  std::size_t first = 0;
  while (first < grid.size() && grid.masses[first] <= 0.0) ++first;
  std::size_t last = grid.size() - 1;
  while (last > first && grid.masses[last] <= 0.0) --last;

  const double low = std::max(0.0, grid.node(first) - 0.5 * w);
  pts.push_back({low, 0.0});
  for (std::size_t k = first; k <= last; ++k) {
    const double m = grid.masses[k] / total;
    cum += m;
    const double edge = grid.node(k) + 0.5 * w;
    if (m <= 0.0) {
      // Keep only the end of a flat run; the start is the previous edge.
      if (k + 1 <= last && grid.masses[k + 1] <= 0.0) continue;
    }
    if (edge > pts.back().value) pts.push_back({edge, std::min(cum, 1.0)});
  }
  pts.back().cum_prob = 1.0;
  return StepDistribution(std::move(pts), kind, Interpolation::kLinear);
}

}  // namespace dcflowgen
