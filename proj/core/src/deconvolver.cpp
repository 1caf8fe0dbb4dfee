#include "dcflowgen/deconvolver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "dcflowgen/density_grid.hpp"
#include "dcflowgen/error.hpp"
#include "fft.hpp"

namespace dcflowgen {
namespace {

constexpr double kDivisionGuard = 1e-12;
constexpr double kSupportHeadroom = 1.05;
constexpr std::size_t kEnumerationLimit = 2048;

bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

void check_config(const DeconvolutionConfig& cfg) {
  if (!is_pow2(cfg.grid_size) || cfg.grid_size < 16) {
    throw Error("deconvolve", "grid_size must be a power of two >= 16");
  }
  if (cfg.product_terms < 1) {
    throw Error("deconvolve", "product_terms must be at least 1");
  }
  if (cfg.smoothing_window < 1 || cfg.smoothing_window % 2 == 0) {
    throw Error("deconvolve", "smoothing_window must be odd");
  }
}

std::vector<double> moving_average(const std::vector<double>& in,
                                   std::size_t window) {
  if (window <= 1) return in;
  const std::size_t half = window / 2;
  const std::size_t n = in.size();
  // Prefix sums; near the ends the window is truncated and the average
  // taken over the bins that exist.
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + in[k];
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k >= half ? k - half : 0;
    const std::size_t hi = std::min(n, k + half + 1);
    out[k] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return out;
}

}  // namespace

void AckModel::validate() const {
  if (!(r > 0.0) || !(mss > 0.0) || !(ack_packet_size > 0.0)) {
    throw Error("ack model", "r, mss and ack_packet_size must be positive");
  }
  const double b = beta();
  if (!(b > 0.0 && b < 1.0)) {
    throw Error("ack model", "beta must lie in (0, 1)");
  }
}

StepDistribution deconvolve(const StepDistribution& z, const AckModel& model,
                            const DeconvolutionConfig& cfg) {
  model.validate();
  check_config(cfg);
  const double beta = model.beta();
  if (z.is_point_mass() || !(z.max_value() > 0.0)) {
    return StepDistribution::point_mass(z.max_value() / (1.0 + beta),
                                        z.kind());
  }

  const std::size_t n = cfg.grid_size;
  const double w = kSupportHeadroom * z.max_value() / static_cast<double>(n);
  auto spectrum = [&](double scale) {
    return detail::forward_real(rasterize(z, w, n, scale).masses);
  };
  // beta^m * Z entirely inside the first cell has characteristic function 1
  // on the grid.
  auto trivial = [&](double scale) { return scale * z.max_value() < 0.5 * w; };

  std::vector<std::complex<double>> f(n / 2 + 1, {1.0, 0.0});
  double scale = 1.0;
  for (std::size_t k = 0; k < cfg.product_terms; ++k) {
    if (trivial(scale)) break;
    const auto num = spectrum(scale);
    const double den_scale = scale * beta;
    if (trivial(den_scale)) {
      for (std::size_t j = 0; j < f.size(); ++j) f[j] *= num[j];
      break;
    }
    const auto den = spectrum(den_scale);
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (std::abs(den[j]) < kDivisionGuard) {
        throw Error("deconvolve",
                    "characteristic function below 1e-12 at frequency bin " +
                        std::to_string(j) + " (product term " +
                        std::to_string(k) + ")");
      }
      f[j] *= num[j] / den[j];
    }
    scale = den_scale * beta;
  }

  auto masses = detail::inverse_real(f, n);
  if (cfg.negativity_clip) {
    for (auto& m : masses) m = std::max(m, 0.0);
  }
  masses = moving_average(masses, cfg.smoothing_window);
  for (auto& m : masses) m = std::max(m, 0.0);

  DensityGrid grid{0.0, w, std::move(masses)};
  grid.normalize();
  return to_distribution(grid, z.kind());
}

StepDistribution reconvolve_check(const StepDistribution& x,
                                  const AckModel& model,
                                  std::size_t grid_size) {
  model.validate();
  const double beta = model.beta();
  const auto pts = x.points();

  if (x.interpolation() == Interpolation::kStep &&
      pts.size() <= kEnumerationLimit) {
    std::map<double, double> sums;
    double prev_i = 0.0;
    for (const auto& a : pts) {
      const double pa = a.cum_prob - prev_i;
      prev_i = a.cum_prob;
      if (pa <= 0.0) continue;
      double prev_j = 0.0;
      for (const auto& b : pts) {
        const double pb = b.cum_prob - prev_j;
        prev_j = b.cum_prob;
        if (pb <= 0.0) continue;
        sums[a.value + beta * b.value] += pa * pb;
      }
    }
    std::vector<CdfPoint> out;
    out.reserve(sums.size());
    double cum = 0.0;
    for (const auto& [v, p] : sums) {
      cum += p;
      out.push_back({v, std::min(cum, 1.0)});
    }
    out.back().cum_prob = 1.0;
    return StepDistribution(std::move(out), x.kind(), Interpolation::kStep);
  }

  if (!is_pow2(grid_size)) {
    throw Error("reconvolve", "grid_size must be a power of two");
  }
  const double top = (1.0 + beta) * x.max_value();
  if (!(top > 0.0)) return StepDistribution::point_mass(0.0, x.kind());
  const double w = kSupportHeadroom * top / static_cast<double>(grid_size);
  const auto a = rasterize(x, w, grid_size);
  auto b = rasterize(x, w, grid_size, beta);
  // beta * X occupies only the low part of its grid.
  std::size_t keep = b.size();
  while (keep > 1 && b.masses[keep - 1] == 0.0) --keep;
  b.masses.resize(keep);
  return to_distribution(convolve(a, b), x.kind());
}

}  // namespace dcflowgen
