#include "dcflowgen/compare.hpp"

#include <algorithm>
#include <cmath>

#include "dcflowgen/error.hpp"

namespace dcflowgen {
namespace {

std::vector<double> merged_support(const StepDistribution& a,
                                   const StepDistribution& b) {
  std::vector<double> xs;
  xs.reserve(a.size() + b.size());
  for (const auto& p : a.points()) xs.push_back(p.value);
  for (const auto& p : b.points()) xs.push_back(p.value);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

double topsoe_term(double p, double q) {
  const double s = p + q;
  double t = 0.0;
  if (p > 0.0) t += p * std::log(2.0 * p / s);
  if (q > 0.0) t += q * std::log(2.0 * q / s);
  return t;
}

}  // namespace

double ks_distance(const StepDistribution& a, const StepDistribution& b) {
  double ks = 0.0;
  for (double x : merged_support(a, b)) {
    ks = std::max(ks, std::abs(a.cdf(x) - b.cdf(x)));
    ks = std::max(ks, std::abs(a.cdf_left(x) - b.cdf_left(x)));
  }
  return std::min(ks, 1.0);
}

double topsoe_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error("topsoe", "dimension mismatch");
  }
  double sp = 0.0;
  double sq = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] < 0.0 || q[k] < 0.0) throw Error("topsoe", "negative entry");
    sp += p[k];
    sq += q[k];
  }
  if (!(sp > 0.0) || !(sq > 0.0)) {
    throw Error("topsoe", "matrix has no positive mass");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0.0 && q[k] == 0.0) continue;
    d += topsoe_term(p[k] / sp, q[k] / sq);
  }
  return std::max(d, 0.0);
}

double topsoe_distance(const TrafficMatrix& m, const TrafficMatrix& m_prime) {
  if (m.layout().node_count() != m_prime.layout().node_count()) {
    throw Error("topsoe", "dimension mismatch");
  }
  const double sp = static_cast<double>(m.total_bytes());
  const double sq = static_cast<double>(m_prime.total_bytes());
  if (!(sp > 0.0) || !(sq > 0.0)) {
    throw Error("topsoe", "matrix has no positive mass");
  }
  const auto a = m.entries();
  const auto b = m_prime.entries();
  auto key_less = [](const TmEntry& x, const TmEntry& y) {
    return x.src != y.src ? x.src < y.src : x.dst < y.dst;
  };
  double d = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    double p = 0.0;
    double q = 0.0;
    if (j == b.size() || (i < a.size() && key_less(a[i], b[j]))) {
      p = static_cast<double>(a[i++].bytes);
    } else if (i == a.size() || key_less(b[j], a[i])) {
      q = static_cast<double>(b[j++].bytes);
    } else {
      p = static_cast<double>(a[i++].bytes);
      q = static_cast<double>(b[j++].bytes);
    }
    d += topsoe_term(p / sp, q / sq);
  }
  return std::max(d, 0.0);
}

ComparisonReport compare(const StepDistribution& a, const StepDistribution& b,
                         std::size_t n_points) {
  ComparisonReport r;
  r.ks_sup_distance = ks_distance(a, b);

  n_points = std::max<std::size_t>(n_points, 1);
  r.qq_points.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double u = (static_cast<double>(k) + 0.5) /
                     static_cast<double>(n_points);
    r.qq_points.emplace_back(a.quantile(u), b.quantile(u));
  }

  const auto xs = merged_support(a, b);
  const std::size_t cap = 10 * n_points;
  const std::size_t stride = xs.size() > cap ? (xs.size() + cap - 1) / cap : 1;
  for (std::size_t k = 0; k < xs.size(); k += stride) {
    r.pp_points.emplace_back(a.cdf(xs[k]), b.cdf(xs[k]));
  }
  if ((xs.size() - 1) % stride != 0) {
    r.pp_points.emplace_back(a.cdf(xs.back()), b.cdf(xs.back()));
  }
  std::stable_sort(r.pp_points.begin(), r.pp_points.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  // Cells cut at the n_points-quantiles of b; both laws measured on them.
  std::vector<double> edges;
  for (std::size_t k = 1; k < n_points; ++k) {
    const double e = b.quantile(static_cast<double>(k) /
                                static_cast<double>(n_points));
    if (edges.empty() || e > edges.back()) edges.push_back(e);
  }
  std::vector<double> pa;
  std::vector<double> pb;
  double prev_a = 0.0;
  double prev_b = 0.0;
  for (double e : edges) {
    const double ca = a.cdf(e);
    const double cb = b.cdf(e);
    pa.push_back(std::max(0.0, ca - prev_a));
    pb.push_back(std::max(0.0, cb - prev_b));
    prev_a = ca;
    prev_b = cb;
  }
  pa.push_back(std::max(0.0, 1.0 - prev_a));
  pb.push_back(std::max(0.0, 1.0 - prev_b));
  r.topsoe = topsoe_distance(pa, pb);
  return r;
}

}  // namespace dcflowgen
