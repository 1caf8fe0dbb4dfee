#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dcflowgen/distribution.hpp"
#include "dcflowgen/traffic_matrix.hpp"

namespace dcflowgen {

struct ComparisonReport {
  double topsoe = 0.0;
  double ks_sup_distance = 0.0;
  std::vector<std::pair<double, double>> qq_points;  // (quantile_a, quantile_b)
  std::vector<std::pair<double, double>> pp_points;  // (F_a(x), F_b(x))
};

// sup_x |F_a(x) - F_b(x)|, exact for piecewise-linear and step CDFs: both
// the value and the left limit are compared at every breakpoint of either.
double ks_distance(const StepDistribution& a, const StepDistribution& b);

// Symmetric relative entropy
//   sum_k  p_k ln(2 p_k / (p_k + q_k)) + q_k ln(2 q_k / (p_k + q_k))
// after normalizing each side to sum 1. Terms with a zero weight contribute
// nothing; cells where both are zero are skipped. Throws if either side has
// no positive mass or the lengths differ.
double topsoe_distance(std::span<const double> p, std::span<const double> q);

// Over the union of the nonzero entries of both matrices.
double topsoe_distance(const TrafficMatrix& m, const TrafficMatrix& m_prime);

// qq_points: n_points quantile pairs at u = (k + 1/2) / n_points.
// pp_points: both CDFs at the merged breakpoints, thinned evenly to at most
//            10 * n_points pairs.
// topsoe:    Topsoe distance of the two laws discretized on the cells
//            (q_{k-1}, q_k] cut by the n_points-quantiles q_k of b, so that
//            a continuous law and a sample of it compare finitely.
ComparisonReport compare(const StepDistribution& a, const StepDistribution& b,
                         std::size_t n_points = 101);

}  // namespace dcflowgen
