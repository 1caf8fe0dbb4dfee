#pragma once

#include <cstddef>

#include "dcflowgen/ack_model.hpp"
#include "dcflowgen/distribution.hpp"

namespace dcflowgen {

struct DeconvolutionConfig {
  std::size_t grid_size = std::size_t{1} << 22;  // power of two
  std::size_t product_terms = 64;
  std::size_t smoothing_window = 5;  // odd; 1 disables smoothing
  bool negativity_clip = true;
};

// Given the law of Z = X + beta * Y with X, Y iid, estimate the law of X.
//
// Z is rasterized on a grid of cfg.grid_size nodes spanning 1.05 * max(Z).
// With g the characteristic function of Z, the one of X is
//   f(t) = prod_{k >= 0} g(beta^(2k) t) / g(beta^(2k+1) t).
// g(beta^m t) on the DFT frequencies is taken from the DFT of beta^m * Z
// rasterized on the same grid. Factors whose scaled variable fits into the
// first cell are exactly 1 and are skipped. The inverse transform of f is
// clipped at zero, smoothed by a centered moving average, renormalized and
// returned as a piecewise-linear CDF.
//
// A point mass at v yields the point mass at v / (1 + beta). Throws
// dcflowgen::Error when a denominator falls below 1e-12 in magnitude.
StepDistribution deconvolve(const StepDistribution& z, const AckModel& model,
                            const DeconvolutionConfig& cfg = {});

// Law of X + beta * Y for X, Y iid from x. Small step distributions are
// enumerated pairwise; everything else goes through a grid convolution with
// grid_size nodes.
StepDistribution reconvolve_check(const StepDistribution& x,
                                  const AckModel& model,
                                  std::size_t grid_size = std::size_t{1} << 22);

}  // namespace dcflowgen
