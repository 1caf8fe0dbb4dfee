#pragma once

#include <vector>

#include "dcflowgen/distribution.hpp"

namespace dcflowgen {

// Probability masses on a uniform lattice. masses[k] sits at the node
// origin + k * bin_width and stands for the cell
// [node - bin_width / 2, node + bin_width / 2).
struct DensityGrid {
  double origin = 0.0;
  double bin_width = 1.0;
  std::vector<double> masses;

  std::size_t size() const { return masses.size(); }
  double node(std::size_t k) const {
    return origin + static_cast<double>(k) * bin_width;
  }
  double total() const;
  double mean() const;
  void normalize();
};

// Distribution of the sum of independent draws from a and b. Both grids
// must share bin_width (relative tolerance 1e-9). Large inputs go through
// an FFT; round-off negatives are clipped and the result renormalized.
DensityGrid convolve(const DensityGrid& a, const DensityGrid& b);

// Same result, by the O(n*m) double loop. Exposed for tests and small grids.
DensityGrid convolve_direct(const DensityGrid& a, const DensityGrid& b);

// Cell masses of scale * X on the grid with nodes 0, w, 2w, ... The first
// cell is [0, w/2); mass beyond the last cell is folded into it.
DensityGrid rasterize(const StepDistribution& dist, double bin_width,
                      std::size_t grid_size, double scale = 1.0);

// Piecewise-linear CDF with each node's mass spread uniformly over its cell.
// Runs of empty cells collapse to their end points.
StepDistribution to_distribution(const DensityGrid& grid,
                                 SupportKind kind = SupportKind::kBytes);

}  // namespace dcflowgen
