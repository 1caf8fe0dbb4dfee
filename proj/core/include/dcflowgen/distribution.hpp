#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcflowgen/rng.hpp"

namespace dcflowgen {

enum class SupportKind { kBytes, kSeconds, kCount };

// How the CDF behaves between two listed points.
//   kLinear: straight line between consecutive points (piecewise-uniform
//            density). Suited to curves digitized from plots.
//   kStep:   constant until the next point; every point is an atom.
// In both modes the first point carries an atom of mass cum_prob[0].
enum class Interpolation { kLinear, kStep };

std::string_view to_string(SupportKind kind);
std::string_view to_string(Interpolation interp);

struct CdfPoint {
  double value = 0.0;
  double cum_prob = 0.0;

  friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

// A right-continuous CDF over non-negative values, given by its breakpoints.
//
// Invariants (checked on construction, violations throw dcflowgen::Error):
//   - at least one point
//   - values >= 0 and strictly increasing
//   - cum_prob in [0, 1] and non-decreasing
//   - last cum_prob equals 1 within 1e-9 (it is then snapped to exactly 1)
class StepDistribution {
 public:
  StepDistribution(std::vector<CdfPoint> points, SupportKind kind,
                   Interpolation interp = Interpolation::kLinear);

  static StepDistribution point_mass(double value, SupportKind kind);

  std::span<const CdfPoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  SupportKind kind() const { return kind_; }
  Interpolation interpolation() const { return interp_; }

  double min_value() const { return points_.front().value; }
  double max_value() const { return points_.back().value; }
  bool is_point_mass() const;

  double cdf(double x) const;
  double cdf_left(double x) const;  // lim_{y -> x-} cdf(y)
  double quantile(double u) const;  // inverse transform, u in [0, 1)
  double mean() const;

  // P(X = x) for step semantics; probability of [x - 0.5, x + 0.5) for
  // linear semantics. Used to read degree priors.
  double probability_at(double x) const;

  StepDistribution shifted(double delta) const;
  StepDistribution scaled(double factor) const;
  StepDistribution with_interpolation(Interpolation interp) const;

  friend bool operator==(const StepDistribution&,
                         const StepDistribution&) = default;

 private:
  // Index of the last point with value <= x, or npos when x < min_value().
  std::size_t floor_index(double x) const;

  std::vector<CdfPoint> points_;
  SupportKind kind_;
  Interpolation interp_;
};

double sample(const StepDistribution& dist, Rng& rng);

// Right-continuous empirical CDF with one atom per distinct sample value.
StepDistribution empirical_cdf(std::span<const double> samples,
                               SupportKind kind = SupportKind::kBytes);

// Conditional distribution of X given X > threshold. Throws if no mass lies
// above the threshold.
StepDistribution restrict_above(const StepDistribution& dist,
                                double threshold);

// CSV: `value,cum_prob` per line, `#` starts a comment line, an optional
// `value,cum_prob` header line is skipped. Count-valued files default to step
// semantics, everything else to linear.
StepDistribution parse_distribution_csv(std::string_view text,
                                        SupportKind kind,
                                        Interpolation interp);
StepDistribution read_distribution_csv(const std::filesystem::path& path,
                                       SupportKind kind);
StepDistribution read_distribution_csv(const std::filesystem::path& path,
                                       SupportKind kind,
                                       Interpolation interp);
std::string format_distribution_csv(const StepDistribution& dist);
void write_distribution_csv(const std::filesystem::path& path,
                            const StepDistribution& dist);

Interpolation default_interpolation(SupportKind kind);

}  // namespace dcflowgen
