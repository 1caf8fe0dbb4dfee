#include "dcflowgen/distribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dcflowgen/error.hpp"

namespace dcflowgen {
namespace {

constexpr std::size_t kNpos = std::numeric_limits<std::size_t>::max();
constexpr double kTotalTolerance = 1e-9;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

std::string_view to_string(SupportKind kind) {
  switch (kind) {
    case SupportKind::kBytes:
      return "bytes";
    case SupportKind::kSeconds:
      return "seconds";
    case SupportKind::kCount:
      return "count";
  }
  return "unknown";
}

std::string_view to_string(Interpolation interp) {
  return interp == Interpolation::kLinear ? "linear" : "step";
}

Interpolation default_interpolation(SupportKind kind) {
  return kind == SupportKind::kCount ? Interpolation::kStep
                                     : Interpolation::kLinear;
}

StepDistribution::StepDistribution(std::vector<CdfPoint> points,
                                   SupportKind kind, Interpolation interp)
    : points_(std::move(points)), kind_(kind), interp_(interp) {
  if (points_.empty()) {
    throw Error("distribution", "needs at least one point");
  }
  double prev_value = -1.0;
  double prev_cum = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.value) || !std::isfinite(p.cum_prob)) {
      throw Error("distribution", "non-finite point at index " +
                                      std::to_string(i));
    }
    if (p.value < 0.0) {
      throw Error("distribution", "negative value at index " +
                                      std::to_string(i));
    }
    if (i > 0 && !(p.value > prev_value)) {
      throw Error("distribution", "values not strictly increasing at index " +
                                      std::to_string(i));
    }
    if (p.cum_prob < -kTotalTolerance || p.cum_prob > 1.0 + kTotalTolerance ||
        p.cum_prob < prev_cum - kTotalTolerance) {
      throw Error("distribution", "cum_prob out of order at index " +
                                      std::to_string(i));
    }
    prev_value = p.value;
    prev_cum = std::max(prev_cum, p.cum_prob);
  }
  if (std::abs(points_.back().cum_prob - 1.0) > kTotalTolerance) {
    throw Error("distribution", "last cum_prob must be 1");
  }
  // Snap rounding noise so every query sees an exact CDF.
  double running = 0.0;
  for (auto& p : points_) {
    p.cum_prob = std::clamp(std::max(running, p.cum_prob), 0.0, 1.0);
    running = p.cum_prob;
  }
  points_.back().cum_prob = 1.0;
}

StepDistribution StepDistribution::point_mass(double value, SupportKind kind) {
  return StepDistribution({{value, 1.0}}, kind, Interpolation::kStep);
}

bool StepDistribution::is_point_mass() const {
  return points_.front().cum_prob >= 1.0;
}

std::size_t StepDistribution::floor_index(double x) const {
  auto it = std::upper_bound(
      points_.begin(), points_.end(), x,
      [](double v, const CdfPoint& p) { return v < p.value; });
  if (it == points_.begin()) return kNpos;
  return static_cast<std::size_t>(it - points_.begin()) - 1;
}

double StepDistribution::cdf(double x) const {
  const std::size_t i = floor_index(x);
  if (i == kNpos) return 0.0;
  if (i + 1 == points_.size()) return 1.0;
  const auto& a = points_[i];
  if (interp_ == Interpolation::kStep) return a.cum_prob;
  const auto& b = points_[i + 1];
  const double t = (x - a.value) / (b.value - a.value);
  return a.cum_prob + t * (b.cum_prob - a.cum_prob);
}

double StepDistribution::cdf_left(double x) const {
  if (x <= points_.front().value) return 0.0;
  if (interp_ == Interpolation::kLinear) return cdf(x);
  // Step: value just below x is the cum_prob of the last point < x.
  auto it = std::lower_bound(
      points_.begin(), points_.end(), x,
      [](const CdfPoint& p, double v) { return p.value < v; });
  return std::prev(it)->cum_prob;
}

double StepDistribution::quantile(double u) const {
  auto it = std::upper_bound(
      points_.begin(), points_.end(), u,
      [](double v, const CdfPoint& p) { return v < p.cum_prob; });
  if (it == points_.end()) return points_.back().value;
  if (it == points_.begin() || interp_ == Interpolation::kStep) {
    return it->value;
  }
  const auto& a = *std::prev(it);
  const auto& b = *it;
  const double t = (u - a.cum_prob) / (b.cum_prob - a.cum_prob);
  return a.value + t * (b.value - a.value);
}

double StepDistribution::mean() const {
  double m = points_.front().value * points_.front().cum_prob;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double mass = points_[i].cum_prob - points_[i - 1].cum_prob;
    const double at = interp_ == Interpolation::kLinear
                          ? 0.5 * (points_[i].value + points_[i - 1].value)
                          : points_[i].value;
    m += mass * at;
  }
  return m;
}

double StepDistribution::probability_at(double x) const {
  if (interp_ == Interpolation::kStep) return cdf(x) - cdf_left(x);
  return cdf(x + 0.5) - cdf_left(x - 0.5);
}

StepDistribution StepDistribution::shifted(double delta) const {
  auto pts = points_;
  for (auto& p : pts) p.value += delta;
  return StepDistribution(std::move(pts), kind_, interp_);
}

StepDistribution StepDistribution::scaled(double factor) const {
  if (!(factor > 0.0)) {
    throw Error("distribution", "scale factor must be positive");
  }
  auto pts = points_;
  for (auto& p : pts) p.value *= factor;
  return StepDistribution(std::move(pts), kind_, interp_);
}

StepDistribution StepDistribution::with_interpolation(
    Interpolation interp) const {
  return StepDistribution(points_, kind_, interp);
}

double sample(const StepDistribution& dist, Rng& rng) {
  return dist.quantile(rng.uniform01());
}

StepDistribution empirical_cdf(std::span<const double> samples,
                               SupportKind kind) {
  if (samples.empty()) {
    throw Error("empirical_cdf", "no samples");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CdfPoint> pts;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    pts.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  return StepDistribution(std::move(pts), kind, Interpolation::kStep);
}

StepDistribution restrict_above(const StepDistribution& dist,
                                double threshold) {
  const auto pts = dist.points();
  if (threshold < pts.front().value) return dist;
  const double below = dist.cdf(threshold);
  const double above = 1.0 - below;
  if (!(above > 0.0)) {
    throw Error("restrict_above", "no probability mass above threshold");
  }
  std::vector<CdfPoint> out;
  if (dist.interpolation() == Interpolation::kLinear) {
    out.push_back({threshold, 0.0});
  }
  for (const auto& p : pts) {
    if (p.value <= threshold) continue;
    out.push_back({p.value, std::max(0.0, (p.cum_prob - below) / above)});
  }
  out.back().cum_prob = 1.0;
  return StepDistribution(std::move(out), dist.kind(), dist.interpolation());
}

StepDistribution parse_distribution_csv(std::string_view text,
                                        SupportKind kind,
                                        Interpolation interp) {
  std::vector<CdfPoint> pts;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw Error("distribution csv",
                  "line " + std::to_string(line_no) + ": expected two columns");
    }
    CdfPoint p;
    const bool ok = parse_double(line.substr(0, comma), p.value) &&
                    parse_double(line.substr(comma + 1), p.cum_prob);
    if (!ok) {
      if (!seen_data && trim(line.substr(0, comma)) == "value") continue;
      throw Error("distribution csv",
                  "line " + std::to_string(line_no) + ": not a number pair");
    }
    if (!pts.empty() && !(p.value > pts.back().value)) {
      throw Error("distribution csv", "line " + std::to_string(line_no) +
                                          ": values must strictly increase");
    }
    seen_data = true;
    pts.push_back(p);
  }
  return StepDistribution(std::move(pts), kind, interp);
}

StepDistribution read_distribution_csv(const std::filesystem::path& path,
                                       SupportKind kind) {
  return read_distribution_csv(path, kind, default_interpolation(kind));
}

StepDistribution read_distribution_csv(const std::filesystem::path& path,
                                       SupportKind kind,
                                       Interpolation interp) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("distribution csv", "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_distribution_csv(buf.str(), kind, interp);
  } catch (const Error& e) {
    throw Error("distribution csv", path.string() + ": " + e.what());
  }
}

std::string format_distribution_csv(const StepDistribution& dist) {
  std::string out = "# support=";
  out += to_string(dist.kind());
  out += " interpolation=";
  out += to_string(dist.interpolation());
  out += "\nvalue,cum_prob\n";
  for (const auto& p : dist.points()) {
    out += format_double(p.value);
    out += ',';
    out += format_double(p.cum_prob);
    out += '\n';
  }
  return out;
}

void write_distribution_csv(const std::filesystem::path& path,
                            const StepDistribution& dist) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("distribution csv", "cannot write " + path.string());
  }
  out << format_distribution_csv(dist);
}

}  // namespace dcflowgen
