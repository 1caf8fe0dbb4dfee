#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dcflowgen/layout.hpp"

namespace dcflowgen {

struct TmEntry {
  NodeId src = 0;
  NodeId dst = 0;
  std::uint64_t bytes = 0;

  friend bool operator==(const TmEntry&, const TmEntry&) = default;
};

// Sparse n x n byte counts for one epoch. Entries are kept sorted by
// (src, dst), are strictly positive, and never sit on the diagonal.
class TrafficMatrix {
 public:
  explicit TrafficMatrix(RackLayout layout, double epoch_length = 10.0);

  // Duplicate (src, dst) entries are summed and zero entries dropped.
  static TrafficMatrix from_entries(RackLayout layout,
                                    std::vector<TmEntry> entries,
                                    double epoch_length = 10.0);

  const RackLayout& layout() const { return layout_; }
  double epoch_length() const { return epoch_length_; }
  std::span<const TmEntry> entries() const { return entries_; }
  std::size_t nonzero_count() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::uint64_t at(NodeId src, NodeId dst) const;
  std::uint64_t total_bytes() const;

  // Every entry multiplied by factor and rounded to whole bytes.
  TrafficMatrix scaled(double factor) const;

  friend bool operator==(const TrafficMatrix&,
                         const TrafficMatrix&) = default;

 private:
  RackLayout layout_;
  double epoch_length_;
  std::vector<TmEntry> entries_;
};

}  // namespace dcflowgen
