#include "dcflowgen/traffic_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dcflowgen/error.hpp"

namespace dcflowgen {

RackLayout::RackLayout(std::uint32_t n, std::uint32_t m) : n_(n), m_(m) {
  if (n == 0 || m == 0) {
    throw Error("layout", "node count and rack size must be positive");
  }
}

NodeId RackLayout::rack_end(std::uint32_t rack) const {
  const std::uint64_t end = static_cast<std::uint64_t>(rack + 1) * m_;
  return static_cast<NodeId>(std::min<std::uint64_t>(end, n_));
}

TrafficMatrix::TrafficMatrix(RackLayout layout, double epoch_length)
    : layout_(layout), epoch_length_(epoch_length) {
  if (!(epoch_length > 0.0)) {
    throw Error("traffic matrix", "epoch length must be positive");
  }
}

TrafficMatrix TrafficMatrix::from_entries(RackLayout layout,
                                          std::vector<TmEntry> entries,
                                          double epoch_length) {
  TrafficMatrix tm(layout, epoch_length);
  for (const auto& e : entries) {
    if (e.src == e.dst) {
      throw Error("traffic matrix",
                  "diagonal entry at node " + std::to_string(e.src));
    }
    if (e.src >= layout.node_count() || e.dst >= layout.node_count()) {
      throw Error("traffic matrix", "node id out of range");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const TmEntry& a, const TmEntry& b) {
              return a.src != b.src ? a.src < b.src : a.dst < b.dst;
            });
  for (const auto& e : entries) {
    if (e.bytes == 0) continue;
    if (!tm.entries_.empty() && tm.entries_.back().src == e.src &&
        tm.entries_.back().dst == e.dst) {
      tm.entries_.back().bytes += e.bytes;
    } else {
      tm.entries_.push_back(e);
    }
  }
  return tm;
}

std::uint64_t TrafficMatrix::at(NodeId src, NodeId dst) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(),
                             TmEntry{src, dst, 0},
                             [](const TmEntry& a, const TmEntry& b) {
                               return a.src != b.src ? a.src < b.src
                                                     : a.dst < b.dst;
                             });
  if (it != entries_.end() && it->src == src && it->dst == dst) {
    return it->bytes;
  }
  return 0;
}

std::uint64_t TrafficMatrix::total_bytes() const {
  std::uint64_t t = 0;
  for (const auto& e : entries_) t += e.bytes;
  return t;
}

TrafficMatrix TrafficMatrix::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error("traffic matrix", "bad scale factor");
  TrafficMatrix out(layout_, epoch_length_);
  out.entries_.reserve(entries_.size());
  for (const auto& e : entries_) {
    const auto b = static_cast<std::uint64_t>(
        std::llround(static_cast<double>(e.bytes) * factor));
    if (b > 0) out.entries_.push_back({e.src, e.dst, b});
  }
  return out;
}

}  // namespace dcflowgen
