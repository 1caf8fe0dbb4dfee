#pragma once

#include <cstdint>

namespace dcflowgen {

using NodeId = std::uint32_t;

// n servers in racks of m. Node i lives in rack i / m; the last rack holds
// the remainder when m does not divide n.
class RackLayout {
 public:
  RackLayout(std::uint32_t n, std::uint32_t m);

  std::uint32_t node_count() const { return n_; }
  std::uint32_t rack_size() const { return m_; }
  std::uint32_t rack_count() const { return (n_ + m_ - 1) / m_; }

  std::uint32_t rack_of(NodeId i) const { return i / m_; }
  bool same_rack(NodeId a, NodeId b) const { return a / m_ == b / m_; }
  NodeId rack_begin(std::uint32_t rack) const { return rack * m_; }
  NodeId rack_end(std::uint32_t rack) const;
  std::uint32_t size_of_rack(std::uint32_t rack) const {
    return rack_end(rack) - rack_begin(rack);
  }

  friend bool operator==(const RackLayout&, const RackLayout&) = default;

 private:
  std::uint32_t n_;
  std::uint32_t m_;
};

}  // namespace dcflowgen
