#pragma once

#include <cstdint>

namespace dcflowgen {

// TCP acknowledgment overhead. One 66-byte ACK is sent for every r
// full-size payload segments, so a payload of p bytes causes about
// beta * p ACK bytes in the reverse direction.
struct AckModel {
  double r = 2.5;
  double mss = 1448.0;
  double ack_packet_size = 66.0;

  double beta() const { return ack_packet_size / (mss * r); }

  // Throws dcflowgen::Error unless r > 0, mss > 0 and 0 < beta < 1.
  void validate() const;
};

// 66 * ceil(p / (mss * r)): bytes of the ACK flow answering a payload flow
// of p bytes.
std::uint64_t ack_flow_size(std::uint64_t payload, const AckModel& model);

}  // namespace dcflowgen
