#pragma once

#include <cstdint>
#include <vector>

#include "platoonsim/scenario.hpp"

namespace platoonsim {

// All simulation timestamps are integer nanoseconds.
using TimeNs = std::int64_t;
inline constexpr TimeNs kNsPerMs = 1'000'000;

struct Hop
{
  VehicleId vehicle;
  TimeNs time_ns = 0;

  bool operator== (const Hop &) const = default;
};

// hop_trace starts with (source, gen_time_ns); every further entry is an
// arrival at a relay or at the tail.
struct Packet
{
  VehicleId source;
  std::int64_t seq = 0;
  TimeNs gen_time_ns = 0;
  int size_bytes = 300;
  std::vector<Hop> hop_trace;
};

} // namespace platoonsim
