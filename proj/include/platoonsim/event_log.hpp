#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "platoonsim/packet.hpp"
#include "platoonsim/sbsps_mac.hpp"

namespace platoonsim {

inline constexpr const char *kLogSchemaHeader = "#platoonsim-log v1";

enum class FailCause
{
  Sinr,       // below threshold without any co-channel interferer
  HalfDuplex, // receiver was transmitting in the same TTI
  Collision,  // would have decoded without the co-channel interferers
  Blocked     // LiFi receiver outside the field of view
};

struct GenerationEvent
{
  VehicleId source;
  std::int64_t seq = 0;
  bool operator== (const GenerationEvent &) const = default;
};

struct GrantEvent
{
  VehicleId vehicle;
  GrantReason reason = GrantReason::Initial;
  std::int64_t tx_tti = 0;
  int subchannel = 0;
  int counter = 0;
  bool operator== (const GrantEvent &) const = default;
};

struct TxEvent
{
  VehicleId vehicle;
  int subchannel = 0;
  int packets = 0;
  bool operator== (const TxEvent &) const = default;
};

struct RxEvent
{
  VehicleId tx;
  VehicleId rx;
  bool success = true;
  FailCause cause = FailCause::Sinr; // meaningful only when !success
  std::optional<double> sinr_db;     // absent for half-duplex failures
  bool operator== (const RxEvent &) const = default;
};

struct LifiTxEvent
{
  VehicleId from;
  VehicleId to;
  std::int64_t seq = 0;
  TimeNs send_ns = 0;
  TimeNs arrival_ns = 0;
  bool operator== (const LifiTxEvent &) const = default;
};

struct CompletionEvent
{
  VehicleId source;
  std::int64_t seq = 0;
  TimeNs gen_ns = 0;
  TimeNs arrival_ns = 0;
  std::vector<Hop> trace;
  bool operator== (const CompletionEvent &) const = default;
};

// Measured-stream packet that will never reach the tail (lost) or was still
// travelling when the run ended (in-flight).
struct PacketFateEvent
{
  VehicleId source;
  std::int64_t seq = 0;
  TimeNs gen_ns = 0;
  bool in_flight = false;
  bool operator== (const PacketFateEvent &) const = default;
};

struct EndEvent
{
  std::int64_t generated = 0;
  std::int64_t completed = 0;
  std::int64_t lost = 0;
  std::int64_t in_flight = 0;
  bool operator== (const EndEvent &) const = default;
};

using EventBody = std::variant<GenerationEvent, GrantEvent, TxEvent, RxEvent, LifiTxEvent, CompletionEvent,
                               PacketFateEvent, EndEvent>;

struct Event
{
  std::int64_t tti = 0;
  EventBody body;
  bool operator== (const Event &) const = default;
};

std::string_view to_string (GrantReason r);
std::string_view to_string (FailCause c);

// Append-only, chronologically ordered log. The text form is one event per
// line after a schema header and a comment block echoing the run
// configuration.
class EventLog
{
public:
  std::string architecture;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<std::string> config_echo; // "key = value" lines

  void append (std::int64_t tti, EventBody body);
  const std::vector<Event> &events () const { return events_; }
  std::size_t size () const { return events_.size (); }
  void reserve (std::size_t n) { events_.reserve (n); }

  void write (std::ostream &os) const;
  std::string to_text () const;
  static EventLog parse (std::istream &is);

private:
  std::vector<Event> events_;
};

std::string format_hex64 (std::uint64_t v);

} // namespace platoonsim
