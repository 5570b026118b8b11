#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "platoonsim/packet.hpp"

namespace platoonsim {

using Rng = std::mt19937_64;

// Independent, reproducible stream seed for (seed, stream) pairs.
std::uint64_t stream_seed (std::uint64_t seed, std::uint64_t stream);

struct SpsParams
{
  int num_subchannels = 4;
  int period_ttis = 100; // reservation period (RRI) in TTIs
  int sensing_window_ttis = 1000;
  int selection_min_ttis = 1;
  int selection_max_ttis = 20;
  double keep_probability = 0.4;
  int counter_min = 5;
  int counter_max = 15;
  double rsrp_threshold_dbm = -110.0;
  double rsrp_step_db = 3.0;
  double min_candidate_fraction = 0.2;
  // Also treat every subchannel of a TTI carrying a reservation above the
  // RSRP threshold as occupied, so the selecting vehicle does not end up
  // deaf to that neighbor (half-duplex).
  bool exclude_reserved_ttis = true;

  int candidate_count () const { return (selection_max_ttis - selection_min_ttis + 1) * num_subchannels; }
  int tranche_size () const;
  void validate () const;
};

struct ResourceId
{
  std::int64_t tti = 0;
  int subchannel = 0;

  bool operator== (const ResourceId &) const = default;
};

// Successive transmissions happen at anchor_tti + k * period_ttis. The engine
// keeps anchor_tti pointing at the next pending transmission.
struct Grant
{
  std::int64_t anchor_tti = 0;
  int subchannel = 0;
  int period_ttis = 100;
  int reselection_counter = 0;

  bool operator== (const Grant &) const = default;
};

// Reservation announced in-band with every transmission.
struct Reservation
{
  int source = -1;
  std::int64_t next_tti = 0;
  int subchannel = 0;
  int period_ttis = 100;
  int remaining = 0;

  bool operator== (const Reservation &) const = default;
};

struct SensingObservation
{
  ResourceId resource;
  double power_dbm = -INFINITY;
  std::optional<Reservation> announced; // present iff the transmission decoded
};

// Ring buffer of per-resource received energy over the sensing window, plus
// the latest decoded reservation of every neighbor.
class SensingRecord
{
public:
  struct HeardReservation
  {
    Reservation reservation;
    double rsrp_dbm = -INFINITY;
    std::int64_t heard_tti = 0;
  };

  SensingRecord (int window_ttis, int num_subchannels);

  // Throws std::logic_error for TTIs marked blind or older than the clock.
  void record (std::int64_t tti, std::span<const SensingObservation> observations);
  void mark_blind (std::int64_t tti);

  std::int64_t clock () const { return clock_; }
  int window_ttis () const { return window_; }
  bool is_blind (std::int64_t tti) const;
  bool in_window (std::int64_t tti) const { return tti <= clock_ && clock_ - tti <= window_; }

  // nullopt for TTIs never sensed, blind, or evicted; -inf when the TTI was
  // sensed but the subchannel was idle.
  std::optional<double> power_dbm (ResourceId resource) const;

  // Linear mean of the sensed power on candidate's subchannel at
  // candidate.tti - k * period (k >= 1) inside the window; -inf if unsensed.
  double mean_power_dbm (ResourceId candidate, int period_ttis) const;

  std::vector<HeardReservation> active_reservations () const;

private:
  struct Slot
  {
    std::int64_t tti = -1;
    bool blind = false;
    std::vector<double> power_mw;
  };

  Slot &slot_for (std::int64_t tti);
  const Slot *find_slot (std::int64_t tti) const;
  void advance_clock (std::int64_t tti);

  int window_;
  int num_subchannels_;
  std::int64_t clock_ = -1;
  std::vector<Slot> ring_;
  std::map<int, HeardReservation> latest_;
};

struct SelectionTrace
{
  int candidates = 0;
  int after_exclusion = 0;
  int escalations = 0;
  double final_threshold_dbm = 0.0;
  std::vector<ResourceId> tranche;
  std::vector<double> tranche_power_dbm;
};

int draw_reselection_counter (const SpsParams &params, Rng &rng);
bool draw_keep (const SpsParams &params, Rng &rng);

// Sensing-based selection over [now + selection_min, now + selection_max]
// times every subchannel: exclusion against announced reservations with RSRP
// threshold escalation, then a uniform pick among the lowest-energy tranche.
Grant select_resource (const SpsParams &params, const SensingRecord &sensing, std::int64_t now, Rng &rng,
                       SelectionTrace *trace = nullptr);

enum class GrantReason
{
  Initial,
  Reselect,
  Keep
};

struct GrantDecision
{
  GrantReason reason = GrantReason::Initial;
  std::int64_t decided_tti = 0;
  Grant grant;
};

struct TxOutcome
{
  std::vector<Packet> packets;
  int subchannel = 0;
  std::optional<GrantDecision> decision; // set when the counter expired
  Reservation announcement;
};

// Per-vehicle semi-persistent scheduler with its packet queue and RNG stream.
class SpsMac
{
public:
  SpsMac (SpsParams params, int id, std::uint64_t rng_seed);

  GrantDecision acquire (std::int64_t now);

  void record_sensing (std::int64_t tti, std::span<const SensingObservation> observations);

  bool transmits_at (std::int64_t tti) const { return grant_ && grant_->anchor_tti == tti; }

  // Must be called exactly at the pending grant instance.
  TxOutcome on_transmission (std::int64_t now);

  std::int64_t next_tx_tti (std::int64_t now) const;

  void enqueue (Packet packet);

  int id () const { return id_; }
  const SpsParams &params () const { return params_; }
  const std::optional<Grant> &grant () const { return grant_; }
  const std::deque<Packet> &queue () const { return queue_; }
  const SensingRecord &sensing () const { return sensing_; }
  Rng &rng () { return rng_; }

  // Test hook: install a grant directly.
  void set_grant (Grant grant) { grant_ = grant; }

private:
  SpsParams params_;
  int id_;
  Rng rng_;
  SensingRecord sensing_;
  std::optional<Grant> grant_;
  std::deque<Packet> queue_;
};

} // namespace platoonsim
