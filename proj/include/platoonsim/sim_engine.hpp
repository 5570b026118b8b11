#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "platoonsim/config.hpp"
#include "platoonsim/event_log.hpp"
#include "platoonsim/metrics.hpp"
#include "platoonsim/relay_plan.hpp"
#include "platoonsim/sbsps_mac.hpp"

namespace platoonsim {

// Static received-power table between the simulated vehicles (node indices).
class LinkTable
{
public:
  LinkTable (const ScenarioLayout &layout, std::span<const VehicleId> nodes, const Cv2xParams &params,
             std::uint64_t shadowing_seed = 0);

  int size () const { return n_; }
  double rx_dbm (int tx, int rx) const { return dbm_[static_cast<std::size_t> (tx * n_ + rx)]; }

private:
  int n_;
  std::vector<double> dbm_;
};

struct Transmission
{
  int node = 0;
  int subchannel = 0;
};

struct Reception
{
  int tx = 0; // index into the transmission list
  int rx = 0; // receiving node
  bool success = false;
  FailCause cause = FailCause::Sinr;
  std::optional<double> sinr_db;
};

// Every node other than the transmitter attempts every transmission of the
// TTI. Co-channel interference comes from all other same-subchannel
// transmitters; different subchannels are orthogonal.
std::vector<Reception> resolve_receptions (std::span<const Transmission> txs, const LinkTable &links,
                                           const Cv2xParams &params, bool half_duplex);

struct EngineCounters
{
  std::int64_t generated = 0;
  std::int64_t completed = 0;
  std::int64_t lost = 0;
  std::int64_t in_flight = 0;

  bool operator== (const EngineCounters &) const = default;
};

struct RunResult
{
  EventLog log;
  MetricsSummary summary;
  EngineCounters counters; // measured stream, generated at or after warmup
};

// TTI-stepped world: traffic generation, LiFi deliveries, SPS transmissions
// with reception resolution, relaying along the plan, then sensing.
class Simulation
{
public:
  explicit Simulation (EngineConfig config);

  void step ();
  std::int64_t next_tti () const { return tti_; }
  bool done () const { return tti_ >= end_tti_; }

  // Accounts for packets still travelling and returns the log with its
  // summary. The simulation is spent afterwards.
  RunResult finish ();

  const EngineConfig &config () const { return config_; }
  const RelayPlan &plan () const { return plan_; }
  const EventLog &log () const { return log_; }
  const EngineCounters &counters () const { return counters_; }
  std::span<const VehicleId> nodes () const { return nodes_; }
  const SpsMac &mac (VehicleId v) const;
  std::optional<double> lifi_latency_s () const { return lifi_latency_s_; }

private:
  struct Tracked
  {
    TimeNs gen_ns = 0;
    int live = 0;
    bool completed = false;
    bool lost = false;
    std::vector<bool> reached; // by position in the target platoon
  };

  struct PendingLifi
  {
    int to_node;
    TimeNs arrival_ns;
    Packet packet;
  };

  int node_of (VehicleId v) const;
  bool measured (const Packet &p) const { return p.source == plan_.source; }
  bool counted (const Tracked &t) const { return t.gen_ns >= warmup_ns_; }

  void generate (int node);
  void arrive (int node, Packet packet, TimeNs when);
  void send_lifi (int from_node, const RelayEdge &edge, const Packet &packet, TimeNs send_ns);
  void release_copy (std::int64_t seq);

  EngineConfig config_;
  RelayPlan plan_;
  std::vector<VehicleId> nodes_;
  std::vector<int> node_index_; // layout dense index -> node, -1 when absent
  LinkTable links_;
  std::vector<SpsMac> macs_;
  std::vector<int> gen_offset_;
  std::vector<std::int64_t> acquire_tti_;
  std::vector<std::int64_t> next_seq_;
  std::optional<double> lifi_latency_s_;

  std::vector<Tracked> tracked_; // measured stream, indexed by seq
  std::multimap<std::int64_t, PendingLifi> lifi_pending_;

  EventLog log_;
  EngineCounters counters_;
  std::int64_t tti_ = 0;
  std::int64_t end_tti_ = 0;
  TimeNs tti_ns_ = 0;
  TimeNs warmup_ns_ = 0;
  int gen_interval_ = 10;
  bool finished_ = false;
};

RunResult run (const EngineConfig &config);

} // namespace platoonsim
