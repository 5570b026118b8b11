#include "platoonsim/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace platoonsim {

LinkTable::LinkTable (const ScenarioLayout &layout, std::span<const VehicleId> nodes, const Cv2xParams &params,
                      std::uint64_t shadowing_seed)
    : n_ (static_cast<int> (nodes.size ())), dbm_ (nodes.size () * nodes.size (), -INFINITY)
{
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      {
        double p = rx_power_dbm (params, distance (layout, nodes[a], nodes[b]));
        if (params.shadowing_sigma_db > 0.0)
          {
            // one reciprocal draw per vehicle pair, keyed by layout position
            auto ia = static_cast<std::uint64_t> (layout.index_of (nodes[a]));
            auto ib = static_cast<std::uint64_t> (layout.index_of (nodes[b]));
            Rng rng (stream_seed (shadowing_seed, (std::min (ia, ib) << 32) | std::max (ia, ib)));
            p += std::normal_distribution<double> (0.0, params.shadowing_sigma_db) (rng);
          }
        dbm_[static_cast<std::size_t> (a * n_ + b)] = p;
        dbm_[static_cast<std::size_t> (b * n_ + a)] = p;
      }
}

std::vector<Reception>
resolve_receptions (std::span<const Transmission> txs, const LinkTable &links, const Cv2xParams &params,
                    bool half_duplex)
{
  std::vector<Reception> out;
  std::vector<char> transmitting (static_cast<std::size_t> (links.size ()), 0);
  for (const auto &t : txs)
    transmitting[static_cast<std::size_t> (t.node)] = 1;

  std::vector<double> interferers;
  for (int i = 0; i < static_cast<int> (txs.size ()); ++i)
    {
      const auto &tx = txs[static_cast<std::size_t> (i)];
      for (int rx = 0; rx < links.size (); ++rx)
        {
          if (rx == tx.node)
            continue;
          Reception r{i, rx, false, FailCause::Sinr, std::nullopt};
          if (half_duplex && transmitting[static_cast<std::size_t> (rx)])
            {
              r.cause = FailCause::HalfDuplex;
              out.push_back (r);
              continue;
            }
          interferers.clear ();
          for (const auto &other : txs)
            if (other.node != tx.node && other.node != rx && other.subchannel == tx.subchannel)
              interferers.push_back (links.rx_dbm (other.node, rx));
          double signal = links.rx_dbm (tx.node, rx);
          double sinr = sinr_db (signal, interferers, params.noise_power_dbm);
          r.sinr_db = sinr;
          r.success = decode_success (params, sinr);
          if (!r.success && !interferers.empty () &&
              decode_success (params, sinr_db (signal, {}, params.noise_power_dbm)))
            r.cause = FailCause::Collision;
          out.push_back (r);
        }
    }
  return out;
}

namespace {

std::vector<VehicleId>
simulated_vehicles (const EngineConfig &c)
{
  std::vector<VehicleId> v;
  for (int p = 0; p < c.layout.num_platoons; ++p)
    {
      if (!c.interference_platoons && p != c.layout.target_platoon)
        continue;
      for (int k = 1; k <= c.layout.platoon_size; ++k)
        v.push_back ({p, k});
    }
  return v;
}

EngineConfig
validated (EngineConfig c)
{
  c.validate ();
  return c;
}

} // namespace

Simulation::Simulation (EngineConfig config)
    : config_ (validated (std::move (config))),
      plan_ (build_relay_plan (config_.architecture, config_.layout, config_.plan)),
      nodes_ (simulated_vehicles (config_)),
      node_index_ (static_cast<std::size_t> (config_.layout.vehicle_count ()), -1),
      links_ (config_.layout, nodes_, config_.cv2x, stream_seed (config_.seed, 0xC0FFEE))
{
  tti_ns_ = config_.tti_ns ();
  end_tti_ = config_.duration_ttis ();
  warmup_ns_ = config_.warmup_ttis () * tti_ns_;
  gen_interval_ = config_.generation_interval_ttis ();
  const auto sps = config_.sps_params ();
  const int acquire_span = config_.mac.ttis_per_period;

  macs_.reserve (nodes_.size ());
  for (int n = 0; n < static_cast<int> (nodes_.size ()); ++n)
    {
      // Streams are keyed by layout position, so a vehicle draws the same
      // numbers whichever architecture or platoon subset is simulated.
      auto dense = static_cast<std::uint64_t> (config_.layout.index_of (nodes_[n]));
      node_index_[dense] = n;
      macs_.emplace_back (sps, static_cast<int> (dense), stream_seed (config_.seed, 2 * dense));
      Rng init (stream_seed (config_.seed, 2 * dense + 1));
      gen_offset_.push_back (std::uniform_int_distribution<int> (0, gen_interval_ - 1) (init));
      acquire_tti_.push_back (std::uniform_int_distribution<int> (0, acquire_span - 1) (init));
      next_seq_.push_back (0);
    }

  for (const auto &e : plan_.edges)
    if (e.link == LinkType::Lifi)
      try
        {
          lifi_latency_s_ = hop_latency_s (config_.lifi, e.length_m, config_.traffic.packet_size_bytes * 8,
                                           config_.lifi_angular_deviation_deg);
        }
      catch (const LinkUnavailable &)
        {
          lifi_latency_s_.reset ();
        }

  log_.architecture = std::string (to_string (config_.architecture));
  log_.seed = config_.seed;
  log_.config_hash = config_hash (config_);
  log_.config_echo = canonical_config_lines (config_);
  // rough budget: one reception per transmission per other node
  auto tx_per_tti = static_cast<double> (nodes_.size ()) / config_.mac.ttis_per_period *
                    (config_.mac.multi_grant ? config_.traffic.packets_per_rri : 1);
  log_.reserve (static_cast<std::size_t> (static_cast<double> (end_tti_) * tx_per_tti *
                                          (static_cast<double> (nodes_.size ()) + 1.0)) +
                static_cast<std::size_t> (end_tti_) * nodes_.size () / static_cast<std::size_t> (gen_interval_) + 64);
}

int
Simulation::node_of (VehicleId v) const
{
  if (!config_.layout.contains (v))
    return -1;
  return node_index_[static_cast<std::size_t> (config_.layout.index_of (v))];
}

const SpsMac &
Simulation::mac (VehicleId v) const
{
  int n = node_of (v);
  if (n < 0)
    throw std::out_of_range ("vehicle " + to_string (v) + " is not simulated");
  return macs_[static_cast<std::size_t> (n)];
}

void
Simulation::generate (int node)
{
  const VehicleId v = nodes_[static_cast<std::size_t> (node)];
  Packet p;
  p.source = v;
  p.seq = next_seq_[static_cast<std::size_t> (node)]++;
  p.gen_time_ns = tti_ * tti_ns_;
  p.size_bytes = config_.traffic.packet_size_bytes;
  log_.append (tti_, GenerationEvent{v, p.seq});

  if (measured (p))
    {
      p.hop_trace.push_back ({v, p.gen_time_ns});
      Tracked t;
      t.gen_ns = p.gen_time_ns;
      t.reached.assign (static_cast<std::size_t> (config_.layout.platoon_size) + 1, false);
      t.reached[1] = true;
      if (plan_.has_out_link (v, LinkType::Cv2x))
        t.live = 1;
      tracked_.push_back (std::move (t));
      if (counted (tracked_.back ()))
        ++counters_.generated;
      for (const auto *e : plan_.out_edges (v))
        if (e->link == LinkType::Lifi)
          send_lifi (node, *e, p, p.gen_time_ns);
      if (tracked_.back ().live == 0)
        release_copy (p.seq);
    }
  macs_[static_cast<std::size_t> (node)].enqueue (std::move (p));
}

void
Simulation::send_lifi (int from_node, const RelayEdge &edge, const Packet &packet, TimeNs send_ns)
{
  int to = node_of (edge.to);
  if (!lifi_latency_s_)
    {
      log_.append (tti_, RxEvent{edge.from, edge.to, false, FailCause::Blocked, std::nullopt});
      return;
    }
  (void) from_node;
  auto latency_ns = static_cast<TimeNs> (std::llround (*lifi_latency_s_ * 1e9));
  TimeNs arrival = send_ns + std::max<TimeNs> (latency_ns, 1);
  // hand-off to the receiving MAC at the first TTI boundary after arrival
  std::int64_t handoff = std::max<std::int64_t> ((arrival + tti_ns_ - 1) / tti_ns_, tti_ + 1);
  ++tracked_[static_cast<std::size_t> (packet.seq)].live;
  log_.append (tti_, LifiTxEvent{edge.from, edge.to, packet.seq, send_ns, arrival});
  lifi_pending_.emplace (handoff, PendingLifi{to, arrival, packet});
}

void
Simulation::arrive (int node, Packet packet, TimeNs when)
{
  const VehicleId v = nodes_[static_cast<std::size_t> (node)];
  auto &t = tracked_[static_cast<std::size_t> (packet.seq)];
  if (t.completed || t.reached[static_cast<std::size_t> (v.position)])
    return;
  t.reached[static_cast<std::size_t> (v.position)] = true;
  packet.hop_trace.push_back ({v, when});

  if (v == plan_.tail)
    {
      t.completed = true;
      if (counted (t))
        ++counters_.completed;
      log_.append (tti_, CompletionEvent{packet.source, packet.seq, packet.gen_time_ns, when, packet.hop_trace});
      return;
    }
  for (const auto *e : plan_.out_edges (v))
    if (e->link == LinkType::Lifi)
      send_lifi (node, *e, packet, when);
  if (plan_.has_out_link (v, LinkType::Cv2x))
    {
      ++t.live;
      macs_[static_cast<std::size_t> (node)].enqueue (std::move (packet));
    }
}

void
Simulation::release_copy (std::int64_t seq)
{
  auto &t = tracked_[static_cast<std::size_t> (seq)];
  if (t.live > 0)
    --t.live;
  if (t.live == 0 && !t.completed && !t.lost)
    {
      t.lost = true;
      if (counted (t))
        ++counters_.lost;
      log_.append (tti_, PacketFateEvent{plan_.source, seq, t.gen_ns, false});
    }
}

void
Simulation::step ()
{
  if (finished_)
    throw std::logic_error ("simulation already finished");
  if (done ())
    throw std::logic_error ("simulation already reached its duration");
  const auto n_nodes = static_cast<int> (nodes_.size ());

  // (a) grant acquisition and traffic generation
  for (int n = 0; n < n_nodes; ++n)
    {
      auto &mac = macs_[static_cast<std::size_t> (n)];
      if (tti_ == acquire_tti_[static_cast<std::size_t> (n)])
        {
          auto d = mac.acquire (tti_);
          log_.append (tti_, GrantEvent{nodes_[static_cast<std::size_t> (n)], d.reason, d.grant.anchor_tti,
                                        d.grant.subchannel, d.grant.reselection_counter});
        }
      if ((tti_ - gen_offset_[static_cast<std::size_t> (n)]) % gen_interval_ == 0)
        generate (n);
    }

  // (b) LiFi deliveries handed off this TTI
  while (!lifi_pending_.empty () && lifi_pending_.begin ()->first <= tti_)
    {
      auto node = lifi_pending_.begin ()->second;
      lifi_pending_.erase (lifi_pending_.begin ());
      auto seq = node.packet.seq;
      arrive (node.to_node, std::move (node.packet), node.arrival_ns);
      release_copy (seq);
    }

  // (c) transmissions and reception resolution
  std::vector<Transmission> txs;
  std::vector<TxOutcome> outcomes;
  std::vector<char> blind (static_cast<std::size_t> (n_nodes), 0);
  for (int n = 0; n < n_nodes; ++n)
    {
      auto &mac = macs_[static_cast<std::size_t> (n)];
      if (!mac.transmits_at (tti_))
        continue;
      blind[static_cast<std::size_t> (n)] = 1;
      auto out = mac.on_transmission (tti_);
      const VehicleId v = nodes_[static_cast<std::size_t> (n)];
      if (out.decision)
        log_.append (tti_, GrantEvent{v, out.decision->reason, out.decision->grant.anchor_tti,
                                      out.decision->grant.subchannel, out.decision->grant.reselection_counter});
      log_.append (tti_, TxEvent{v, out.subchannel, static_cast<int> (out.packets.size ())});
      txs.push_back ({n, out.subchannel});
      outcomes.push_back (std::move (out));
    }

  std::vector<Reception> receptions;
  if (!txs.empty ())
    receptions = resolve_receptions (txs, links_, config_.cv2x, config_.half_duplex);
  for (const auto &r : receptions)
    log_.append (tti_, RxEvent{nodes_[static_cast<std::size_t> (txs[static_cast<std::size_t> (r.tx)].node)],
                               nodes_[static_cast<std::size_t> (r.rx)], r.success, r.cause, r.sinr_db});

  // (d) relaying along the plan
  const TimeNs rx_time = (tti_ + 1) * tti_ns_;
  for (const auto &r : receptions)
    {
      if (!r.success)
        continue;
      const VehicleId from = nodes_[static_cast<std::size_t> (txs[static_cast<std::size_t> (r.tx)].node)];
      const VehicleId to = nodes_[static_cast<std::size_t> (r.rx)];
      const auto *edge = plan_.find_edge (from, to);
      if (!edge || edge->link != LinkType::Cv2x)
        continue;
      for (const auto &p : outcomes[static_cast<std::size_t> (r.tx)].packets)
        if (measured (p))
          arrive (r.rx, p, rx_time);
    }
  for (std::size_t i = 0; i < txs.size (); ++i)
    {
      const VehicleId from = nodes_[static_cast<std::size_t> (txs[i].node)];
      if (!plan_.has_out_link (from, LinkType::Cv2x))
        continue;
      for (const auto &p : outcomes[i].packets)
        if (measured (p))
          release_copy (p.seq);
    }

  // (e) sensing for every vehicle that did not transmit
  std::vector<SensingObservation> obs;
  std::vector<char> decoded (txs.size ());
  for (int n = 0; n < n_nodes; ++n)
    {
      if (blind[static_cast<std::size_t> (n)])
        continue;
      obs.clear ();
      for (const auto &r : receptions)
        if (r.rx == n)
          {
            const auto &tx = txs[static_cast<std::size_t> (r.tx)];
            SensingObservation o;
            o.resource = {tti_, tx.subchannel};
            o.power_dbm = links_.rx_dbm (tx.node, n);
            if (r.success)
              o.announced = outcomes[static_cast<std::size_t> (r.tx)].announcement;
            obs.push_back (o);
          }
      macs_[static_cast<std::size_t> (n)].record_sensing (tti_, obs);
    }

  ++tti_;
}

RunResult
Simulation::finish ()
{
  if (finished_)
    throw std::logic_error ("simulation already finished");
  finished_ = true;
  for (std::size_t seq = 0; seq < tracked_.size (); ++seq)
    {
      const auto &t = tracked_[seq];
      if (t.completed || t.lost)
        continue;
      if (counted (t))
        ++counters_.in_flight;
      log_.append (tti_, PacketFateEvent{plan_.source, static_cast<std::int64_t> (seq), t.gen_ns, true});
    }
  if (end_tti_ > 0)
    log_.append (tti_, EndEvent{counters_.generated, counters_.completed, counters_.lost, counters_.in_flight});

  RunResult result;
  result.summary = summarize (log_, config_);
  result.counters = counters_;
  result.log = std::move (log_);
  return result;
}

RunResult
run (const EngineConfig &config)
{
  Simulation sim (config);
  while (!sim.done ())
    sim.step ();
  return sim.finish ();
}

} // namespace platoonsim
