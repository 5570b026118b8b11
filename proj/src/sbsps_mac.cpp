#include "platoonsim/sbsps_mac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "platoonsim/cv2x_phy.hpp"

namespace platoonsim {

std::uint64_t
stream_seed (std::uint64_t seed, std::uint64_t stream)
{
  // splitmix64 over a combination of both inputs
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + (stream + 1) * 0xD1B54A32D192ED03ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

int
SpsParams::tranche_size () const
{
  auto n = static_cast<int> (std::llround (min_candidate_fraction * candidate_count ()));
  return std::clamp (n, 1, candidate_count ());
}

void
SpsParams::validate () const
{
  if (num_subchannels < 1)
    throw std::domain_error ("need at least one subchannel");
  if (period_ttis < 1)
    throw std::domain_error ("reservation period must be positive");
  if (sensing_window_ttis < period_ttis)
    throw std::domain_error ("sensing window must span at least one reservation period");
  if (selection_min_ttis < 1 || selection_max_ttis < selection_min_ttis)
    throw std::domain_error ("selection window must satisfy 1 <= min <= max");
  if (!(keep_probability >= 0.0 && keep_probability <= 1.0))
    throw std::domain_error ("keep probability must lie in [0, 1]");
  if (counter_min < 1 || counter_max < counter_min)
    throw std::domain_error ("reselection counter range must satisfy 1 <= min <= max");
  if (!std::isfinite (rsrp_threshold_dbm))
    throw std::domain_error ("RSRP threshold must be finite");
  if (!(rsrp_step_db > 0.0))
    throw std::domain_error ("RSRP threshold step must be positive");
  if (!(min_candidate_fraction > 0.0 && min_candidate_fraction <= 1.0))
    throw std::domain_error ("candidate fraction must lie in (0, 1]");
}

// --- SensingRecord ---------------------------------------------------------

SensingRecord::SensingRecord (int window_ttis, int num_subchannels)
    : window_ (window_ttis), num_subchannels_ (num_subchannels),
      ring_ (static_cast<std::size_t> (window_ttis) + 1)
{
  for (auto &s : ring_)
    s.power_mw.assign (static_cast<std::size_t> (num_subchannels), 0.0);
}

SensingRecord::Slot &
SensingRecord::slot_for (std::int64_t tti)
{
  auto &s = ring_[static_cast<std::size_t> (tti % static_cast<std::int64_t> (ring_.size ()))];
  if (s.tti != tti)
    {
      s.tti = tti;
      s.blind = false;
      std::fill (s.power_mw.begin (), s.power_mw.end (), 0.0);
    }
  return s;
}

const SensingRecord::Slot *
SensingRecord::find_slot (std::int64_t tti) const
{
  if (tti < 0 || !in_window (tti))
    return nullptr;
  const auto &s = ring_[static_cast<std::size_t> (tti % static_cast<std::int64_t> (ring_.size ()))];
  return s.tti == tti ? &s : nullptr;
}

void
SensingRecord::advance_clock (std::int64_t tti)
{
  if (tti < clock_)
    throw std::logic_error ("sensing clock cannot move backwards");
  clock_ = tti;
  std::erase_if (latest_, [this] (const auto &kv) { return clock_ - kv.second.heard_tti > window_; });
}

void
SensingRecord::record (std::int64_t tti, std::span<const SensingObservation> observations)
{
  if (is_blind (tti))
    throw std::logic_error ("sensing observations during an own transmission");
  advance_clock (tti);
  auto &s = slot_for (tti);
  for (const auto &o : observations)
    {
      if (o.resource.tti != tti)
        throw std::logic_error ("observation does not belong to the current TTI");
      if (o.resource.subchannel < 0 || o.resource.subchannel >= num_subchannels_)
        throw std::out_of_range ("observation subchannel out of range");
      s.power_mw[static_cast<std::size_t> (o.resource.subchannel)] += dbm_to_mw (o.power_dbm);
      if (o.announced)
        latest_[o.announced->source] = HeardReservation{*o.announced, o.power_dbm, tti};
    }
}

void
SensingRecord::mark_blind (std::int64_t tti)
{
  advance_clock (tti);
  slot_for (tti).blind = true;
}

bool
SensingRecord::is_blind (std::int64_t tti) const
{
  const auto *s = find_slot (tti);
  return s && s->blind;
}

std::optional<double>
SensingRecord::power_dbm (ResourceId resource) const
{
  const auto *s = find_slot (resource.tti);
  if (!s || s->blind || resource.subchannel < 0 || resource.subchannel >= num_subchannels_)
    return std::nullopt;
  double mw = s->power_mw[static_cast<std::size_t> (resource.subchannel)];
  return mw > 0.0 ? mw_to_dbm (mw) : -INFINITY;
}

double
SensingRecord::mean_power_dbm (ResourceId candidate, int period_ttis) const
{
  double sum_mw = 0.0;
  int samples = 0;
  for (std::int64_t t = candidate.tti - period_ttis; t >= 0 && clock_ - t <= window_; t -= period_ttis)
    {
      if (t > clock_)
        continue;
      auto p = power_dbm ({t, candidate.subchannel});
      if (!p)
        continue;
      ++samples;
      if (std::isfinite (*p))
        sum_mw += dbm_to_mw (*p);
    }
  if (samples == 0 || sum_mw <= 0.0)
    return -INFINITY;
  return mw_to_dbm (sum_mw / samples);
}

std::vector<SensingRecord::HeardReservation>
SensingRecord::active_reservations () const
{
  std::vector<HeardReservation> out;
  out.reserve (latest_.size ());
  for (const auto &[source, heard] : latest_)
    out.push_back (heard);
  return out;
}

// --- selection ------------------------------------------------------------

int
draw_reselection_counter (const SpsParams &params, Rng &rng)
{
  return std::uniform_int_distribution<int> (params.counter_min, params.counter_max) (rng);
}

bool
draw_keep (const SpsParams &params, Rng &rng)
{
  return std::bernoulli_distribution (params.keep_probability) (rng);
}

namespace {

bool
projects_onto (const Reservation &r, std::int64_t tti)
{
  return tti >= r.next_tti && (tti - r.next_tti) % r.period_ttis == 0;
}

} // namespace

Grant
select_resource (const SpsParams &params, const SensingRecord &sensing, std::int64_t now, Rng &rng,
                 SelectionTrace *trace)
{
  std::vector<ResourceId> candidates;
  candidates.reserve (static_cast<std::size_t> (params.candidate_count ()));
  for (std::int64_t t = now + params.selection_min_ttis; t <= now + params.selection_max_ttis; ++t)
    for (int sc = 0; sc < params.num_subchannels; ++sc)
      candidates.push_back ({t, sc});

  const auto heard = sensing.active_reservations ();
  const int tranche = params.tranche_size ();

  auto excluded = [&] (const ResourceId &c, double threshold) {
    for (const auto &h : heard)
      {
        if (!(h.rsrp_dbm > threshold))
          continue;
        const auto &r = h.reservation;
        if (r.period_ttis <= 0 || !projects_onto (r, c.tti))
          continue;
        if (r.subchannel == c.subchannel || params.exclude_reserved_ttis)
          return true;
      }
    return false;
  };

  double threshold = params.rsrp_threshold_dbm;
  int escalations = 0;
  std::vector<ResourceId> remaining;
  for (;;)
    {
      remaining.clear ();
      for (const auto &c : candidates)
        if (!excluded (c, threshold))
          remaining.push_back (c);
      if (static_cast<int> (remaining.size ()) >= tranche)
        break;
      threshold += params.rsrp_step_db;
      ++escalations;
    }

  struct Ranked
  {
    ResourceId resource;
    double power_dbm;
  };
  std::vector<Ranked> ranked;
  ranked.reserve (remaining.size ());
  for (const auto &c : remaining)
    ranked.push_back ({c, sensing.mean_power_dbm (c, params.period_ttis)});
  // shuffle first so that equal-energy ties are broken uniformly
  std::shuffle (ranked.begin (), ranked.end (), rng);
  std::stable_sort (ranked.begin (), ranked.end (),
                    [] (const Ranked &a, const Ranked &b) { return a.power_dbm < b.power_dbm; });
  ranked.resize (static_cast<std::size_t> (tranche));

  auto pick = std::uniform_int_distribution<std::size_t> (0, ranked.size () - 1) (rng);
  Grant g;
  g.anchor_tti = ranked[pick].resource.tti;
  g.subchannel = ranked[pick].resource.subchannel;
  g.period_ttis = params.period_ttis;
  g.reselection_counter = draw_reselection_counter (params, rng);

  if (trace)
    {
      trace->candidates = static_cast<int> (candidates.size ());
      trace->after_exclusion = static_cast<int> (remaining.size ());
      trace->escalations = escalations;
      trace->final_threshold_dbm = threshold;
      trace->tranche.clear ();
      trace->tranche_power_dbm.clear ();
      for (const auto &r : ranked)
        {
          trace->tranche.push_back (r.resource);
          trace->tranche_power_dbm.push_back (r.power_dbm);
        }
    }
  return g;
}

// --- SpsMac ----------------------------------------------------------------

SpsMac::SpsMac (SpsParams params, int id, std::uint64_t rng_seed)
    : params_ (params), id_ (id), rng_ (rng_seed),
      sensing_ (params.sensing_window_ttis, params.num_subchannels)
{
  params_.validate ();
}

GrantDecision
SpsMac::acquire (std::int64_t now)
{
  grant_ = select_resource (params_, sensing_, now, rng_);
  return {GrantReason::Initial, now, *grant_};
}

void
SpsMac::record_sensing (std::int64_t tti, std::span<const SensingObservation> observations)
{
  sensing_.record (tti, observations);
}

TxOutcome
SpsMac::on_transmission (std::int64_t now)
{
  if (!transmits_at (now))
    throw std::logic_error ("on_transmission called outside a grant instance");
  sensing_.mark_blind (now);

  TxOutcome out;
  out.subchannel = grant_->subchannel;
  out.packets.assign (std::make_move_iterator (queue_.begin ()), std::make_move_iterator (queue_.end ()));
  queue_.clear ();

  if (--grant_->reselection_counter > 0)
    grant_->anchor_tti = now + grant_->period_ttis;
  else if (draw_keep (params_, rng_))
    {
      grant_->anchor_tti = now + grant_->period_ttis;
      grant_->reselection_counter = draw_reselection_counter (params_, rng_);
      out.decision = GrantDecision{GrantReason::Keep, now, *grant_};
    }
  else
    {
      grant_ = select_resource (params_, sensing_, now, rng_);
      out.decision = GrantDecision{GrantReason::Reselect, now, *grant_};
    }

  out.announcement = {id_, grant_->anchor_tti, grant_->subchannel, grant_->period_ttis,
                      grant_->reselection_counter};
  return out;
}

std::int64_t
SpsMac::next_tx_tti (std::int64_t now) const
{
  if (!grant_)
    throw std::logic_error ("no active grant");
  const auto &g = *grant_;
  if (now < g.anchor_tti)
    return g.anchor_tti;
  return g.anchor_tti + ((now - g.anchor_tti) / g.period_ttis + 1) * g.period_ttis;
}

void
SpsMac::enqueue (Packet packet)
{
  auto pos = std::upper_bound (queue_.begin (), queue_.end (), packet.gen_time_ns,
                               [] (TimeNs t, const Packet &p) { return t < p.gen_time_ns; });
  queue_.insert (pos, std::move (packet));
}

} // namespace platoonsim
