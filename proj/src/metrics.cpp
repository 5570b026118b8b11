#include "platoonsim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "platoonsim/config.hpp"

namespace platoonsim {

double
e2e_delay_ms (const Packet &packet, VehicleId tail)
{
  if (packet.hop_trace.empty () || packet.hop_trace.back ().vehicle != tail)
    throw std::invalid_argument ("packet has not reached the tail vehicle " + to_string (tail));
  return static_cast<double> (packet.hop_trace.back ().time_ns - packet.gen_time_ns) / 1e6;
}

double
nearest_rank (std::span<const double> sorted, double percentile)
{
  if (sorted.empty ())
    throw std::invalid_argument ("percentile of an empty sample");
  if (!(percentile > 0.0 && percentile <= 100.0))
    throw std::domain_error ("percentile must lie in (0, 100]");
  auto rank = static_cast<std::size_t> (std::ceil (percentile / 100.0 * static_cast<double> (sorted.size ())));
  rank = std::clamp<std::size_t> (rank, 1, sorted.size ());
  return sorted[rank - 1];
}

DelayStats
compute_delay_stats (std::vector<double> delays_ms)
{
  DelayStats s;
  s.samples = static_cast<std::int64_t> (delays_ms.size ());
  if (delays_ms.empty ())
    return s;
  std::sort (delays_ms.begin (), delays_ms.end ());
  // sorted summation keeps the mean independent of the input order
  s.mean_ms = std::accumulate (delays_ms.begin (), delays_ms.end (), 0.0) / static_cast<double> (delays_ms.size ());
  s.p50_ms = nearest_rank (delays_ms, 50);
  s.p95_ms = nearest_rank (delays_ms, 95);
  s.p99_ms = nearest_rank (delays_ms, 99);
  return s;
}

namespace {

template <class... Ts> struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts> overloaded (Ts...) -> overloaded<Ts...>;

} // namespace

MetricsSummary
summarize (const EventLog &log, const EngineConfig &config)
{
  const VehicleId source = config.layout.leader (config.layout.target_platoon);
  const std::int64_t warmup_tti = config.warmup_ttis ();
  const TimeNs warmup_ns = warmup_tti * config.tti_ns ();

  MetricsSummary m;
  m.architecture = std::string (to_string (config.architecture));
  m.seed = config.seed;
  m.config_hash = config_hash (config);

  std::vector<double> delays;
  std::map<std::pair<VehicleId, VehicleId>, std::pair<std::int64_t, TimeNs>> hop_sums;
  std::vector<std::pair<VehicleId, VehicleId>> hop_order;

  for (const auto &e : log.events ())
    std::visit (overloaded{
                    [&] (const GenerationEvent &g) {
                      if (g.source == source && e.tti >= warmup_tti)
                        ++m.generated;
                    },
                    [&] (const CompletionEvent &c) {
                      if (c.source != source || c.gen_ns < warmup_ns)
                        return;
                      ++m.completed;
                      delays.push_back (static_cast<double> (c.arrival_ns - c.gen_ns) / 1e6);
                      for (std::size_t i = 1; i < c.trace.size (); ++i)
                        {
                          auto key = std::make_pair (c.trace[i - 1].vehicle, c.trace[i].vehicle);
                          auto [it, fresh] = hop_sums.try_emplace (key, 0, 0);
                          if (fresh)
                            hop_order.push_back (key);
                          it->second.first += 1;
                          it->second.second += c.trace[i].time_ns - c.trace[i - 1].time_ns;
                        }
                    },
                    [&] (const PacketFateEvent &f) {
                      if (f.source != source || f.gen_ns < warmup_ns)
                        return;
                      ++(f.in_flight ? m.in_flight : m.lost);
                    },
                    [] (const auto &) {},
                },
                e.body);

  m.delay = compute_delay_stats (std::move (delays));
  if (m.completed + m.lost > 0)
    m.pdr = static_cast<double> (m.completed) / static_cast<double> (m.completed + m.lost);

  std::sort (hop_order.begin (), hop_order.end (),
             [] (const auto &a, const auto &b) { return a.first.position < b.first.position ||
                                                        (a.first.position == b.first.position && a.second.position < b.second.position); });
  for (const auto &key : hop_order)
    {
      const auto &[n, total] = hop_sums.at (key);
      m.hops.push_back ({key.first, key.second, static_cast<double> (total) / 1e6 / static_cast<double> (n), n});
    }
  return m;
}

namespace {

std::string
opt3 (const std::optional<double> &v)
{
  return v ? fmt::format ("{:.3f}", *v) : std::string ();
}

std::optional<double>
parse_opt (std::string_view s)
{
  if (s.empty ())
    return std::nullopt;
  double v = 0;
  auto r = std::from_chars (s.data (), s.data () + s.size (), v);
  if (r.ec != std::errc{} || r.ptr != s.data () + s.size ())
    throw std::invalid_argument ("malformed CSV number '" + std::string (s) + "'");
  return v;
}

} // namespace

std::string
format_csv (std::span<const MetricsSummary> summaries)
{
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto &s : summaries)
    out += fmt::format ("{},{},{},{},{},{},{},{},{}\n", s.architecture, s.seed, s.delay.samples, opt3 (s.delay.mean_ms),
                        opt3 (s.delay.p50_ms), opt3 (s.delay.p95_ms), opt3 (s.delay.p99_ms), opt3 (s.pdr),
                        format_hex64 (s.config_hash));
  return out;
}

void
export_csv (std::span<const MetricsSummary> summaries, const std::filesystem::path &path)
{
  if (summaries.empty ())
    throw std::invalid_argument ("nothing to export");
  std::ofstream out (path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error ("cannot write " + path.string ());
  out << format_csv (summaries);
  out.flush ();
  if (!out)
    throw std::runtime_error ("write failed for " + path.string ());
}

std::vector<CsvRow>
parse_csv (std::string_view text)
{
  std::vector<CsvRow> rows;
  bool header = true;
  while (!text.empty ())
    {
      auto nl = text.find ('\n');
      auto line = text.substr (0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr (nl + 1);
      if (header)
        {
          if (line != kCsvHeader)
            throw std::invalid_argument ("unexpected CSV header '" + std::string (line) + "'");
          header = false;
          continue;
        }
      if (line.empty ())
        continue;
      std::vector<std::string_view> f;
      std::size_t start = 0;
      for (;;)
        {
          auto comma = line.find (',', start);
          f.push_back (line.substr (start, comma - start));
          if (comma == std::string_view::npos)
            break;
          start = comma + 1;
        }
      if (f.size () != 9)
        throw std::invalid_argument ("CSV row with " + std::to_string (f.size ()) + " fields");
      CsvRow r;
      r.arch = std::string (f[0]);
      std::from_chars (f[1].data (), f[1].data () + f[1].size (), r.seed);
      std::from_chars (f[2].data (), f[2].data () + f[2].size (), r.samples);
      r.mean_ms = parse_opt (f[3]);
      r.p50_ms = parse_opt (f[4]);
      r.p95_ms = parse_opt (f[5]);
      r.p99_ms = parse_opt (f[6]);
      r.pdr = parse_opt (f[7]);
      std::from_chars (f[8].data (), f[8].data () + f[8].size (), r.config_hash, 16);
      rows.push_back (std::move (r));
    }
  return rows;
}

} // namespace platoonsim
