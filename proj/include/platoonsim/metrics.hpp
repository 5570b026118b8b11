#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "platoonsim/event_log.hpp"
#include "platoonsim/packet.hpp"

namespace platoonsim {

struct EngineConfig;

struct HopDelay
{
  VehicleId from;
  VehicleId to;
  double mean_ms = 0.0;
  std::int64_t samples = 0;
};

struct DelayStats
{
  std::int64_t samples = 0;
  std::optional<double> mean_ms;
  std::optional<double> p50_ms;
  std::optional<double> p95_ms;
  std::optional<double> p99_ms;
};

struct MetricsSummary
{
  std::string architecture;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;

  DelayStats delay;
  // completed / (completed + lost): packets still travelling when the run
  // stops are neither delivered nor lost.
  std::optional<double> pdr;

  std::int64_t generated = 0;
  std::int64_t completed = 0;
  std::int64_t lost = 0;
  std::int64_t in_flight = 0;

  std::vector<HopDelay> hops; // ordered by (from, to) position
};

// Arrival at the tail minus generation time. Throws std::invalid_argument
// unless the trace ends at tail.
double e2e_delay_ms (const Packet &packet, VehicleId tail);

// Nearest-rank percentile (rank = ceil(p/100 * n)) of an ascending sample.
double nearest_rank (std::span<const double> sorted, double percentile);

DelayStats compute_delay_stats (std::vector<double> delays_ms);

// Statistics over measured-stream packets generated at or after warmup.
MetricsSummary summarize (const EventLog &log, const EngineConfig &config);

// arch,seed,samples,mean_ms,p50_ms,p95_ms,p99_ms,pdr,config_hash
inline constexpr const char *kCsvHeader = "arch,seed,samples,mean_ms,p50_ms,p95_ms,p99_ms,pdr,config_hash";

std::string format_csv (std::span<const MetricsSummary> summaries);
void export_csv (std::span<const MetricsSummary> summaries, const std::filesystem::path &path);

struct CsvRow
{
  std::string arch;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  std::optional<double> mean_ms, p50_ms, p95_ms, p99_ms, pdr;
  std::uint64_t config_hash = 0;
};

std::vector<CsvRow> parse_csv (std::string_view text);

} // namespace platoonsim
