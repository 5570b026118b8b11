#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "platoonsim/cv2x_phy.hpp"
#include "platoonsim/lifi_phy.hpp"
#include "platoonsim/relay_plan.hpp"
#include "platoonsim/sbsps_mac.hpp"
#include "platoonsim/scenario.hpp"

namespace platoonsim {

// Scheduler settings as configured (milliseconds); converted to TTIs by
// EngineConfig::sps_params().
struct MacConfig
{
  double rri_ms = 100.0;
  int ttis_per_period = 100;
  int num_subchannels = 4;
  double sensing_window_ms = 1000.0;
  double selection_min_ms = 1.0;
  double selection_max_ms = 20.0;
  double keep_probability = 0.4;
  int counter_min = 5;
  int counter_max = 15;
  double rsrp_threshold_dbm = -110.0;
  double rsrp_step_db = 3.0;
  double min_candidate_fraction = 0.2;
  bool exclude_reserved_ttis = true; // only in effect with cv2x.half_duplex
  // One grant per generated packet (period RRI / packets_per_rri) instead of
  // one aggregating grant per RRI.
  bool multi_grant = false;
};

struct TrafficConfig
{
  int packet_size_bytes = 300;
  int packets_per_rri = 10;
};

struct EngineConfig
{
  double duration_s = 60.0;
  double warmup_s = 1.0;
  std::uint64_t seed = 1;
  Architecture architecture = Architecture::Hybrid;

  ScenarioLayout layout;
  bool interference_platoons = true;

  Cv2xParams cv2x;
  bool half_duplex = true;
  MacConfig mac;
  TrafficConfig traffic;

  LifiParams lifi;
  double lifi_angular_deviation_deg = 0.0;

  PlanOptions plan;

  double tti_ms () const { return mac.rri_ms / mac.ttis_per_period; }
  TimeNs tti_ns () const;
  std::int64_t duration_ttis () const;
  std::int64_t warmup_ttis () const;
  int generation_interval_ttis () const;
  SpsParams sps_params () const;

  // Throws ConfigError naming the offending key.
  void validate () const;
};

class ConfigError : public std::runtime_error
{
public:
  ConfigError (std::string key, int line, const std::string &message);
  const std::string &key () const { return key_; }
  int line () const { return line_; }
  const std::string &message () const { return message_; }

private:
  std::string key_;
  int line_;
  std::string message_;
};

// Flat "key = value" text, '#' starts a comment. Unknown keys and malformed
// lines are errors; absent keys keep their defaults.
EngineConfig parse_config_text (std::string_view text);
EngineConfig load_config (const std::filesystem::path &path);

// Sets one key from its textual value (same rules as the file format).
void set_config_value (EngineConfig &config, std::string_view key, std::string_view value);

std::vector<std::string> config_keys ();

// "key = value" for every key except sim.seed, sorted by key.
std::vector<std::string> canonical_config_lines (const EngineConfig &config);
std::string canonical_config_text (const EngineConfig &config);

std::uint64_t fnv1a64 (std::string_view data);
std::uint64_t config_hash (const EngineConfig &config);

} // namespace platoonsim
