#include "platoonsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace platoonsim {

ConfigError::ConfigError (std::string key, int line, const std::string &message)
    : std::runtime_error (line > 0 ? fmt::format ("line {}: {}: {}", line, key, message)
                                   : (key.empty () ? message : fmt::format ("{}: {}", key, message))),
      key_ (std::move (key)), line_ (line), message_ (message)
{
}

namespace {

struct KeyDef
{
  std::string_view key;
  void (*set) (EngineConfig &, std::string_view);
  std::string (*get) (const EngineConfig &);
};

[[noreturn]] void
fail (std::string_view key, const std::string &message)
{
  throw ConfigError (std::string (key), 0, message);
}

std::string_view
trim (std::string_view s)
{
  while (!s.empty () && (s.front () == ' ' || s.front () == '\t' || s.front () == '\r'))
    s.remove_prefix (1);
  while (!s.empty () && (s.back () == ' ' || s.back () == '\t' || s.back () == '\r'))
    s.remove_suffix (1);
  return s;
}

double
to_real (std::string_view key, std::string_view v)
{
  double out = 0.0;
  auto r = std::from_chars (v.data (), v.data () + v.size (), out);
  if (r.ec != std::errc{} || r.ptr != v.data () + v.size () || std::isnan (out))
    fail (key, fmt::format ("expected a number, got '{}'", v));
  return out;
}

std::int64_t
to_int (std::string_view key, std::string_view v)
{
  std::int64_t out = 0;
  auto r = std::from_chars (v.data (), v.data () + v.size (), out);
  if (r.ec != std::errc{} || r.ptr != v.data () + v.size ())
    fail (key, fmt::format ("expected an integer, got '{}'", v));
  return out;
}

bool
to_bool (std::string_view key, std::string_view v)
{
  if (v == "true")
    return true;
  if (v == "false")
    return false;
  fail (key, fmt::format ("expected true or false, got '{}'", v));
}

std::string
fmt_real (double v)
{
  return fmt::format ("{}", v);
}

std::string
fmt_bool (bool v)
{
  return v ? "true" : "false";
}

bool positive (double v) { return v > 0.0 && std::isfinite (v); }
bool non_negative (double v) { return v >= 0.0 && std::isfinite (v); }
bool finite (double v) { return std::isfinite (v); }
bool probability (double v) { return v >= 0.0 && v <= 1.0; }
bool fraction (double v) { return v > 0.0 && v <= 1.0; }
bool below_inf (double v) { return v < INFINITY; }

// Each macro expands to one registry row; the accessor expression names the
// field once for both directions.
#define REAL_KEY(NAME, FIELD, CHECK, REQ)                                                                             \
  KeyDef                                                                                                              \
  {                                                                                                                   \
    NAME,                                                                                                             \
        [] (EngineConfig &c, std::string_view v) {                                                                    \
          double x = to_real (NAME, v);                                                                               \
          if (!CHECK (x))                                                                                             \
            fail (NAME, fmt::format ("must be {}, got {}", REQ, v));                                                  \
          c.FIELD = x;                                                                                                \
        },                                                                                                            \
        [] (const EngineConfig &c) { return fmt_real (c.FIELD); }                                                     \
  }

#define INT_KEY(NAME, FIELD, MIN)                                                                                     \
  KeyDef                                                                                                              \
  {                                                                                                                   \
    NAME,                                                                                                             \
        [] (EngineConfig &c, std::string_view v) {                                                                    \
          auto x = to_int (NAME, v);                                                                                  \
          if (x < (MIN) || x > 1'000'000'000)                                                                         \
            fail (NAME, fmt::format ("must be an integer >= {}, got {}", MIN, v));                                    \
          c.FIELD = static_cast<int> (x);                                                                             \
        },                                                                                                            \
        [] (const EngineConfig &c) { return std::to_string (c.FIELD); }                                               \
  }

#define BOOL_KEY(NAME, FIELD)                                                                                         \
  KeyDef                                                                                                              \
  {                                                                                                                   \
    NAME, [] (EngineConfig &c, std::string_view v) { c.FIELD = to_bool (NAME, v); },                                  \
        [] (const EngineConfig &c) { return fmt_bool (c.FIELD); }                                                     \
  }

const std::vector<KeyDef> &
registry ()
{
  static const std::vector<KeyDef> keys = [] {
    std::vector<KeyDef> k{
        REAL_KEY ("sim.duration_s", duration_s, non_negative, "a non-negative number"),
        REAL_KEY ("sim.warmup_s", warmup_s, non_negative, "a non-negative number"),
        KeyDef{"sim.seed",
               [] (EngineConfig &c, std::string_view v) {
                 std::uint64_t s = 0;
                 auto r = std::from_chars (v.data (), v.data () + v.size (), s);
                 if (r.ec != std::errc{} || r.ptr != v.data () + v.size ())
                   fail ("sim.seed", fmt::format ("expected an unsigned integer, got '{}'", v));
                 c.seed = s;
               },
               [] (const EngineConfig &c) { return std::to_string (c.seed); }},
        KeyDef{"sim.architecture",
               [] (EngineConfig &c, std::string_view v) {
                 try
                   {
                     c.architecture = parse_architecture (v);
                   }
                 catch (const std::invalid_argument &e)
                   {
                     fail ("sim.architecture", e.what ());
                   }
               },
               [] (const EngineConfig &c) { return std::string (to_string (c.architecture)); }},

        INT_KEY ("scenario.num_platoons", layout.num_platoons, 1),
        INT_KEY ("scenario.platoon_size", layout.platoon_size, 2),
        INT_KEY ("scenario.target_platoon", layout.target_platoon, 0),
        REAL_KEY ("scenario.vehicle_length_m", layout.vehicle_length_m, positive, "positive"),
        REAL_KEY ("scenario.inter_vehicle_gap_m", layout.inter_vehicle_gap_m, positive, "positive"),
        REAL_KEY ("scenario.lane_offset_m", layout.lane_offset_m, positive, "positive"),
        REAL_KEY ("scenario.longitudinal_stagger_m", layout.longitudinal_stagger_m, finite, "finite"),
        BOOL_KEY ("scenario.interference_platoons", interference_platoons),

        REAL_KEY ("cv2x.carrier_frequency_hz", cv2x.carrier_frequency_hz, positive, "positive"),
        REAL_KEY ("cv2x.tx_power_dbm", cv2x.tx_power_dbm, finite, "finite"),
        REAL_KEY ("cv2x.noise_power_dbm", cv2x.noise_power_dbm, finite, "finite"),
        REAL_KEY ("cv2x.pathloss_intercept_db", cv2x.pathloss_intercept_db, finite, "finite"),
        REAL_KEY ("cv2x.pathloss_slope_db", cv2x.pathloss_slope_db, positive, "positive"),
        KeyDef{"cv2x.distance_unit",
               [] (EngineConfig &c, std::string_view v) {
                 if (v == "m")
                   c.cv2x.distance_unit = DistanceUnit::Meters;
                 else if (v == "km")
                   c.cv2x.distance_unit = DistanceUnit::Kilometers;
                 else
                   fail ("cv2x.distance_unit", fmt::format ("expected m or km, got '{}'", v));
               },
               [] (const EngineConfig &c) {
                 return std::string (c.cv2x.distance_unit == DistanceUnit::Meters ? "m" : "km");
               }},
        REAL_KEY ("cv2x.sinr_threshold_db", cv2x.sinr_threshold_db, below_inf, "below +inf"),
        REAL_KEY ("cv2x.shadowing_sigma_db", cv2x.shadowing_sigma_db, non_negative, "non-negative"),
        BOOL_KEY ("cv2x.half_duplex", half_duplex),
        INT_KEY ("cv2x.num_subchannels", mac.num_subchannels, 1),
        INT_KEY ("cv2x.ttis_per_period", mac.ttis_per_period, 1),
        REAL_KEY ("cv2x.rri_ms", mac.rri_ms, positive, "positive"),

        REAL_KEY ("sps.sensing_window_ms", mac.sensing_window_ms, positive, "positive"),
        REAL_KEY ("sps.selection_window_min_ms", mac.selection_min_ms, positive, "positive"),
        REAL_KEY ("sps.selection_window_max_ms", mac.selection_max_ms, positive, "positive"),
        REAL_KEY ("sps.keep_probability", mac.keep_probability, probability, "within [0, 1]"),
        INT_KEY ("sps.reselection_counter_min", mac.counter_min, 1),
        INT_KEY ("sps.reselection_counter_max", mac.counter_max, 1),
        REAL_KEY ("sps.rsrp_threshold_dbm", mac.rsrp_threshold_dbm, finite, "finite"),
        REAL_KEY ("sps.rsrp_step_db", mac.rsrp_step_db, positive, "positive"),
        REAL_KEY ("sps.min_candidate_fraction", mac.min_candidate_fraction, fraction, "within (0, 1]"),
        BOOL_KEY ("sps.exclude_reserved_ttis", mac.exclude_reserved_ttis),
        BOOL_KEY ("sps.multi_grant", mac.multi_grant),

        INT_KEY ("traffic.packet_size_bytes", traffic.packet_size_bytes, 1),
        INT_KEY ("traffic.packets_per_rri", traffic.packets_per_rri, 1),

        KeyDef{"lifi.wavelength_nm",
               [] (EngineConfig &c, std::string_view v) {
                 double x = to_real ("lifi.wavelength_nm", v);
                 if (!positive (x))
                   fail ("lifi.wavelength_nm", fmt::format ("must be positive, got {}", v));
                 c.lifi.wavelength_m = x * 1e-9;
               },
               [] (const EngineConfig &c) { return fmt_real (std::round (c.lifi.wavelength_m * 1e9 * 1e6) / 1e6); }},
        REAL_KEY ("lifi.optical_power_w", lifi.optical_power_w, positive, "positive"),
        REAL_KEY ("lifi.modulation_bandwidth_hz", lifi.modulation_bandwidth_hz, positive, "positive"),
        REAL_KEY ("lifi.receiver_bandwidth_hz", lifi.receiver_bandwidth_hz, positive, "positive"),
        REAL_KEY ("lifi.detector_area_m2", lifi.detector_area_m2, positive, "positive"),
        REAL_KEY ("lifi.responsivity_a_per_w", lifi.responsivity_a_per_w, positive, "positive"),
        REAL_KEY ("lifi.beam_divergence_deg", lifi.beam_divergence_deg, positive, "positive"),
        REAL_KEY ("lifi.receiver_fov_deg", lifi.receiver_fov_deg, positive, "positive"),
        BOOL_KEY ("lifi.full_angles", lifi.full_angles),
        REAL_KEY ("lifi.noise_current_a", lifi.noise_current_a, positive, "positive"),
        REAL_KEY ("lifi.ambient_light_current_a", lifi.ambient_light_current_a, positive, "positive"),
        REAL_KEY ("lifi.atmospheric_loss_db_per_km", lifi.atmospheric_loss_db_per_km, positive, "positive"),
        REAL_KEY ("lifi.processing_delay_s", lifi.processing_delay_s, non_negative, "non-negative"),
        REAL_KEY ("lifi.alignment_max_db", lifi.alignment_max_db, non_negative, "non-negative"),
        KeyDef{"lifi.alignment_profile",
               [] (EngineConfig &c, std::string_view v) {
                 if (v == "linear")
                   c.lifi.alignment_profile = AlignmentProfile::Linear;
                 else if (v == "quadratic")
                   c.lifi.alignment_profile = AlignmentProfile::Quadratic;
                 else
                   fail ("lifi.alignment_profile", fmt::format ("expected linear or quadratic, got '{}'", v));
               },
               [] (const EngineConfig &c) {
                 return std::string (c.lifi.alignment_profile == AlignmentProfile::Linear ? "linear" : "quadratic");
               }},
        REAL_KEY ("lifi.angular_deviation_deg", lifi_angular_deviation_deg, non_negative, "non-negative"),

        INT_KEY ("plan.second_leader_position", plan.second_leader_position, 2),
        BOOL_KEY ("plan.plf_leader_links", plan.plf_leader_links),
    };
    std::sort (k.begin (), k.end (), [] (const KeyDef &a, const KeyDef &b) { return a.key < b.key; });
    return k;
  }();
  return keys;
}

#undef REAL_KEY
#undef INT_KEY
#undef BOOL_KEY

const KeyDef *
find_key (std::string_view key)
{
  const auto &r = registry ();
  auto it = std::lower_bound (r.begin (), r.end (), key, [] (const KeyDef &d, std::string_view k) { return d.key < k; });
  return it != r.end () && it->key == key ? &*it : nullptr;
}

std::int64_t
whole_ttis (std::string_view key, double ms, double tti_ms)
{
  double n = ms / tti_ms;
  auto r = std::llround (n);
  if (std::abs (n - static_cast<double> (r)) > 1e-9)
    fail (key, fmt::format ("{} ms is not a whole number of {} ms TTIs", ms, tti_ms));
  return r;
}

} // namespace

TimeNs
EngineConfig::tti_ns () const
{
  return static_cast<TimeNs> (std::llround (tti_ms () * 1e6));
}

std::int64_t
EngineConfig::duration_ttis () const
{
  return std::llround (duration_s * 1000.0 / tti_ms ());
}

std::int64_t
EngineConfig::warmup_ttis () const
{
  return std::llround (warmup_s * 1000.0 / tti_ms ());
}

int
EngineConfig::generation_interval_ttis () const
{
  return mac.ttis_per_period / traffic.packets_per_rri;
}

SpsParams
EngineConfig::sps_params () const
{
  const double t = tti_ms ();
  SpsParams p;
  p.num_subchannels = mac.num_subchannels;
  p.period_ttis = mac.multi_grant ? generation_interval_ttis () : mac.ttis_per_period;
  p.sensing_window_ttis = static_cast<int> (std::llround (mac.sensing_window_ms / t));
  p.selection_min_ttis = static_cast<int> (std::llround (mac.selection_min_ms / t));
  p.selection_max_ttis = static_cast<int> (std::llround (mac.selection_max_ms / t));
  p.keep_probability = mac.keep_probability;
  p.counter_min = mac.counter_min;
  p.counter_max = mac.counter_max;
  p.rsrp_threshold_dbm = mac.rsrp_threshold_dbm;
  p.rsrp_step_db = mac.rsrp_step_db;
  p.min_candidate_fraction = mac.min_candidate_fraction;
  p.exclude_reserved_ttis = mac.exclude_reserved_ttis && half_duplex; // nothing to avoid when radios hear while sending
  return p;
}

void
EngineConfig::validate () const
{
  const double t = tti_ms ();
  if (std::abs (t * 1e6 - std::round (t * 1e6)) > 1e-6)
    fail ("cv2x.ttis_per_period", "TTI duration must be a whole number of nanoseconds");
  whole_ttis ("sim.duration_s", duration_s * 1000.0, t);
  whole_ttis ("sim.warmup_s", warmup_s * 1000.0, t);
  if (duration_s > 0.0 && !(warmup_s < duration_s))
    fail ("sim.warmup_s", "warmup must be shorter than the run duration");
  if (mac.ttis_per_period % traffic.packets_per_rri != 0)
    fail ("traffic.packets_per_rri", "must divide cv2x.ttis_per_period");
  auto window = whole_ttis ("sps.sensing_window_ms", mac.sensing_window_ms, t);
  auto sel_min = whole_ttis ("sps.selection_window_min_ms", mac.selection_min_ms, t);
  auto sel_max = whole_ttis ("sps.selection_window_max_ms", mac.selection_max_ms, t);
  if (sel_max < sel_min)
    fail ("sps.selection_window_max_ms", "must not be below sps.selection_window_min_ms");
  if (window < sps_params ().period_ttis)
    fail ("sps.sensing_window_ms", "must span at least one reservation period");
  if (mac.counter_max < mac.counter_min)
    fail ("sps.reselection_counter_max", "must not be below sps.reselection_counter_min");
  if (!(cv2x.tx_power_dbm > cv2x.noise_power_dbm))
    fail ("cv2x.tx_power_dbm", "must exceed cv2x.noise_power_dbm");
  if (layout.target_platoon >= layout.num_platoons)
    fail ("scenario.target_platoon", "must be below scenario.num_platoons");
  if (plan.second_leader_position >= layout.platoon_size)
    fail ("plan.second_leader_position", "must be below scenario.platoon_size");
  if (!(lifi.beam_divergence_deg < lifi.receiver_fov_deg))
    fail ("lifi.beam_divergence_deg", "must be narrower than lifi.receiver_fov_deg");
  if (lifi.fov_half_angle_deg () >= 90.0)
    fail ("lifi.receiver_fov_deg", "half-angle must be below 90 degrees");
  try
    {
      layout.validate ();
      cv2x.validate ();
      lifi.validate ();
      sps_params ().validate ();
    }
  catch (const std::domain_error &e)
    {
      throw ConfigError ("", 0, e.what ());
    }
}

void
set_config_value (EngineConfig &config, std::string_view key, std::string_view value)
{
  const auto *def = find_key (key);
  if (!def)
    fail (key, "unknown configuration key");
  def->set (config, value);
}

EngineConfig
parse_config_text (std::string_view text)
{
  EngineConfig config;
  int lineno = 0;
  while (!text.empty ())
    {
      ++lineno;
      auto nl = text.find ('\n');
      auto line = text.substr (0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr (nl + 1);

      if (auto hash = line.find ('#'); hash != std::string_view::npos)
        line = line.substr (0, hash);
      line = trim (line);
      if (line.empty ())
        continue;
      auto eq = line.find ('=');
      if (eq == std::string_view::npos)
        throw ConfigError ("", lineno, fmt::format ("expected 'key = value', got '{}'", line));
      auto key = trim (line.substr (0, eq));
      auto value = trim (line.substr (eq + 1));
      if (key.empty () || value.empty ())
        throw ConfigError (std::string (key), lineno, "empty key or value");
      try
        {
          set_config_value (config, key, value);
        }
      catch (const ConfigError &e)
        {
          throw ConfigError (e.key (), lineno, e.message ());
        }
    }
  config.validate ();
  return config;
}

EngineConfig
load_config (const std::filesystem::path &path)
{
  std::ifstream in (path, std::ios::binary);
  if (!in)
    throw std::runtime_error ("cannot read config file " + path.string ());
  std::ostringstream ss;
  ss << in.rdbuf ();
  return parse_config_text (ss.str ());
}

std::vector<std::string>
config_keys ()
{
  std::vector<std::string> out;
  for (const auto &d : registry ())
    out.emplace_back (d.key);
  return out;
}

std::vector<std::string>
canonical_config_lines (const EngineConfig &config)
{
  std::vector<std::string> out;
  for (const auto &d : registry ())
    if (d.key != "sim.seed")
      out.push_back (fmt::format ("{} = {}", d.key, d.get (config)));
  return out;
}

std::string
canonical_config_text (const EngineConfig &config)
{
  std::string text;
  for (const auto &line : canonical_config_lines (config))
    {
      text += line;
      text += '\n';
    }
  return text;
}

std::uint64_t
fnv1a64 (std::string_view data)
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data)
    {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  return h;
}

std::uint64_t
config_hash (const EngineConfig &config)
{
  return fnv1a64 (canonical_config_text (config));
}

} // namespace platoonsim
