#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "platoonsim/config.hpp"

using namespace platoonsim;

namespace {

std::string
error_key (std::string_view text)
{
  try
    {
      parse_config_text (text);
    }
  catch (const ConfigError &e)
    {
      return e.key ();
    }
  return "<none>";
}

int
error_line (std::string_view text)
{
  try
    {
      parse_config_text (text);
    }
  catch (const ConfigError &e)
    {
      return e.line ();
    }
  return -1;
}

} // namespace

TEST_CASE ("empty text yields the default configuration")
{
  auto c = parse_config_text ("");
  CHECK (c.mac.rri_ms == 100.0);
  CHECK (c.mac.ttis_per_period == 100);
  CHECK (c.mac.num_subchannels == 4);
  CHECK (c.mac.sensing_window_ms == 1000.0);
  CHECK (c.mac.selection_min_ms == 1.0);
  CHECK (c.mac.selection_max_ms == 20.0);
  CHECK (c.mac.keep_probability == 0.4);
  CHECK (c.mac.counter_min == 5);
  CHECK (c.mac.counter_max == 15);
  CHECK (c.cv2x.tx_power_dbm == 23.0);
  CHECK (c.cv2x.noise_power_dbm == -114.0);
  CHECK (c.cv2x.carrier_frequency_hz == 5.9e9);
  CHECK (c.traffic.packet_size_bytes == 300);
  CHECK (c.traffic.packets_per_rri == 10);
  CHECK (c.layout.platoon_size == 10);
  CHECK (c.layout.num_platoons == 3);
  CHECK (c.layout.vehicle_length_m == 10.0);
  CHECK (c.layout.inter_vehicle_gap_m == 10.0);
  CHECK (c.lifi.optical_power_w == 0.45);
  CHECK (c.lifi.wavelength_m == doctest::Approx (905e-9));
  CHECK (c.lifi.receiver_fov_deg == 30.0);
  CHECK (c.lifi.beam_divergence_deg == 5.0);
  CHECK (c.tti_ms () == 1.0);
  CHECK (c.tti_ns () == 1'000'000);
  CHECK (c.duration_ttis () == 60'000);
  CHECK (c.warmup_ttis () == 1'000);
  CHECK (c.generation_interval_ttis () == 10);
  auto sps = c.sps_params ();
  CHECK (sps.period_ttis == 100);
  CHECK (sps.sensing_window_ttis == 1000);
  CHECK (sps.selection_min_ttis == 1);
  CHECK (sps.selection_max_ttis == 20);
}

TEST_CASE ("values, comments and whitespace")
{
  auto c = parse_config_text ("# header\n  lifi.optical_power_w = 0.45   # watts\n\n"
                              "sim.architecture=plf\r\ncv2x.sinr_threshold_db = -inf\nsim.seed = 42\n");
  CHECK (c.lifi.optical_power_w == 0.45);
  CHECK (c.architecture == Architecture::Plf);
  CHECK (std::isinf (c.cv2x.sinr_threshold_db));
  CHECK (c.seed == 42);
  c = parse_config_text ("cv2x.half_duplex = false\ncv2x.distance_unit = km\nlifi.alignment_profile = quadratic\n");
  CHECK_FALSE (c.half_duplex);
  CHECK (c.cv2x.distance_unit == DistanceUnit::Kilometers);
  CHECK (c.lifi.alignment_profile == AlignmentProfile::Quadratic);
}

TEST_CASE ("invalid values name the key")
{
  CHECK (error_key ("cv2x.rri_ms = -1\n") == "cv2x.rri_ms");
  CHECK (error_key ("lifi.optical_power_w = -0.1\n") == "lifi.optical_power_w");
  CHECK (error_key ("sps.keep_probability = 1.2\n") == "sps.keep_probability");
  CHECK (error_key ("cv2x.half_duplex = maybe\n") == "cv2x.half_duplex");
  CHECK (error_key ("scenario.platoon_size = ten\n") == "scenario.platoon_size");
  CHECK (error_key ("sim.architecture = mesh\n") == "sim.architecture");
  CHECK (error_key ("cv2x.tx_power_dbm = -120\n") == "cv2x.tx_power_dbm");
  CHECK (error_key ("sim.duration_s = 5\nsim.warmup_s = 5\n") == "sim.warmup_s");
  CHECK (error_key ("traffic.packets_per_rri = 7\n") == "traffic.packets_per_rri");
  CHECK (error_key ("sps.selection_window_max_ms = 0.5\n") == "sps.selection_window_max_ms");
  CHECK (error_key ("scenario.target_platoon = 3\n") == "scenario.target_platoon");
  CHECK (error_key ("lifi.beam_divergence_deg = 31\n") == "lifi.beam_divergence_deg");
}

TEST_CASE ("unknown keys and malformed lines are errors with line numbers")
{
  CHECK (error_key ("sim.seed = 1\nsim.colour = red\n") == "sim.colour");
  CHECK (error_line ("sim.seed = 1\nsim.colour = red\n") == 2);
  CHECK (error_line ("\n\njust words\n") == 3);
  CHECK (error_line ("sim.seed =\n") == 1);
  try
    {
      parse_config_text ("sim.seed = 1\ncv2x.rri_ms = -1\n");
      FAIL ("expected an error");
    }
  catch (const ConfigError &e)
    {
      std::string what = e.what ();
      CHECK (what.find ("line 2") != std::string::npos);
      CHECK (what.find ("cv2x.rri_ms") != std::string::npos);
    }
}

TEST_CASE ("zero-length runs are allowed")
{
  auto c = parse_config_text ("sim.duration_s = 0\nsim.warmup_s = 0\n");
  CHECK (c.duration_ttis () == 0);
}

TEST_CASE ("load_config reads files and reports missing ones")
{
  auto path = std::filesystem::temp_directory_path () / "platoonsim_test_config.cfg";
  {
    std::ofstream out (path);
    out << "lifi.optical_power_w = 0.9\n";
  }
  CHECK (load_config (path).lifi.optical_power_w == 0.9);
  std::filesystem::remove (path);
  CHECK_THROWS (load_config (path));
}

TEST_CASE ("every key round-trips through its canonical text")
{
  EngineConfig c;
  auto lines = canonical_config_lines (c);
  auto keys = config_keys ();
  CHECK (std::is_sorted (keys.begin (), keys.end ()));
  CHECK (lines.size () + 1 == keys.size ());
  std::string text;
  for (const auto &l : lines)
    text += l + "\n";
  auto back = parse_config_text (text);
  CHECK (canonical_config_text (back) == canonical_config_text (c));
  CHECK (std::none_of (lines.begin (), lines.end (), [] (const auto &l) { return l.rfind ("sim.seed", 0) == 0; }));
}

TEST_CASE ("FNV-1a reference vectors")
{
  CHECK (fnv1a64 ("") == 0xcbf29ce484222325ull);
  CHECK (fnv1a64 ("a") == 0xaf63dc4c8601ec8cull);
  CHECK (fnv1a64 ("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE ("config hash tracks every key except the seed")
{
  EngineConfig a, b;
  b.seed = 99;
  CHECK (config_hash (a) == config_hash (b));
  b.architecture = Architecture::Plf;
  CHECK (config_hash (a) != config_hash (b));
  for (const auto &key : config_keys ())
    {
      if (key == "sim.seed")
        continue;
      EngineConfig c;
      auto before = canonical_config_text (c);
      // flip each key to some other valid value
      std::string value;
      for (const auto &l : canonical_config_lines (c))
        if (l.rfind (key + " = ", 0) == 0)
          value = l.substr (key.size () + 3);
      std::string other = value == "true" ? "false" : value == "false" ? "true" : value;
      if (other == value)
        {
          if (key == "sim.architecture")
            other = "plf";
          else if (key == "cv2x.distance_unit")
            other = "km";
          else if (key == "lifi.alignment_profile")
            other = "quadratic";
          else
            continue;
        }
      set_config_value (c, key, other);
      CHECK_MESSAGE (config_hash (c) != config_hash (EngineConfig{}), key);
    }
}
