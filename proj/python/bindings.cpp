#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "platoonsim/config.hpp"
#include "platoonsim/sim_engine.hpp"

namespace py = pybind11;
using namespace platoonsim;

namespace {

py::dict
summary_dict (const MetricsSummary &s)
{
  py::dict d;
  d["arch"] = s.architecture;
  d["seed"] = s.seed;
  d["config_hash"] = format_hex64 (s.config_hash);
  d["samples"] = s.delay.samples;
  d["mean_ms"] = s.delay.mean_ms;
  d["p50_ms"] = s.delay.p50_ms;
  d["p95_ms"] = s.delay.p95_ms;
  d["p99_ms"] = s.delay.p99_ms;
  d["pdr"] = s.pdr;
  d["generated"] = s.generated;
  d["completed"] = s.completed;
  d["lost"] = s.lost;
  d["in_flight"] = s.in_flight;
  py::list hops;
  for (const auto &h : s.hops)
    hops.append (py::make_tuple (to_string (h.from), to_string (h.to), h.mean_ms, h.samples));
  d["hops"] = hops;
  return d;
}

} // namespace

PYBIND11_MODULE (_core, m)
{
  m.doc () = "Platoon latency simulator core";

  py::register_exception<ConfigError> (m, "ConfigError", PyExc_ValueError);
  py::register_exception<LinkUnavailable> (m, "LinkUnavailable", PyExc_RuntimeError);

  py::class_<EngineConfig> (m, "EngineConfig")
      .def (py::init<> ())
      .def ("set", [] (EngineConfig &c, const std::string &key, const std::string &value) {
        set_config_value (c, key, value);
      })
      .def ("validate", &EngineConfig::validate)
      .def ("canonical_text", [] (const EngineConfig &c) { return canonical_config_text (c); })
      .def ("hash", [] (const EngineConfig &c) { return format_hex64 (config_hash (c)); })
      .def_readwrite ("duration_s", &EngineConfig::duration_s)
      .def_readwrite ("warmup_s", &EngineConfig::warmup_s)
      .def_readwrite ("seed", &EngineConfig::seed)
      .def_property (
          "architecture", [] (const EngineConfig &c) { return std::string (to_string (c.architecture)); },
          [] (EngineConfig &c, const std::string &a) { c.architecture = parse_architecture (a); });

  m.def ("parse_config_text", &parse_config_text, py::arg ("text"));
  m.def ("load_config", &load_config, py::arg ("path"));
  m.def ("config_keys", &config_keys);

  m.def ("distance_m", [] (const std::string &a, const std::string &b, const EngineConfig &c) {
    return distance (c.layout, parse_vehicle_id (a), parse_vehicle_id (b));
  }, py::arg ("a"), py::arg ("b"), py::arg ("config") = EngineConfig{});

  m.def ("pathloss_db", [] (double d, const EngineConfig &c) { return pathloss_db (c.cv2x, d); },
         py::arg ("distance_m"), py::arg ("config") = EngineConfig{});
  m.def ("sinr_db", [] (double signal, std::vector<double> interferers, double noise) {
    return sinr_db (signal, interferers, noise);
  }, py::arg ("signal_dbm"), py::arg ("interferer_dbm"), py::arg ("noise_dbm") = -114.0);

  m.def ("lifi_total_loss", [] (double d, double deviation, const EngineConfig &c) {
    auto l = total_loss (c.lifi, d, deviation);
    py::dict r;
    r["geometric_db"] = l.geometric_db;
    r["atmospheric_db"] = l.atmospheric_db;
    r["alignment_db"] = l.alignment_db;
    r["total_db"] = l.total_db;
    r["available"] = l.available;
    return r;
  }, py::arg ("distance_m"), py::arg ("deviation_deg") = 0.0, py::arg ("config") = EngineConfig{});
  m.def ("lifi_hop_latency_s", [] (double d, std::int64_t bits, double deviation, const EngineConfig &c) {
    return hop_latency_s (c.lifi, d, bits, deviation);
  }, py::arg ("distance_m"), py::arg ("packet_bits") = 2400, py::arg ("deviation_deg") = 0.0,
     py::arg ("config") = EngineConfig{});

  m.def ("relay_plan", [] (const std::string &arch, const EngineConfig &c) {
    auto plan = build_relay_plan (parse_architecture (arch), c.layout, c.plan);
    py::list edges;
    for (const auto &e : plan.edges)
      edges.append (py::make_tuple (to_string (e.from), to_string (e.to), e.link == LinkType::Lifi ? "lifi" : "cv2x",
                                    e.length_m));
    return edges;
  }, py::arg ("architecture"), py::arg ("config") = EngineConfig{});

  m.def ("run", [] (const EngineConfig &c, bool with_log) {
    RunResult r;
    {
      py::gil_scoped_release release;
      r = run (c);
    }
    py::dict d = summary_dict (r.summary);
    if (with_log)
      d["log"] = r.log.to_text ();
    return d;
  }, py::arg ("config"), py::arg ("with_log") = false);

  m.def ("summarize", [] (const std::string &log_text, const EngineConfig &c) {
    std::istringstream is (log_text);
    return summary_dict (summarize (EventLog::parse (is), c));
  }, py::arg ("log_text"), py::arg ("config"));

  m.attr ("CSV_HEADER") = kCsvHeader;
  m.attr ("LOG_SCHEMA_HEADER") = kLogSchemaHeader;
}
