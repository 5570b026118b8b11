#include "platoonsim/event_log.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace platoonsim {

std::string_view
to_string (GrantReason r)
{
  switch (r)
    {
    case GrantReason::Initial:
      return "initial";
    case GrantReason::Reselect:
      return "reselect";
    case GrantReason::Keep:
      return "keep";
    }
  return "?";
}

std::string_view
to_string (FailCause c)
{
  switch (c)
    {
    case FailCause::Sinr:
      return "sinr";
    case FailCause::HalfDuplex:
      return "half-duplex";
    case FailCause::Collision:
      return "collision";
    case FailCause::Blocked:
      return "blocked";
    }
  return "?";
}

std::string
format_hex64 (std::uint64_t v)
{
  return fmt::format ("{:016x}", v);
}

void
EventLog::append (std::int64_t tti, EventBody body)
{
  if (!events_.empty () && tti < events_.back ().tti)
    throw std::logic_error ("event log must stay chronologically ordered");
  events_.push_back ({tti, std::move (body)});
}

namespace {

template <class... Ts> struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts> overloaded (Ts...) -> overloaded<Ts...>;

void
format_event (fmt::memory_buffer &buf, const Event &e)
{
  auto out = std::back_inserter (buf);
  fmt::format_to (out, "{} ", e.tti);
  std::visit (
      overloaded{
          [&] (const GenerationEvent &g) { fmt::format_to (out, "generation {} {}", to_string (g.source), g.seq); },
          [&] (const GrantEvent &g) {
            fmt::format_to (out, "grant {} {} {} {} {}", to_string (g.vehicle), to_string (g.reason), g.tx_tti,
                            g.subchannel, g.counter);
          },
          [&] (const TxEvent &t) {
            fmt::format_to (out, "tx {} {} {}", to_string (t.vehicle), t.subchannel, t.packets);
          },
          [&] (const RxEvent &r) {
            if (r.success)
              fmt::format_to (out, "rx-success {} {} {:.3f}", to_string (r.tx), to_string (r.rx), r.sinr_db.value_or (0.0));
            else if (r.sinr_db)
              fmt::format_to (out, "rx-fail {} {} {} {:.3f}", to_string (r.tx), to_string (r.rx), to_string (r.cause),
                              *r.sinr_db);
            else
              fmt::format_to (out, "rx-fail {} {} {} -", to_string (r.tx), to_string (r.rx), to_string (r.cause));
          },
          [&] (const LifiTxEvent &l) {
            fmt::format_to (out, "lifi-tx {} {} {} {} {}", to_string (l.from), to_string (l.to), l.seq, l.send_ns,
                            l.arrival_ns);
          },
          [&] (const CompletionEvent &c) {
            fmt::format_to (out, "e2e-complete {} {} {} {} ", to_string (c.source), c.seq, c.gen_ns, c.arrival_ns);
            for (std::size_t i = 0; i < c.trace.size (); ++i)
              fmt::format_to (out, "{}{}@{}", i ? ";" : "", to_string (c.trace[i].vehicle), c.trace[i].time_ns);
          },
          [&] (const PacketFateEvent &f) {
            fmt::format_to (out, "{} {} {} {}", f.in_flight ? "in-flight" : "lost", to_string (f.source), f.seq,
                            f.gen_ns);
          },
          [&] (const EndEvent &x) {
            fmt::format_to (out, "end {} {} {} {}", x.generated, x.completed, x.lost, x.in_flight);
          },
      },
      e.body);
  buf.push_back ('\n');
}

std::vector<std::string_view>
split_ws (std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size ())
    {
      while (i < line.size () && line[i] == ' ')
        ++i;
      auto j = line.find (' ', i);
      if (j == std::string_view::npos)
        j = line.size ();
      if (j > i)
        out.push_back (line.substr (i, j - i));
      i = j;
    }
  return out;
}

template <class T>
T
parse_num (std::string_view s)
{
  T v{};
  auto r = std::from_chars (s.data (), s.data () + s.size (), v);
  if (r.ec != std::errc{} || r.ptr != s.data () + s.size ())
    throw std::invalid_argument ("malformed number '" + std::string (s) + "'");
  return v;
}

GrantReason
parse_reason (std::string_view s)
{
  if (s == "initial")
    return GrantReason::Initial;
  if (s == "reselect")
    return GrantReason::Reselect;
  if (s == "keep")
    return GrantReason::Keep;
  throw std::invalid_argument ("unknown grant reason '" + std::string (s) + "'");
}

FailCause
parse_cause (std::string_view s)
{
  for (auto c : {FailCause::Sinr, FailCause::HalfDuplex, FailCause::Collision, FailCause::Blocked})
    if (to_string (c) == s)
      return c;
  throw std::invalid_argument ("unknown failure cause '" + std::string (s) + "'");
}

EventBody
parse_body (const std::vector<std::string_view> &f)
{
  auto need = [&] (std::size_t n) {
    if (f.size () != n)
      throw std::invalid_argument ("wrong field count for '" + std::string (f[1]) + "'");
  };
  auto kind = f[1];
  if (kind == "generation")
    {
      need (4);
      return GenerationEvent{parse_vehicle_id (f[2]), parse_num<std::int64_t> (f[3])};
    }
  if (kind == "grant")
    {
      need (7);
      return GrantEvent{parse_vehicle_id (f[2]), parse_reason (f[3]), parse_num<std::int64_t> (f[4]),
                        parse_num<int> (f[5]), parse_num<int> (f[6])};
    }
  if (kind == "tx")
    {
      need (5);
      return TxEvent{parse_vehicle_id (f[2]), parse_num<int> (f[3]), parse_num<int> (f[4])};
    }
  if (kind == "rx-success")
    {
      need (5);
      return RxEvent{parse_vehicle_id (f[2]), parse_vehicle_id (f[3]), true, FailCause::Sinr,
                     parse_num<double> (f[4])};
    }
  if (kind == "rx-fail")
    {
      need (6);
      std::optional<double> sinr;
      if (f[5] != "-")
        sinr = parse_num<double> (f[5]);
      return RxEvent{parse_vehicle_id (f[2]), parse_vehicle_id (f[3]), false, parse_cause (f[4]), sinr};
    }
  if (kind == "lifi-tx")
    {
      need (7);
      return LifiTxEvent{parse_vehicle_id (f[2]), parse_vehicle_id (f[3]), parse_num<std::int64_t> (f[4]),
                         parse_num<TimeNs> (f[5]), parse_num<TimeNs> (f[6])};
    }
  if (kind == "e2e-complete")
    {
      need (7);
      CompletionEvent c{parse_vehicle_id (f[2]), parse_num<std::int64_t> (f[3]), parse_num<TimeNs> (f[4]),
                        parse_num<TimeNs> (f[5]), {}};
      std::string_view trace = f[6];
      while (!trace.empty ())
        {
          auto semi = trace.find (';');
          auto item = trace.substr (0, semi);
          auto at = item.find ('@');
          if (at == std::string_view::npos)
            throw std::invalid_argument ("malformed hop '" + std::string (item) + "'");
          c.trace.push_back ({parse_vehicle_id (item.substr (0, at)), parse_num<TimeNs> (item.substr (at + 1))});
          trace = semi == std::string_view::npos ? std::string_view{} : trace.substr (semi + 1);
        }
      return c;
    }
  if (kind == "lost" || kind == "in-flight")
    {
      need (5);
      return PacketFateEvent{parse_vehicle_id (f[2]), parse_num<std::int64_t> (f[3]), parse_num<TimeNs> (f[4]),
                             kind == "in-flight"};
    }
  if (kind == "end")
    {
      need (6);
      return EndEvent{parse_num<std::int64_t> (f[2]), parse_num<std::int64_t> (f[3]), parse_num<std::int64_t> (f[4]),
                      parse_num<std::int64_t> (f[5])};
    }
  throw std::invalid_argument ("unknown event kind '" + std::string (kind) + "'");
}

} // namespace

void
EventLog::write (std::ostream &os) const
{
  fmt::memory_buffer buf;
  fmt::format_to (std::back_inserter (buf), "{}\n# arch={} seed={} config_hash={}\n", kLogSchemaHeader, architecture,
                  seed, format_hex64 (config_hash));
  for (const auto &line : config_echo)
    fmt::format_to (std::back_inserter (buf), "# {}\n", line);
  for (const auto &e : events_)
    {
      format_event (buf, e);
      if (buf.size () > (1u << 20))
        {
          os.write (buf.data (), static_cast<std::streamsize> (buf.size ()));
          buf.clear ();
        }
    }
  os.write (buf.data (), static_cast<std::streamsize> (buf.size ()));
}

std::string
EventLog::to_text () const
{
  std::ostringstream os;
  write (os);
  return os.str ();
}

EventLog
EventLog::parse (std::istream &is)
{
  std::string line;
  if (!std::getline (is, line) || line != kLogSchemaHeader)
    throw std::runtime_error ("event log schema mismatch: expected '" + std::string (kLogSchemaHeader) + "', found '" +
                              line + "'");
  EventLog log;
  bool meta_seen = false;
  std::size_t lineno = 1;
  while (std::getline (is, line))
    {
      ++lineno;
      if (line.empty ())
        continue;
      try
        {
          if (line[0] == '#')
            {
              std::string_view body = std::string_view (line).substr (line.size () > 1 && line[1] == ' ' ? 2 : 1);
              if (!meta_seen)
                {
                  meta_seen = true;
                  for (auto tok : split_ws (body))
                    {
                      auto eq = tok.find ('=');
                      if (eq == std::string_view::npos)
                        continue;
                      auto k = tok.substr (0, eq), v = tok.substr (eq + 1);
                      if (k == "arch")
                        log.architecture = std::string (v);
                      else if (k == "seed")
                        log.seed = parse_num<std::uint64_t> (v);
                      else if (k == "config_hash")
                        {
                          std::uint64_t h = 0;
                          auto r = std::from_chars (v.data (), v.data () + v.size (), h, 16);
                          if (r.ec != std::errc{})
                            throw std::invalid_argument ("malformed config hash");
                          log.config_hash = h;
                        }
                    }
                }
              else
                log.config_echo.emplace_back (body);
              continue;
            }
          auto f = split_ws (line);
          if (f.size () < 2)
            throw std::invalid_argument ("truncated event");
          log.append (parse_num<std::int64_t> (f[0]), parse_body (f));
        }
      catch (const std::exception &ex)
        {
          throw std::runtime_error ("event log line " + std::to_string (lineno) + ": " + ex.what ());
        }
    }
  return log;
}

} // namespace platoonsim
