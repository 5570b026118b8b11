#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "platoonsim/event_log.hpp"

using namespace platoonsim;

namespace {

EventLog
sample_log ()
{
  EventLog log;
  log.architecture = "hybrid";
  log.seed = 7;
  log.config_hash = 0x00ab12cd34ef5678ull;
  log.config_echo = {"sim.duration_s = 60", "sim.warmup_s = 1"};
  log.append (0, GenerationEvent{{1, 1}, 0});
  log.append (0, GrantEvent{{1, 1}, GrantReason::Initial, 13, 2, 9});
  log.append (13, TxEvent{{1, 1}, 2, 2});
  log.append (13, RxEvent{{1, 1}, {1, 2}, true, FailCause::Sinr, 45.125});
  log.append (13, RxEvent{{1, 1}, {0, 3}, false, FailCause::Collision, -1.5});
  log.append (13, RxEvent{{1, 1}, {2, 4}, false, FailCause::HalfDuplex, std::nullopt});
  log.append (13, GrantEvent{{1, 1}, GrantReason::Keep, 113, 2, 11});
  log.append (20, LifiTxEvent{{1, 1}, {1, 6}, 2, 20000000, 20000770});
  log.append (20, RxEvent{{1, 1}, {1, 6}, false, FailCause::Blocked, std::nullopt});
  log.append (90, CompletionEvent{{1, 1}, 0, 0, 91000000, {{{1, 1}, 0}, {{1, 6}, 770}, {{1, 10}, 91000000}}});
  log.append (95, PacketFateEvent{{1, 1}, 3, 30000000, false});
  log.append (100, PacketFateEvent{{1, 1}, 4, 40000000, true});
  log.append (100, EndEvent{5, 1, 1, 1});
  return log;
}

} // namespace

TEST_CASE ("text layout")
{
  auto text = sample_log ().to_text ();
  std::istringstream is (text);
  std::string line;
  std::getline (is, line);
  CHECK (line == "#platoonsim-log v1");
  std::getline (is, line);
  CHECK (line == "# arch=hybrid seed=7 config_hash=00ab12cd34ef5678");
  std::getline (is, line);
  CHECK (line == "# sim.duration_s = 60");
  CHECK (text.find ("\n0 generation 1.1 0\n") != std::string::npos);
  CHECK (text.find ("\n0 grant 1.1 initial 13 2 9\n") != std::string::npos);
  CHECK (text.find ("\n13 tx 1.1 2 2\n") != std::string::npos);
  CHECK (text.find ("\n13 rx-success 1.1 1.2 45.125\n") != std::string::npos);
  CHECK (text.find ("\n13 rx-fail 1.1 0.3 collision -1.500\n") != std::string::npos);
  CHECK (text.find ("\n13 rx-fail 1.1 2.4 half-duplex -\n") != std::string::npos);
  CHECK (text.find ("\n20 lifi-tx 1.1 1.6 2 20000000 20000770\n") != std::string::npos);
  CHECK (text.find ("\n20 rx-fail 1.1 1.6 blocked -\n") != std::string::npos);
  CHECK (text.find ("\n90 e2e-complete 1.1 0 0 91000000 1.1@0;1.6@770;1.10@91000000\n") != std::string::npos);
  CHECK (text.find ("\n95 lost 1.1 3 30000000\n") != std::string::npos);
  CHECK (text.find ("\n100 in-flight 1.1 4 40000000\n") != std::string::npos);
  CHECK (text.ends_with ("\n100 end 5 1 1 1\n"));
}

TEST_CASE ("write and parse round trip")
{
  auto log = sample_log ();
  std::istringstream is (log.to_text ());
  auto back = EventLog::parse (is);
  CHECK (back.architecture == "hybrid");
  CHECK (back.seed == 7);
  CHECK (back.config_hash == log.config_hash);
  CHECK (back.config_echo == log.config_echo);
  CHECK (back.events () == log.events ());
  CHECK (back.to_text () == log.to_text ());
}

TEST_CASE ("log must stay chronological")
{
  EventLog log;
  log.append (5, EndEvent{});
  CHECK_THROWS_AS (log.append (4, EndEvent{}), std::logic_error);
}

TEST_CASE ("schema mismatch names both versions")
{
  std::istringstream is ("#platoonsim-log v2\n");
  try
    {
      EventLog::parse (is);
      FAIL ("expected a schema error");
    }
  catch (const std::runtime_error &e)
    {
      std::string msg = e.what ();
      CHECK (msg.find ("v1") != std::string::npos);
      CHECK (msg.find ("v2") != std::string::npos);
    }
}

TEST_CASE ("malformed lines report their line number")
{
  std::istringstream is ("#platoonsim-log v1\n# arch=plf seed=1 config_hash=0000000000000001\n3 generation 1.1 0\n"
                         "4 teleport 1.1\n");
  try
    {
      EventLog::parse (is);
      FAIL ("expected a parse error");
    }
  catch (const std::runtime_error &e)
    {
      CHECK (std::string (e.what ()).find ("line 4") != std::string::npos);
    }
  std::istringstream bad ("#platoonsim-log v1\n# arch=plf seed=1 config_hash=0\n3 tx 1.1 x 2\n");
  CHECK_THROWS (EventLog::parse (bad));
}

TEST_CASE ("reason and cause names")
{
  CHECK (to_string (GrantReason::Reselect) == "reselect");
  CHECK (to_string (FailCause::Sinr) == "sinr");
  CHECK (format_hex64 (255) == "00000000000000ff");
}
