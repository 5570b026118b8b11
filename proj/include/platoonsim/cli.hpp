#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "platoonsim/config.hpp"
#include "platoonsim/metrics.hpp"

namespace platoonsim {

enum class Command
{
  Run,
  Compare
};

struct SeedRange
{
  std::uint64_t first = 1;
  std::uint64_t last = 1;

  std::uint64_t count () const { return last - first + 1; }
};

struct RunSpec
{
  Command command = Command::Run;
  std::filesystem::path config_path;
  std::optional<Architecture> architecture; // run only; overrides sim.architecture
  std::optional<SeedRange> seeds;           // absent: sim.seed from the config
  std::optional<std::filesystem::path> out_dir;
  bool log_events = false;
  bool verbose = false;
};

// Bad command line. exit_code is 0 for --help, 2 otherwise; text holds the
// message and help to print.
class UsageError : public std::runtime_error
{
public:
  UsageError (int exit_code, std::string text)
      : std::runtime_error (text), exit_code_ (exit_code), text_ (std::move (text))
  {
  }
  int exit_code () const { return exit_code_; }
  const std::string &text () const { return text_; }

private:
  int exit_code_;
  std::string text_;
};

SeedRange parse_seed_range (std::string_view text);
RunSpec parse_args (int argc, const char *const *argv);

struct Job
{
  Architecture architecture;
  std::uint64_t seed;
};

// (arch, seed) pairs of a spec, in CSV order.
std::vector<Job> expand_jobs (const RunSpec &spec, const EngineConfig &base);

// PLATOONSIM_THREADS if set and positive, else the processor count.
unsigned worker_count ();

struct BatchResult
{
  std::vector<MetricsSummary> summaries; // sorted by (arch, seed)
  std::vector<std::pair<Job, std::string>> failures;
};

BatchResult run_batch (const EngineConfig &base, const std::vector<Job> &jobs, unsigned workers,
                       const std::optional<std::filesystem::path> &log_dir);

// Whole command: returns the process exit status.
int cli_main (int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace platoonsim
