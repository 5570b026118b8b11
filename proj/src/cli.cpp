#include "platoonsim/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "platoonsim/sim_engine.hpp"

namespace platoonsim {

namespace {

std::uint64_t
parse_u64 (std::string_view s, std::string_view what)
{
  std::uint64_t v = 0;
  auto r = std::from_chars (s.data (), s.data () + s.size (), v);
  if (s.empty () || r.ec != std::errc{} || r.ptr != s.data () + s.size ())
    throw std::invalid_argument (fmt::format ("{} '{}' is not a non-negative integer", what, s));
  return v;
}

} // namespace

SeedRange
parse_seed_range (std::string_view text)
{
  auto dots = text.find ("..");
  if (dots == std::string_view::npos)
    throw std::invalid_argument (fmt::format ("seed range '{}' must look like A..B", text));
  SeedRange r{parse_u64 (text.substr (0, dots), "seed"), parse_u64 (text.substr (dots + 2), "seed")};
  if (r.last < r.first)
    throw std::invalid_argument (fmt::format ("seed range '{}' is empty", text));
  return r;
}

RunSpec
parse_args (int argc, const char *const *argv)
{
  CLI::App app{"Platoon first-to-last vehicle latency simulator", "platoonsim"};
  app.require_subcommand (1, 1);

  RunSpec spec;
  std::string config, arch, seeds, out;
  std::uint64_t seed = 0;

  auto *run = app.add_subcommand ("run", "Run one architecture for a seed or a seed range");
  run->add_option ("--config", config, "Configuration file")->required ();
  run->add_option ("--arch", arch, "Architecture override")->check (CLI::IsMember ({"plf", "bdl", "hybrid"}));
  auto *seed_opt = run->add_option ("--seed", seed, "Single seed");
  auto *seeds_opt = run->add_option ("--seeds", seeds, "Seed range A..B");
  seed_opt->excludes (seeds_opt);
  run->add_option ("--out", out, "Output directory");
  run->add_flag ("--log-events", spec.log_events, "Write events_<arch>_<seed>.log files");
  run->add_flag ("-v,--verbose", spec.verbose, "Report each finished run");

  auto *cmp = app.add_subcommand ("compare", "Run every architecture for each seed in a range");
  cmp->add_option ("--config", config, "Configuration file")->required ();
  cmp->add_option ("--seeds", seeds, "Seed range A..B")->required ();
  cmp->add_option ("--out", out, "Output directory")->required ();
  cmp->add_flag ("--log-events", spec.log_events, "Write events_<arch>_<seed>.log files");
  cmp->add_flag ("-v,--verbose", spec.verbose, "Report each finished run");

  try
    {
      app.parse (argc, argv);
      spec.command = cmp->parsed () ? Command::Compare : Command::Run;
      spec.config_path = config;
      if (!arch.empty ())
        spec.architecture = parse_architecture (arch);
      if (!seeds.empty ())
        spec.seeds = parse_seed_range (seeds);
      else if (seed_opt->count () > 0)
        spec.seeds = SeedRange{seed, seed};
      if (!out.empty ())
        spec.out_dir = out;
    }
  catch (const CLI::CallForHelp &)
    {
      auto *sub = app.get_subcommands ().empty () ? &app : app.get_subcommands ().front ();
      throw UsageError (0, sub->help ());
    }
  catch (const CLI::ParseError &e)
    {
      throw UsageError (2, fmt::format ("error: {}\n\n{}", e.what (), app.help ()));
    }
  catch (const std::invalid_argument &e)
    {
      throw UsageError (2, fmt::format ("error: {}\n\n{}", e.what (), app.help ()));
    }
  return spec;
}

std::vector<Job>
expand_jobs (const RunSpec &spec, const EngineConfig &base)
{
  const SeedRange seeds = spec.seeds.value_or (SeedRange{base.seed, base.seed});
  std::vector<Architecture> archs;
  if (spec.command == Command::Compare)
    archs = {Architecture::Plf, Architecture::Bdl, Architecture::Hybrid};
  else
    archs = {spec.architecture.value_or (base.architecture)};

  std::vector<Job> jobs;
  for (auto a : archs)
    for (std::uint64_t s = seeds.first;; ++s)
      {
        jobs.push_back ({a, s});
        if (s == seeds.last)
          break;
      }
  std::sort (jobs.begin (), jobs.end (), [] (const Job &x, const Job &y) {
    auto ax = to_string (x.architecture), ay = to_string (y.architecture);
    return ax != ay ? ax < ay : x.seed < y.seed;
  });
  return jobs;
}

unsigned
worker_count ()
{
  if (const char *env = std::getenv ("PLATOONSIM_THREADS"))
    {
      unsigned v = 0;
      auto r = std::from_chars (env, env + std::char_traits<char>::length (env), v);
      if (r.ec == std::errc{} && *r.ptr == '\0' && v > 0)
        return v;
    }
  return std::max (1u, std::thread::hardware_concurrency ());
}

BatchResult
run_batch (const EngineConfig &base, const std::vector<Job> &jobs, unsigned workers,
           const std::optional<std::filesystem::path> &log_dir)
{
  std::vector<std::optional<MetricsSummary>> slots (jobs.size ());
  std::vector<std::string> errors (jobs.size ());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add (1)) < jobs.size ();)
      try
        {
          EngineConfig c = base;
          c.architecture = jobs[i].architecture;
          c.seed = jobs[i].seed;
          RunResult r = run (c);
          if (log_dir)
            {
              auto path = *log_dir / fmt::format ("events_{}_{}.log", to_string (c.architecture), c.seed);
              std::ofstream os (path, std::ios::binary | std::ios::trunc);
              if (!os)
                throw std::runtime_error ("cannot write " + path.string ());
              r.log.write (os);
              if (!os.flush ())
                throw std::runtime_error ("write failed for " + path.string ());
            }
          slots[i] = std::move (r.summary);
        }
      catch (const std::exception &e)
        {
          errors[i] = e.what ();
        }
  };

  workers = std::clamp<unsigned> (workers, 1, static_cast<unsigned> (std::max<std::size_t> (jobs.size (), 1)));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w)
    pool.emplace_back (worker);
  worker ();
  for (auto &t : pool)
    t.join ();

  BatchResult out;
  for (std::size_t i = 0; i < jobs.size (); ++i)
    if (slots[i])
      out.summaries.push_back (std::move (*slots[i]));
    else
      out.failures.emplace_back (jobs[i], errors[i]);
  std::sort (out.summaries.begin (), out.summaries.end (), [] (const auto &a, const auto &b) {
    return a.architecture != b.architecture ? a.architecture < b.architecture : a.seed < b.seed;
  });
  return out;
}

int
cli_main (int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  RunSpec spec;
  try
    {
      spec = parse_args (argc, argv);
    }
  catch (const UsageError &e)
    {
      (e.exit_code () == 0 ? out : err) << e.text ();
      return e.exit_code ();
    }

  EngineConfig base;
  try
    {
      base = load_config (spec.config_path);
      if (spec.out_dir)
        std::filesystem::create_directories (*spec.out_dir);
    }
  catch (const std::exception &e)
    {
      err << "error: " << e.what () << '\n';
      return 1;
    }

  const auto jobs = expand_jobs (spec, base);
  std::optional<std::filesystem::path> log_dir;
  if (spec.log_events)
    log_dir = spec.out_dir.value_or (std::filesystem::path ("."));
  auto batch = run_batch (base, jobs, worker_count (), log_dir);

  if (spec.verbose)
    for (const auto &s : batch.summaries)
      err << fmt::format ("{} seed {}: {} samples, mean {} ms\n", s.architecture, s.seed, s.delay.samples,
                          s.delay.mean_ms ? fmt::format ("{:.3f}", *s.delay.mean_ms) : "-");

  if (!batch.summaries.empty ())
    try
      {
        if (spec.out_dir)
          export_csv (batch.summaries, *spec.out_dir / "results.csv");
        else
          out << format_csv (batch.summaries);
      }
    catch (const std::exception &e)
      {
        err << "error: " << e.what () << '\n';
        return 1;
      }

  for (const auto &[job, why] : batch.failures)
    err << fmt::format ("failed: arch={} seed={}: {}\n", to_string (job.architecture), job.seed, why);
  return batch.failures.empty () ? 0 : 1;
}

} // namespace platoonsim
