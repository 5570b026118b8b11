#pragma once

// Reference models that share no code with the simulator.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace oracle {

// Each relay hop waits on average half a reservation period for the
// forwarder's grant, then one TTI on air.
inline double
hop_delay_ms (int hops, double rri_ms, double tti_ms)
{
  return hops * (rri_ms / 2 + tti_ms);
}

// Discrete grant-phase model: every forwarder owns an independent uniform
// phase on the period grid. A packet ready at TTI r leaves at the first
// phase-aligned TTI s >= r and is heard at s + 1, where the next forwarder
// may use it from then on. A light first hop delivers within the TTI and
// is handed over at the next boundary.
inline double
monte_carlo_delay_ms (int cv2x_hops, bool light_first_hop, int period_ttis, double tti_ms, long trials,
                      std::uint64_t seed)
{
  std::mt19937_64 rng (seed);
  std::uniform_int_distribution<int> phase (0, period_ttis - 1);
  double total = 0;
  for (long i = 0; i < trials; ++i)
    {
      const std::int64_t gen = phase (rng);
      std::int64_t ready = light_first_hop ? gen + 1 : gen;
      std::int64_t heard = gen;
      for (int h = 0; h < cv2x_hops; ++h)
        {
          std::int64_t p = phase (rng);
          std::int64_t s = ready + ((p - ready) % period_ttis + period_ttis) % period_ttis;
          heard = s + 1;
          ready = heard;
        }
      total += static_cast<double> (heard - gen);
    }
  return total / static_cast<double> (trials) * tti_ms;
}

inline double
deg (double d)
{
  return d * std::numbers::pi / 180;
}

// Optical link budget written out step by step.
struct LightBudget
{
  double geometric_db, atmospheric_db, total_db, snr, rate_bps, latency_s;
};

inline LightBudget
light_budget (double d_m, double bits)
{
  const double power_w = 0.45, area = 1e-4, resp = 0.5, in = 1e-8, iamb = 1e-7, bw = 1.4e9;
  const double radius = d_m * std::tan (deg (5.0 / 2));
  LightBudget b{};
  b.geometric_db = 10 * std::log10 (std::numbers::pi * radius * radius / area);
  b.atmospheric_db = 0.1 * d_m / 1000;
  b.total_db = b.geometric_db + b.atmospheric_db;
  const double current = resp * power_w / std::pow (10.0, b.total_db / 10);
  b.snr = current * current / (in * in + iamb * iamb);
  b.rate_bps = bw * std::log2 (1 + b.snr);
  b.latency_s = bits / b.rate_bps + d_m / 299792458.0;
  return b;
}

inline double
radio_pathloss_db (double d_m)
{
  return 40 * std::log10 (d_m) + 11.82;
}

} // namespace oracle
