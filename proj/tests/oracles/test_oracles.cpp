#include <doctest.h>

#include "oracles/oracles.hpp"
#include "platoonsim/cv2x_phy.hpp"
#include "platoonsim/lifi_phy.hpp"

using namespace platoonsim;

TEST_CASE ("closed-form hop expectation")
{
  CHECK (oracle::hop_delay_ms (9, 100, 1) == 459.0);
  CHECK (oracle::hop_delay_ms (5, 100, 1) == 255.0);
  CHECK (oracle::hop_delay_ms (4, 100, 1) == 204.0);
}

TEST_CASE ("grant-phase model agrees with the closed form within 5 percent")
{
  for (int h : {4, 5, 9})
    {
      double mc = oracle::monte_carlo_delay_ms (h, false, 100, 1.0, 400000, 1);
      CHECK (mc == doctest::Approx (oracle::hop_delay_ms (h, 100, 1)).epsilon (0.05));
      CHECK (mc == doctest::Approx (h * 50.5).epsilon (0.005));
    }
  double light = oracle::monte_carlo_delay_ms (4, true, 100, 1.0, 400000, 2);
  CHECK (light == doctest::Approx (oracle::hop_delay_ms (4, 100, 1)).epsilon (0.05));
  CHECK (light == doctest::Approx (1 + 4 * 50.5).epsilon (0.005));
}

TEST_CASE ("hand link budgets match the library")
{
  CHECK (oracle::radio_pathloss_db (100) == doctest::Approx (91.82).epsilon (1e-12));
  CHECK (pathloss_db (Cv2xParams{}, 100) == oracle::radio_pathloss_db (100));

  auto b = oracle::light_budget (100, 2400);
  LifiParams p;
  CHECK (b.geometric_db == doctest::Approx (57.77).epsilon (1e-4));
  CHECK (b.total_db == doctest::Approx (57.78).epsilon (1e-4));
  CHECK (b.snr == doctest::Approx (13.9).epsilon (0.01));
  CHECK (b.rate_bps == doctest::Approx (5.46e9).epsilon (0.002));
  CHECK (b.latency_s == doctest::Approx (0.77e-6).epsilon (0.01));
  CHECK (total_loss (p, 100, 0).total_db == doctest::Approx (b.total_db).epsilon (1e-12));
  CHECK (snr_linear (p, 100, 0) == doctest::Approx (b.snr).epsilon (1e-12));
  CHECK (hop_latency_s (p, 100, 2400, 0) == doctest::Approx (b.latency_s).epsilon (1e-12));
}
