#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "platoonsim/cv2x_phy.hpp"

using namespace platoonsim;

namespace {

// hand-rolled linear-domain SINR
double
ref_sinr (double s, const std::vector<double> &in, double n)
{
  double denom = std::pow (10.0, n / 10);
  for (double i : in)
    denom += std::pow (10.0, i / 10);
  return 10 * std::log10 (std::pow (10.0, s / 10) / denom);
}

} // namespace

TEST_CASE ("path loss examples")
{
  Cv2xParams p;
  CHECK (pathloss_db (p, 1.0) == doctest::Approx (11.82).epsilon (1e-12));
  CHECK (pathloss_db (p, 100.0) == 91.82);
  CHECK (pathloss_db (p, 180.0) == doctest::Approx (40 * std::log10 (180.0) + 11.82));
  CHECK (pathloss_db (p, 180.0) == doctest::Approx (102.03).epsilon (1e-4));
  CHECK (pathloss_db (p, 20.0) == doctest::Approx (63.86).epsilon (1e-3));
}

TEST_CASE ("path loss rejects non-positive distance")
{
  Cv2xParams p;
  CHECK_THROWS_AS (pathloss_db (p, 0.0), std::domain_error);
  CHECK_THROWS_AS (pathloss_db (p, -5.0), std::domain_error);
  CHECK_THROWS_AS (rx_power_dbm (p, 0.0), std::domain_error);
}

TEST_CASE ("kilometre unit switch")
{
  Cv2xParams p;
  p.distance_unit = DistanceUnit::Kilometers;
  CHECK (pathloss_db (p, 1000.0) == doctest::Approx (11.82));
  CHECK (pathloss_db (p, 100.0) == doctest::Approx (-28.18));
}

TEST_CASE ("path loss is increasing and doubling adds 40 log10 2")
{
  Cv2xParams p;
  double prev = -INFINITY;
  for (double d = 0.5; d < 2000; d *= 1.37)
    {
      double pl = pathloss_db (p, d);
      CHECK (pl > prev);
      prev = pl;
      CHECK (pathloss_db (p, 2 * d) - pl == doctest::Approx (40 * std::log10 (2.0)).epsilon (1e-12));
    }
}

TEST_CASE ("received power examples")
{
  Cv2xParams p;
  CHECK (rx_power_dbm (p, 1.0) == doctest::Approx (11.18));
  CHECK (rx_power_dbm (p, 100.0) == doctest::Approx (-68.82));
  CHECK (rx_power_dbm (p, 180.0) == doctest::Approx (-79.03).epsilon (1e-4));
}

TEST_CASE ("SINR examples")
{
  CHECK (sinr_db (-68.82, {}, -114.0) == doctest::Approx (45.18));
  std::vector<double> same{-50.0};
  CHECK (sinr_db (-50.0, same, -200.0) == doctest::Approx (0.0).epsilon (1e-9));
  std::vector<double> one{-90.0};
  CHECK (sinr_db (-79.03, one, -114.0) == doctest::Approx (ref_sinr (-79.03, one, -114.0)).epsilon (1e-12));
  CHECK (sinr_db (-79.03, one, -114.0) == doctest::Approx (10.95).epsilon (1e-3));
  RxAttempt a{-79.03, one, -114.0};
  CHECK (sinr_db (a) == sinr_db (-79.03, one, -114.0));
}

TEST_CASE ("SINR without interferers is exactly S minus N")
{
  std::mt19937_64 rng (3);
  std::uniform_real_distribution<double> pw (-130, 30);
  for (int i = 0; i < 1000; ++i)
    {
      double s = pw (rng), n = pw (rng);
      CHECK (sinr_db (s, {}, n) == s - n);
    }
}

TEST_CASE ("adding an interferer strictly lowers SINR and decoding is monotone")
{
  Cv2xParams p;
  std::mt19937_64 rng (11);
  std::uniform_real_distribution<double> pw (-110, -40);
  std::uniform_int_distribution<int> cnt (0, 6);
  for (int trial = 0; trial < 2000; ++trial)
    {
      double s = pw (rng);
      std::vector<double> in (static_cast<std::size_t> (cnt (rng)));
      for (auto &x : in)
        x = pw (rng);
      double base = sinr_db (s, in, p.noise_power_dbm);
      CHECK (base == doctest::Approx (ref_sinr (s, in, p.noise_power_dbm)).epsilon (1e-9));
      auto more = in;
      more.push_back (pw (rng));
      CHECK (sinr_db (s, more, p.noise_power_dbm) < base);
      if (decode_success (p, sinr_db (s, more, p.noise_power_dbm)))
        CHECK (decode_success (p, base));
    }
}

TEST_CASE ("decode threshold is inclusive")
{
  Cv2xParams p;
  CHECK (decode_success (p, 45.18));
  CHECK (decode_success (p, 5.0));
  CHECK_FALSE (decode_success (p, std::nextafter (5.0, 0.0)));
  CHECK_FALSE (decode_success (p, 0.0));
  RxAttempt a{-68.82, {}, -114.0};
  CHECK (decode_success (p, a));
  p.sinr_threshold_db = -INFINITY;
  CHECK (decode_success (p, -300.0));
}

TEST_CASE ("dB conversions")
{
  CHECK (dbm_to_mw (0.0) == 1.0);
  CHECK (dbm_to_mw (30.0) == doctest::Approx (1000.0));
  CHECK (mw_to_dbm (dbm_to_mw (-68.82)) == doctest::Approx (-68.82));
}

TEST_CASE ("parameter validation")
{
  Cv2xParams p;
  CHECK_NOTHROW (p.validate ());
  p.noise_power_dbm = 30;
  CHECK_THROWS (p.validate ());
  p = {};
  p.pathloss_slope_db = 0;
  CHECK_THROWS (p.validate ());
  p = {};
  p.shadowing_sigma_db = -1;
  CHECK_THROWS (p.validate ());
}
