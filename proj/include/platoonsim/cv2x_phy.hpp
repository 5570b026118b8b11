#pragma once

#include <span>
#include <vector>

namespace platoonsim {

enum class DistanceUnit
{
  Meters,
  Kilometers
};

struct Cv2xParams
{
  double tx_power_dbm = 23.0;
  double noise_power_dbm = -114.0;
  double carrier_frequency_hz = 5.9e9; // recorded only; no formula consumes it
  double pathloss_intercept_db = 11.82;
  double pathloss_slope_db = 40.0; // per decade of distance
  double sinr_threshold_db = 5.0;  // -inf decodes everything
  DistanceUnit distance_unit = DistanceUnit::Meters;
  // Standard deviation of a per-link, time-invariant log-normal shadowing
  // term. Zero disables it.
  double shadowing_sigma_db = 0.0;

  void validate () const;
};

struct RxAttempt
{
  double signal_dbm = 0.0;
  std::vector<double> interferer_dbm;
  double noise_dbm = -114.0;
};

double dbm_to_mw (double dbm);
double mw_to_dbm (double mw);

// PL = intercept + slope * log10(d), d converted to the configured unit.
double pathloss_db (const Cv2xParams &params, double distance_m);
double rx_power_dbm (const Cv2xParams &params, double distance_m);

double sinr_db (double signal_dbm, std::span<const double> interferer_dbm, double noise_dbm);
double sinr_db (const RxAttempt &attempt);

// Inclusive threshold: SINR equal to the threshold decodes.
bool decode_success (const Cv2xParams &params, const RxAttempt &attempt);
bool decode_success (const Cv2xParams &params, double sinr);

} // namespace platoonsim
