#include "platoonsim/cv2x_phy.hpp"

#include <cmath>
#include <stdexcept>

namespace platoonsim {

void
Cv2xParams::validate () const
{
  if (!std::isfinite (tx_power_dbm) || !std::isfinite (noise_power_dbm))
    throw std::domain_error ("powers must be finite");
  if (!(tx_power_dbm > noise_power_dbm))
    throw std::domain_error ("transmit power must exceed the noise power");
  if (!(pathloss_slope_db > 0.0))
    throw std::domain_error ("path-loss slope must be positive");
  if (std::isnan (sinr_threshold_db) || sinr_threshold_db == INFINITY)
    throw std::domain_error ("SINR threshold must be a number below +inf");
  if (!(shadowing_sigma_db >= 0.0))
    throw std::domain_error ("shadowing sigma must be non-negative");
}

double
dbm_to_mw (double dbm)
{
  return std::pow (10.0, dbm / 10.0);
}

double
mw_to_dbm (double mw)
{
  return 10.0 * std::log10 (mw);
}

double
pathloss_db (const Cv2xParams &params, double distance_m)
{
  if (!(distance_m > 0.0))
    throw std::domain_error ("path loss needs a positive distance");
  double d = params.distance_unit == DistanceUnit::Kilometers ? distance_m / 1000.0 : distance_m;
  return params.pathloss_slope_db * std::log10 (d) + params.pathloss_intercept_db;
}

double
rx_power_dbm (const Cv2xParams &params, double distance_m)
{
  return params.tx_power_dbm - pathloss_db (params, distance_m);
}

double
sinr_db (double signal_dbm, std::span<const double> interferer_dbm, double noise_dbm)
{
  if (interferer_dbm.empty ())
    return signal_dbm - noise_dbm;
  double denom = dbm_to_mw (noise_dbm);
  for (double i : interferer_dbm)
    denom += dbm_to_mw (i);
  return mw_to_dbm (dbm_to_mw (signal_dbm) / denom);
}

double
sinr_db (const RxAttempt &attempt)
{
  return sinr_db (attempt.signal_dbm, attempt.interferer_dbm, attempt.noise_dbm);
}

bool
decode_success (const Cv2xParams &params, double sinr)
{
  return sinr >= params.sinr_threshold_db;
}

bool
decode_success (const Cv2xParams &params, const RxAttempt &attempt)
{
  return decode_success (params, sinr_db (attempt));
}

} // namespace platoonsim
