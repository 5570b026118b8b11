#include "platoonsim/lifi_phy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace platoonsim {

namespace {

double
deg_to_rad (double deg)
{
  return deg * std::numbers::pi / 180.0;
}

bool
positive (double v)
{
  return v > 0.0 && std::isfinite (v);
}

} // namespace

double
LifiParams::effective_bandwidth_hz () const
{
  return std::min (modulation_bandwidth_hz, receiver_bandwidth_hz);
}

void
LifiParams::validate () const
{
  if (!positive (wavelength_m) || !positive (optical_power_w) || !positive (modulation_bandwidth_hz) ||
      !positive (receiver_bandwidth_hz) || !positive (detector_area_m2) ||
      !positive (responsivity_a_per_w) || !positive (noise_current_a) ||
      !positive (ambient_light_current_a) || !positive (atmospheric_loss_db_per_km))
    throw std::domain_error ("LiFi physical quantities must be positive and finite");
  if (!positive (beam_divergence_deg) || !positive (receiver_fov_deg))
    throw std::domain_error ("LiFi angles must be positive");
  if (fov_half_angle_deg () >= 90.0 || beam_half_angle_deg () >= 90.0)
    throw std::domain_error ("LiFi half-angles must be below 90 degrees");
  if (!(beam_divergence_deg < receiver_fov_deg))
    throw std::domain_error ("beam divergence must be narrower than the receiver field of view");
  if (!(processing_delay_s >= 0.0) || !std::isfinite (processing_delay_s))
    throw std::domain_error ("processing delay must be non-negative");
  if (!(alignment_max_db >= 0.0) || !std::isfinite (alignment_max_db))
    throw std::domain_error ("alignment penalty must be non-negative");
}

double
geometric_loss_db (const LifiParams &params, double distance_m)
{
  if (!(distance_m >= 0.0))
    throw std::domain_error ("distance must be non-negative");
  double r = distance_m * std::tan (deg_to_rad (params.beam_half_angle_deg ()));
  double spot_area = std::numbers::pi * r * r;
  if (spot_area <= params.detector_area_m2)
    return 0.0;
  return 10.0 * std::log10 (spot_area / params.detector_area_m2);
}

std::optional<double>
alignment_loss_db (const LifiParams &params, double deviation_deg)
{
  if (!(deviation_deg >= 0.0))
    throw std::domain_error ("angular deviation must be non-negative");
  double edge = params.fov_half_angle_deg ();
  if (deviation_deg > edge)
    return std::nullopt;
  double f = deviation_deg / edge;
  switch (params.alignment_profile)
    {
    case AlignmentProfile::Quadratic:
      return params.alignment_max_db * f * f;
    case AlignmentProfile::Linear:
      break;
    }
  return params.alignment_max_db * f;
}

LifiLossBreakdown
total_loss (const LifiParams &params, double distance_m, double deviation_deg)
{
  if (!(distance_m > 0.0))
    throw std::domain_error ("LiFi link distance must be positive");
  LifiLossBreakdown b;
  b.geometric_db = geometric_loss_db (params, distance_m);
  b.atmospheric_db = params.atmospheric_loss_db_per_km * (distance_m / 1000.0);
  auto align = alignment_loss_db (params, deviation_deg);
  b.available = align.has_value ();
  b.alignment_db = align.value_or (INFINITY);
  b.total_db = b.geometric_db + b.atmospheric_db + b.alignment_db;
  return b;
}

double
received_optical_power_w (const LifiParams &params, double distance_m, double deviation_deg)
{
  auto loss = total_loss (params, distance_m, deviation_deg);
  if (!loss.available)
    throw LinkUnavailable ("LiFi receiver outside field of view");
  return params.optical_power_w * std::pow (10.0, -loss.total_db / 10.0);
}

double
snr_linear (const LifiParams &params, double distance_m, double deviation_deg)
{
  double signal_a = params.responsivity_a_per_w * received_optical_power_w (params, distance_m, deviation_deg);
  double sigma = std::hypot (params.noise_current_a, params.ambient_light_current_a);
  double ratio = signal_a / sigma;
  return ratio * ratio;
}

double
achievable_rate_bps (const LifiParams &params, double snr)
{
  if (!(snr >= 0.0))
    throw std::domain_error ("SNR must be non-negative");
  return params.effective_bandwidth_hz () * std::log2 (1.0 + snr);
}

double
hop_latency_s (const LifiParams &params, double distance_m, std::int64_t packet_bits, double deviation_deg)
{
  if (packet_bits <= 0)
    throw std::domain_error ("packet size must be positive");
  double rate = achievable_rate_bps (params, snr_linear (params, distance_m, deviation_deg));
  if (!(rate > 0.0))
    throw LinkUnavailable ("LiFi link outage: zero achievable rate");
  return static_cast<double> (packet_bits) / rate + distance_m / kSpeedOfLight + params.processing_delay_s;
}

} // namespace platoonsim
