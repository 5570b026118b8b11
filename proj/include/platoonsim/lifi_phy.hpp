#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace platoonsim {

inline constexpr double kSpeedOfLight = 299792458.0;

// Shape of the alignment penalty between 0 deg and the edge of the receiver
// field of view, where it reaches alignment_max_db.
enum class AlignmentProfile
{
  Linear,
  Quadratic
};

struct LifiParams
{
  double wavelength_m = 905e-9; // recorded only
  double optical_power_w = 0.45;
  double modulation_bandwidth_hz = 2.5e9;
  double receiver_bandwidth_hz = 1.4e9;
  double detector_area_m2 = 1e-4;
  double responsivity_a_per_w = 0.5;
  double beam_divergence_deg = 5.0;
  double receiver_fov_deg = 30.0;
  // When true the two angles above are full cone angles (half-angle = value/2).
  bool full_angles = true;
  double noise_current_a = 1e-8;
  double ambient_light_current_a = 1e-7;
  double atmospheric_loss_db_per_km = 0.1;
  double processing_delay_s = 0.0;
  double alignment_max_db = 20.0;
  AlignmentProfile alignment_profile = AlignmentProfile::Linear;

  double beam_half_angle_deg () const { return full_angles ? beam_divergence_deg / 2 : beam_divergence_deg; }
  double fov_half_angle_deg () const { return full_angles ? receiver_fov_deg / 2 : receiver_fov_deg; }
  double effective_bandwidth_hz () const;

  void validate () const;
};

struct LifiLossBreakdown
{
  double geometric_db = 0.0;
  double atmospheric_db = 0.0;
  double alignment_db = 0.0; // +inf when the link is blocked
  double total_db = 0.0;
  bool available = true;
};

// Thrown when the receiver sits outside the field of view or the link carries
// no data.
class LinkUnavailable : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Beam spreading loss: spot area over detector area, floored at 0 dB while the
// spot is smaller than the detector.
double geometric_loss_db (const LifiParams &params, double distance_m);

// std::nullopt when the deviation exceeds the field-of-view half-angle.
std::optional<double> alignment_loss_db (const LifiParams &params, double deviation_deg);

LifiLossBreakdown total_loss (const LifiParams &params, double distance_m, double deviation_deg);

double received_optical_power_w (const LifiParams &params, double distance_m, double deviation_deg);
double snr_linear (const LifiParams &params, double distance_m, double deviation_deg);
double achievable_rate_bps (const LifiParams &params, double snr);

// Serialization + propagation + processing, in seconds.
double hop_latency_s (const LifiParams &params, double distance_m, std::int64_t packet_bits,
                      double deviation_deg);

} // namespace platoonsim
