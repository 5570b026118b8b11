#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace platoonsim {

// Vehicle numbering follows the convoy convention: position 1 is the leader,
// position platoon_size is the tail.
struct VehicleId
{
  int platoon = 0;
  int position = 1;

  auto operator<=> (const VehicleId &) const = default;
};

std::string to_string (VehicleId v);
VehicleId parse_vehicle_id (std::string_view text);

struct Point
{
  double x = 0.0; // longitudinal, meters (leader at 0, followers negative)
  double y = 0.0; // lateral, meters
};

// Static geometry: num_platoons parallel platoons, leaders abreast.
struct ScenarioLayout
{
  double vehicle_length_m = 10.0;
  double inter_vehicle_gap_m = 10.0;
  double lane_offset_m = 4.0;
  double longitudinal_stagger_m = 0.0;
  int platoon_size = 10;
  int num_platoons = 3;
  int target_platoon = 1;

  double spacing () const { return vehicle_length_m + inter_vehicle_gap_m; }
  int vehicle_count () const { return platoon_size * num_platoons; }

  bool contains (VehicleId v) const;
  void validate () const;

  // Dense index in [0, vehicle_count()), platoon-major.
  int index_of (VehicleId v) const;
  VehicleId vehicle_at (int index) const;

  VehicleId leader (int platoon) const { return {platoon, 1}; }
  VehicleId tail (int platoon) const { return {platoon, platoon_size}; }
};

// Antenna point (front bumper) of v. Throws std::domain_error for ids outside
// the layout.
Point position_of (const ScenarioLayout &layout, VehicleId v);

// Euclidean distance in meters; a == b is a domain error.
double distance (const ScenarioLayout &layout, VehicleId a, VehicleId b);

} // namespace platoonsim
