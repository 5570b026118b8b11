#include "platoonsim/scenario.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace platoonsim {

std::string
to_string (VehicleId v)
{
  return std::to_string (v.platoon) + "." + std::to_string (v.position);
}

VehicleId
parse_vehicle_id (std::string_view text)
{
  auto dot = text.find ('.');
  if (dot == std::string_view::npos)
    throw std::invalid_argument ("malformed vehicle id '" + std::string (text) + "'");
  VehicleId v;
  auto p = std::from_chars (text.data (), text.data () + dot, v.platoon);
  auto q = std::from_chars (text.data () + dot + 1, text.data () + text.size (), v.position);
  if (p.ec != std::errc{} || p.ptr != text.data () + dot || q.ec != std::errc{} ||
      q.ptr != text.data () + text.size ())
    throw std::invalid_argument ("malformed vehicle id '" + std::string (text) + "'");
  return v;
}

bool
ScenarioLayout::contains (VehicleId v) const
{
  return v.platoon >= 0 && v.platoon < num_platoons && v.position >= 1 &&
         v.position <= platoon_size;
}

void
ScenarioLayout::validate () const
{
  if (!(vehicle_length_m > 0.0))
    throw std::domain_error ("vehicle length must be positive");
  if (!(inter_vehicle_gap_m > 0.0))
    throw std::domain_error ("inter-vehicle gap must be positive");
  if (!(lane_offset_m > 0.0))
    throw std::domain_error ("lane offset must be positive");
  if (!std::isfinite (longitudinal_stagger_m))
    throw std::domain_error ("longitudinal stagger must be finite");
  if (platoon_size < 2)
    throw std::domain_error ("platoon size must be at least 2");
  if (num_platoons < 1)
    throw std::domain_error ("need at least one platoon");
  if (target_platoon < 0 || target_platoon >= num_platoons)
    throw std::domain_error ("target platoon out of range");
}

int
ScenarioLayout::index_of (VehicleId v) const
{
  if (!contains (v))
    throw std::domain_error ("vehicle " + to_string (v) + " not in layout");
  return v.platoon * platoon_size + (v.position - 1);
}

VehicleId
ScenarioLayout::vehicle_at (int index) const
{
  if (index < 0 || index >= vehicle_count ())
    throw std::domain_error ("vehicle index out of range");
  return {index / platoon_size, index % platoon_size + 1};
}

Point
position_of (const ScenarioLayout &layout, VehicleId v)
{
  if (!layout.contains (v))
    throw std::domain_error ("vehicle " + to_string (v) + " not in layout");
  return {-(v.position - 1) * layout.spacing () - v.platoon * layout.longitudinal_stagger_m,
          v.platoon * layout.lane_offset_m};
}

double
distance (const ScenarioLayout &layout, VehicleId a, VehicleId b)
{
  if (a == b)
    throw std::domain_error ("distance from a vehicle to itself is undefined");
  auto pa = position_of (layout, a);
  auto pb = position_of (layout, b);
  return std::hypot (pa.x - pb.x, pa.y - pb.y);
}

} // namespace platoonsim
