#include "platoonsim/relay_plan.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace platoonsim {

std::string_view
to_string (Architecture a)
{
  switch (a)
    {
    case Architecture::Plf:
      return "plf";
    case Architecture::Bdl:
      return "bdl";
    case Architecture::Hybrid:
      return "hybrid";
    }
  return "?";
}

Architecture
parse_architecture (std::string_view text)
{
  if (text == "plf")
    return Architecture::Plf;
  if (text == "bdl")
    return Architecture::Bdl;
  if (text == "hybrid")
    return Architecture::Hybrid;
  throw std::invalid_argument ("unknown architecture '" + std::string (text) + "' (expected plf, bdl or hybrid)");
}

const RelayEdge *
RelayPlan::find_edge (VehicleId from, VehicleId to) const
{
  for (const auto &e : edges)
    if (e.from == from && e.to == to)
      return &e;
  return nullptr;
}

std::vector<const RelayEdge *>
RelayPlan::out_edges (VehicleId from) const
{
  std::vector<const RelayEdge *> out;
  for (const auto &e : edges)
    if (e.from == from)
      out.push_back (&e);
  return out;
}

bool
RelayPlan::has_out_link (VehicleId from, LinkType link) const
{
  return std::any_of (edges.begin (), edges.end (),
                      [&] (const RelayEdge &e) { return e.from == from && e.link == link; });
}

bool
RelayPlan::is_dag_to_tail () const
{
  // Rearward edges within one platoon cannot form a cycle.
  for (const auto &e : edges)
    if (e.from.platoon != e.to.platoon || e.to.position <= e.from.position)
      return false;
  std::set<VehicleId> reached{source};
  bool grew = true;
  while (grew)
    {
      grew = false;
      for (const auto &e : edges)
        if (reached.count (e.from) && reached.insert (e.to).second)
          grew = true;
    }
  return reached.count (tail) > 0;
}

double
RelayPlan::max_edge_length_m () const
{
  double m = 0.0;
  for (const auto &e : edges)
    m = std::max (m, e.length_m);
  return m;
}

RelayPlan
build_relay_plan (Architecture architecture, const ScenarioLayout &layout, const PlanOptions &options)
{
  const int p = layout.target_platoon;
  const int n = layout.platoon_size;
  RelayPlan plan;
  plan.architecture = architecture;
  plan.source = {p, 1};
  plan.tail = {p, n};

  auto add = [&] (int from, int to, LinkType link) {
    VehicleId a{p, from}, b{p, to};
    plan.edges.push_back ({a, b, link, distance (layout, a, b)});
  };

  switch (architecture)
    {
    case Architecture::Plf:
      for (int k = 1; k < n; ++k)
        add (k, k + 1, LinkType::Cv2x);
      if (options.plf_leader_links)
        for (int k = 3; k <= n; ++k)
          add (1, k, LinkType::Cv2x);
      break;
    case Architecture::Bdl:
    case Architecture::Hybrid:
      {
        const int mid = options.second_leader_position;
        if (mid <= 1 || mid >= n)
          throw std::domain_error ("second leader must sit strictly between leader and tail");
        add (1, mid, architecture == Architecture::Hybrid ? LinkType::Lifi : LinkType::Cv2x);
        for (int k = mid; k < n; ++k)
          add (k, k + 1, LinkType::Cv2x);
        break;
      }
    }
  return plan;
}

} // namespace platoonsim
