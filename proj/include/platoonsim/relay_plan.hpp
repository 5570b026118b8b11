#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "platoonsim/scenario.hpp"

namespace platoonsim {

// Information-flow architecture of the target platoon.
//   Plf    - predecessor chain 1 -> 2 -> ... -> N
//   Bdl    - leader reaches the second leader in one C-V2X hop, then chain
//   Hybrid - same edges as Bdl, leader-to-leader edge carried over LiFi
// Only the leader-to-tail direction is simulated for Bdl.
enum class Architecture
{
  Plf,
  Bdl,
  Hybrid
};

std::string_view to_string (Architecture a);
Architecture parse_architecture (std::string_view text);

enum class LinkType
{
  Cv2x,
  Lifi
};

struct RelayEdge
{
  VehicleId from;
  VehicleId to;
  LinkType link = LinkType::Cv2x;
  double length_m = 0.0;
};

struct PlanOptions
{
  int second_leader_position = 6;
  // Classical predecessor-leader following: the leader additionally feeds
  // every follower directly.
  bool plf_leader_links = false;
};

struct RelayPlan
{
  Architecture architecture = Architecture::Plf;
  VehicleId source;
  VehicleId tail;
  std::vector<RelayEdge> edges;

  const RelayEdge *find_edge (VehicleId from, VehicleId to) const;
  std::vector<const RelayEdge *> out_edges (VehicleId from) const;
  bool has_out_link (VehicleId from, LinkType link) const;
  // True when every edge points rearward and the tail is reachable.
  bool is_dag_to_tail () const;
  double max_edge_length_m () const;
};

RelayPlan build_relay_plan (Architecture architecture, const ScenarioLayout &layout,
                            const PlanOptions &options = {});

} // namespace platoonsim
