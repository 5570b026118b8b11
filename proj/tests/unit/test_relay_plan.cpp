#include <doctest.h>

#include <stdexcept>

#include "platoonsim/relay_plan.hpp"

using namespace platoonsim;

TEST_CASE ("architecture names")
{
  for (auto a : {Architecture::Plf, Architecture::Bdl, Architecture::Hybrid})
    CHECK (parse_architecture (to_string (a)) == a);
  CHECK (to_string (Architecture::Hybrid) == "hybrid");
  CHECK_THROWS_AS (parse_architecture ("mesh"), std::invalid_argument);
}

TEST_CASE ("PLF is a nine-hop chain")
{
  ScenarioLayout l;
  auto plan = build_relay_plan (Architecture::Plf, l);
  REQUIRE (plan.edges.size () == 9);
  for (int k = 1; k <= 9; ++k)
    {
      const auto *e = plan.find_edge ({1, k}, {1, k + 1});
      REQUIRE (e);
      CHECK (e->link == LinkType::Cv2x);
      CHECK (e->length_m == doctest::Approx (20.0));
    }
  CHECK (plan.max_edge_length_m () == doctest::Approx (20.0));
  CHECK (plan.source == VehicleId{1, 1});
  CHECK (plan.tail == VehicleId{1, 10});
  CHECK (plan.is_dag_to_tail ());
}

TEST_CASE ("BDL reaches the second leader in one hop")
{
  ScenarioLayout l;
  auto plan = build_relay_plan (Architecture::Bdl, l);
  REQUIRE (plan.edges.size () == 5);
  CHECK (plan.edges.front ().from == VehicleId{1, 1});
  CHECK (plan.edges.front ().to == VehicleId{1, 6});
  CHECK (plan.edges.front ().length_m == doctest::Approx (100.0));
  for (const auto &e : plan.edges)
    CHECK (e.link == LinkType::Cv2x);
  CHECK_FALSE (plan.find_edge ({1, 1}, {1, 2}));
  CHECK (plan.is_dag_to_tail ());
}

TEST_CASE ("HYBRID matches BDL except for the LiFi leader link")
{
  ScenarioLayout l;
  auto bdl = build_relay_plan (Architecture::Bdl, l);
  auto hyb = build_relay_plan (Architecture::Hybrid, l);
  REQUIRE (hyb.edges.size () == bdl.edges.size ());
  for (std::size_t i = 0; i < bdl.edges.size (); ++i)
    {
      CHECK (hyb.edges[i].from == bdl.edges[i].from);
      CHECK (hyb.edges[i].to == bdl.edges[i].to);
      CHECK (hyb.edges[i].length_m == bdl.edges[i].length_m);
      CHECK (hyb.edges[i].link == (i == 0 ? LinkType::Lifi : LinkType::Cv2x));
    }
  CHECK (hyb.has_out_link ({1, 1}, LinkType::Lifi));
  CHECK_FALSE (hyb.has_out_link ({1, 1}, LinkType::Cv2x));
  CHECK (hyb.has_out_link ({1, 6}, LinkType::Cv2x));
  CHECK (hyb.out_edges ({1, 10}).empty ());
}

TEST_CASE ("classical PLF adds direct leader links")
{
  ScenarioLayout l;
  PlanOptions o;
  o.plf_leader_links = true;
  auto plan = build_relay_plan (Architecture::Plf, l, o);
  CHECK (plan.edges.size () == 9 + 8);
  CHECK (plan.find_edge ({1, 1}, {1, 10}));
  CHECK (plan.max_edge_length_m () == doctest::Approx (180.0));
  CHECK (plan.is_dag_to_tail ());
}

TEST_CASE ("second leader position is configurable and checked")
{
  ScenarioLayout l;
  PlanOptions o;
  o.second_leader_position = 4;
  auto plan = build_relay_plan (Architecture::Bdl, l, o);
  CHECK (plan.edges.size () == 7);
  CHECK (plan.edges.front ().length_m == doctest::Approx (60.0));
  o.second_leader_position = 10;
  CHECK_THROWS (build_relay_plan (Architecture::Bdl, l, o));
  o.second_leader_position = 1;
  CHECK_THROWS (build_relay_plan (Architecture::Hybrid, l, o));
}

TEST_CASE ("plans follow the target platoon")
{
  ScenarioLayout l;
  l.target_platoon = 2;
  auto plan = build_relay_plan (Architecture::Plf, l);
  CHECK (plan.source == VehicleId{2, 1});
  CHECK (plan.tail == VehicleId{2, 10});
}
