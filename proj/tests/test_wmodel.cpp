#include "doctest.h"

#include "gpf/errors.hpp"
#include "support.hpp"

using namespace gpf;

namespace {

WModel two_agents(InfoSpec a, InfoSpec b) {
  return WModel::build({{"w", "w", {"0", "1"}, FactorKind::NatureExogenous}},
                       {{"a", std::nullopt}, {"b", std::nullopt}},
                       {{"ua", "ua", {"0", "1"}, FactorKind::Action},
                        {"ub", "ub", {"0", "1", "2"}, FactorKind::Action}},
                       {a, b});
}

}  // namespace

TEST_CASE("configuration layout: Nature first, then actions in agent order") {
  const auto m = two_agents(CylinderInfo{}, CylinderInfo{});
  CHECK(m.configuration().size() == 12);
  CHECK(m.action_tuple_count() == 6);
  CHECK(m.configuration_index(1, 4) == 10);
  CHECK(m.nature_index_of(10) == 1);
  CHECK(m.action_of(10, 0) == 1);
  CHECK(m.action_of(10, 1) == 1);
  CHECK(m.agent_index("b") == 1);
}

TEST_CASE("self-information is rejected with the offending agent") {
  try {
    two_agents(CylinderInfo{{"ua"}}, CylinderInfo{});
    FAIL("expected SelfInformationViolation");
  } catch (const SelfInformationViolation& e) {
    CHECK(e.agent() == "a");
  }
}

TEST_CASE("sequential order follows observation, ties by declaration") {
  CHECK(two_agents(CylinderInfo{{"ub"}}, CylinderInfo{{"w"}}).sequential_order() ==
        std::vector<std::size_t>{1, 0});
  CHECK(two_agents(CylinderInfo{}, CylinderInfo{}).sequential_order() ==
        std::vector<std::size_t>{0, 1});
  CHECK_FALSE(two_agents(CylinderInfo{{"ub"}}, CylinderInfo{{"ua"}}).sequential_order());
}

TEST_CASE("strategies are ranked with the first atom most significant") {
  const auto m = two_agents(CylinderInfo{}, CylinderInfo{{"w"}});
  CHECK(count_strategies(m, 1) == 9);
  CHECK(strategy_at(m, 1, 5).actions == std::vector<std::size_t>{1, 2});
  CHECK(strategy_index(m, strategy_at(m, 1, 7)) == 7);
  std::uint64_t i = 0;
  for (const auto& s : enumerate_strategies(m, 1)) CHECK(strategy_index(m, s) == i++);
  CHECK(i == 9);
  CHECK_THROWS_AS(count_strategies(m, 1, 8), CapacityExceeded);
}

TEST_CASE("solution map equals brute force on random sequential models") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 40; ++round) {
    const auto model = testing::random_sequential_model(rng);
    REQUIRE(model->sequential_order());
    const auto profile = testing::random_profile(rng, *model);
    const auto fast = solution_map(*model, profile);
    CHECK(fast == solution_map_by_enumeration(*model, profile));
    for (std::size_t w = 0; w < model->nature().size(); ++w) {
      const auto fixed = testing::oracle_fixed_points(*model, profile, w);
      REQUIRE(fixed.size() == 1);
      CHECK(fast[w] == testing::oracle_configuration(*model, w, fixed[0]));
    }
  }
}

TEST_CASE("mutual observation is not playable") {
  const auto m = two_agents(CylinderInfo{{"ub"}}, CylinderInfo{{"ua"}});
  const auto r = check_playability(m, {});
  CHECK_FALSE(r.playable);
  CHECK(r.profiles_checked == count_strategies(m, 0) * count_strategies(m, 1));
  CHECK(r.failures > 0);
  for (const auto& w : r.witnesses)
    CHECK(w.solutions.size() == testing::oracle_fixed_points(m, w.profile, w.nature_index).size());
  const auto sample = check_playability(m, {PlayabilityMode::Sample{50, 3}});
  CHECK(sample.mode == "sample");
  CHECK(sample.profiles_checked == 50);
}

TEST_CASE("sequential models are playable without enumeration") {
  const auto m = two_agents(CylinderInfo{{"w"}}, CylinderInfo{{"ua"}});
  const auto r = check_playability(m, {});
  CHECK(r.playable);
  CHECK(r.sequential_order);
  CHECK(r.profiles_checked == 0);
}
