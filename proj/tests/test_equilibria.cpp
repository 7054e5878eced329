#include "doctest.h"

#include "gpf/errors.hpp"
#include "support.hpp"

using namespace gpf;

TEST_CASE("prisoner's dilemma best responses and equilibrium") {
  const auto game = build_prisoners_dilemma();
  const NormalForm nf(game);
  for (std::uint64_t other = 0; other < 2; ++other) {
    CHECK(best_responses(nf, 0, {0, other}).strategies == std::vector<std::uint64_t>{1});
    CHECK(best_responses(nf, 1, {other, 0}).strategies == std::vector<std::uint64_t>{1});
  }
  const auto r = nash_equilibria(nf);
  REQUIRE(r.profiles.size() == 1);
  CHECK(r.profiles[0] == PlayerProfile{1, 1});
  CHECK(r.values[0] == std::vector<double>{5, 5});
}

TEST_CASE("Nash equilibria match unilateral-deviation oracle") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 60; ++round) {
    const auto game = testing::random_game(rng);
    const NormalForm nf(game);
    const auto r = nash_equilibria(nf);
    const std::set<PlayerProfile> got(r.profiles.begin(), r.profiles.end());
    CHECK(got == testing::oracle_nash(nf));
    CHECK(std::is_sorted(r.profiles.begin(), r.profiles.end()));
  }
}

TEST_CASE("Stackelberg modes on a tie") {
  // Follower indifferent between two responses worth 1 and 3 to the leader.
  auto model = std::make_shared<const WModel>(WModel::build(
      {{"w", "w", {"*"}, FactorKind::NatureExogenous}},
      {{"leader", std::nullopt}, {"follower", std::nullopt}},
      {{"ul", "ul", {"x"}, FactorKind::Action}, {"uf", "uf", {"a", "b"}, FactorKind::Action}},
      {CylinderInfo{}, CylinderInfo{{"ul"}}}));
  const auto b = Belief::uniform(model->nature());
  const auto game = make_wgame(model, partition_by_agent_player(*model),
                               {{{"leader", Sense::Payoff, {1, 3}}, Expectation{b}},
                                {{"follower", Sense::Cost, {0, 0}}, Expectation{b}}},
                               {Role::Leader, Role::Follower});
  const NormalForm nf(game);
  const PlayerProfile p{0, 0};
  CHECK(leader_value(nf, 0, p, StackelbergMode::optimistic()) == 3);
  CHECK(leader_value(nf, 0, p, StackelbergMode::pessimistic()) == 1);
  CHECK(leader_value(nf, 0, p, StackelbergMode::with_theta(0.25)) == doctest::Approx(1.5));
  CHECK(leader_value(nf, 0, p, StackelbergMode::leader_risk(RiskKind::Expectation)) == 2);
  CHECK(leader_value(nf, 0, p, StackelbergMode::leader_risk(RiskKind::WorstCase)) == 1);
  CHECK_THROWS_AS(StackelbergMode::with_theta(1.5), InvalidArgument);
  const auto ns = nash_stackelberg(nf, StackelbergMode::pessimistic());
  CHECK(ns.profiles.size() == 2);
  CHECK(ns.ties == 2);
}

TEST_CASE("theta mixing treats an infinite endpoint with zero weight as absent") {
  auto model = std::make_shared<const WModel>(WModel::build(
      {{"w", "w", {"*"}, FactorKind::NatureExogenous}},
      {{"leader", std::nullopt}, {"follower", std::nullopt}},
      {{"ul", "ul", {"x"}, FactorKind::Action}, {"uf", "uf", {"a", "b"}, FactorKind::Action}},
      {CylinderInfo{}, CylinderInfo{{"ul"}}}));
  const auto b = Belief::uniform(model->nature());
  const auto game = make_wgame(model, partition_by_agent_player(*model),
                               {{{"leader", Sense::Payoff, {-kInf, 3}}, Expectation{b}},
                                {{"follower", Sense::Cost, {0, 0}}, Expectation{b}}},
                               {Role::Leader, Role::Follower});
  const NormalForm nf(game);
  CHECK(leader_value(nf, 0, {0, 0}, StackelbergMode::with_theta(1)) == 3);
  CHECK(leader_value(nf, 0, {0, 0}, StackelbergMode::with_theta(0.5)) == -kInf);
}

TEST_CASE("leader-follower split needs roles") {
  const auto game = build_prisoners_dilemma();
  const NormalForm nf(game);
  CHECK_THROWS_AS(stackelberg_strategies(nf, {}), InvalidArgument);
}

TEST_CASE("followers with no pure Nash response make a leader profile infeasible") {
  // Two followers playing matching pennies after a one-action leader.
  auto model = std::make_shared<const WModel>(WModel::build(
      {{"w", "w", {"*"}, FactorKind::NatureExogenous}},
      {{"l", std::nullopt}, {"f", std::nullopt}, {"g", std::nullopt}},
      {{"ul", "ul", {"x"}, FactorKind::Action}, {"uf", "uf", {"h", "t"}, FactorKind::Action},
       {"ug", "ug", {"h", "t"}, FactorKind::Action}},
      {CylinderInfo{}, CylinderInfo{}, CylinderInfo{}}));
  const auto b = Belief::uniform(model->nature());
  const auto game = make_wgame(model, partition_by_agent_player(*model),
                               {{{"l", Sense::Payoff, {0, 0, 0, 0}}, Expectation{b}},
                                {{"f", Sense::Payoff, {1, 0, 0, 1}}, Expectation{b}},
                                {{"g", Sense::Payoff, {0, 1, 1, 0}}, Expectation{b}}},
                               {Role::Leader, Role::Follower, Role::Follower});
  const NormalForm nf(game);
  CHECK(followers_nash(nf, {0, 0, 0}).empty());
  CHECK_THROWS_AS(leader_value(nf, 0, {0, 0, 0}, {}), EmptyFollowerResponse);
  const auto s = stackelberg_strategies(nf, {});
  CHECK(s.leader_profiles.empty());
  CHECK(s.infeasible.size() == 1);
}
