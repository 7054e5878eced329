#include "doctest.h"

#include "gpf/errors.hpp"
#include "support.hpp"

using namespace gpf;

namespace {

ThaiParams small_mt(std::size_t T) {
  auto p = thai_reference_params();
  p.baseline.assign(T, 10);
  p.price.assign(T, 1);
  p.target_grid = {0, 4};
  p.consumption_grid = {6, 8};
  return p;
}

std::size_t config_of(const WModel& m, std::vector<std::size_t> point) {
  return m.configuration().index_of(point);
}

}  // namespace

TEST_CASE("every builtin model is sequential") {
  auto slmf = small_mt(2);
  slmf.follower_types.push_back({"second", {{2, 0.1}}, {}, 0});
  for (const auto& g : {build_prisoners_dilemma(), build_tou_game(tou_reference_params()),
                        build_thai_slsf_st(thai_reference_params()), build_thai_slsf_mt(small_mt(2)),
                        build_thai_slmf_mt(slmf)}) {
    CHECK(g.model->sequential_order());
    CHECK(check_playability(*g.model, {}).playable);
  }
}

TEST_CASE("TOU objectives") {
  const auto g = build_tou_game(tou_reference_params());
  const auto& m = *g.model;
  CHECK(m.action_factor(0).elements == std::vector<std::string>{"0.2/0.1", "0.3/0.1"});
  // (d, c, w, prices = 0.3/0.1, α = 0.5)
  const auto h = config_of(m, {0, 0, 0, 1, 1});
  CHECK(g.data[0].objective.values[h] == doctest::Approx(100 * 0.5 * 0.3 + 100 * 0.5 * 0.1 - 100 * 0.05));
  CHECK(g.data[1].objective.values[h] ==
        doctest::Approx(100 * 0.5 * 0.3 + 100 * 0.5 * 0.1 + 100 * 0.5 * 0.15));
  CHECK(g.data[0].objective.sense == Sense::Payoff);
  CHECK(g.data[1].objective.sense == Sense::Cost);
  auto bad = tou_reference_params();
  bad.peak_prices = {0.05};
  CHECK_THROWS_AS(build_tou_game(bad), InvalidArgument);
}

TEST_CASE("Thai single-timestep follower payoffs") {
  const auto g = build_thai_slsf_st(thai_reference_params());
  const auto& m = *g.model;
  // Nature: leader type, follower type; actions: target, consumption.
  const double expected[] = {4.4, 2.6, 0};
  for (std::size_t x = 0; x < 3; ++x) {
    const auto h = config_of(m, {0, 0, 2, x});
    CHECK(g.data[1].objective.values[h] == doctest::Approx(expected[x]));
  }
  CHECK(g.data[0].objective.values[config_of(m, {0, 0, 2, 0})] == doctest::Approx(6 - 2 - 1.8));
}

TEST_CASE("single timestep of the multi-timestep builder collapses to the single-timestep model") {
  const auto st = build_thai_slsf_st(thai_reference_params());
  const auto mt = build_thai_slsf_mt(thai_reference_params());
  CHECK(normal_form_matrix(NormalForm(st)) == normal_form_matrix(NormalForm(mt)));
}

TEST_CASE("open-loop Thai strategies are constant maps") {
  auto p = small_mt(2);
  p.info_mode = ThaiInfoMode::OpenLoop;
  const auto g = build_thai_slsf_mt(p);
  for (std::size_t a = 0; a < g.model->agent_count(); ++a)
    CHECK(count_strategies(*g.model, a) == g.model->action_count(a));
}

TEST_CASE("two-timestep leader strategy count") {
  const auto g = build_thai_slsf_mt(small_mt(2));
  const NormalForm nf(g);
  std::uint64_t expected = 1, enumerated = 1;
  for (std::size_t a : g.players.agents_of(0)) {
    expected *= std::uint64_t(1) << g.model->info(a).atom_count();
    enumerated *= enumerate_strategies(*g.model, a).size();
  }
  CHECK(nf.strategy_count(0) == expected);
  CHECK(expected == enumerated);
}

TEST_CASE("one follower: aggregation variants coincide with the single-follower model") {
  auto p = small_mt(2);
  const auto base = normal_form_matrix(NormalForm(build_thai_slsf_mt(p)));
  p.aggregation = RewardAggregation::Literal;
  CHECK(normal_form_matrix(NormalForm(build_thai_slmf_mt(p))) == base);
  p.aggregation = RewardAggregation::Aggregate;
  CHECK(normal_form_matrix(NormalForm(build_thai_slmf_mt(p))) == base);
}

TEST_CASE("two followers") {
  auto p = small_mt(1);
  p.target_grid = {100};
  p.info_mode = ThaiInfoMode::OpenLoop;
  p.follower_types.push_back({"second", {{1.5, 0.05}}, {}, 0});
  const auto g = build_thai_slmf_mt(p);
  const auto& m = *g.model;
  // Nature: exogenous, leader type, two follower types; actions: target, x_f, x_g.
  const auto h = config_of(m, {0, 0, 0, 0, 0, 0, 1});
  const double reward = 0.5 * ((10 - 6) + (10 - 8));
  CHECK(g.data[1].objective.values[h] + g.data[2].objective.values[h] ==
        doctest::Approx(reward + (2 * 6 - 0.1 * 36) - 6 + (1.5 * 8 - 0.05 * 64) - 8));

  const NormalForm nf(g);
  std::set<PlayerProfile> oracle;
  for (std::uint64_t f = 0; f < 2; ++f)
    for (std::uint64_t s = 0; s < 2; ++s) {
      bool stable = true;
      for (std::uint64_t d = 0; d < 2; ++d) {
        stable &= nf.value(1, {0, d, s}) <= nf.value(1, {0, f, s});
        stable &= nf.value(2, {0, f, d}) <= nf.value(2, {0, f, s});
      }
      if (stable) oracle.insert({0, f, s});
    }
  const auto got = followers_nash(nf, {0, 0, 0});
  CHECK(std::set<PlayerProfile>(got.begin(), got.end()) == oracle);
}

TEST_CASE("Thai follower payoff is nonincreasing in price") {
  auto lo = thai_reference_params(), hi = thai_reference_params();
  hi.price = {1.5};
  const auto a = build_thai_slsf_st(lo), b = build_thai_slsf_st(hi);
  for (std::size_t h = 0; h < a.model->configuration().size(); ++h)
    CHECK(b.data[1].objective.values[h] <= a.data[1].objective.values[h]);
}

TEST_CASE("unclamped reward can turn negative") {
  auto p = thai_reference_params();
  p.consumption_grid = {12};
  const auto clamped = build_thai_slsf_st(p);
  p.clamp_reduction = false;
  const auto raw = build_thai_slsf_st(p);
  const auto h = config_of(*raw.model, {0, 0, 2, 0});
  CHECK(raw.data[1].objective.values[h] == doctest::Approx(clamped.data[1].objective.values[h] - 1));
}

TEST_CASE("builders reject oversized strategy spaces") {
  auto p = thai_reference_params();
  p.baseline.assign(4, 10);
  p.price.assign(4, 1);
  p.cap = 1000;
  CHECK_THROWS_AS(build_thai_slsf_mt(p), CapacityExceeded);
}
