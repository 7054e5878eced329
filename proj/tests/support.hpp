#pragma once

// Random game generators and brute-force oracles shared by the unit and
// acceptance tests. The oracles only use the model's raw tables (factor
// sizes, atom labels) and recompute everything else directly.

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gpf/equilibria.hpp"
#include "gpf/models.hpp"

namespace gpf::testing {

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Random sequential model: agents get a hidden rank and may observe Nature
/// and the actions of lower-ranked agents only.
inline std::shared_ptr<const WModel> random_sequential_model(std::mt19937_64& rng,
                                                              std::size_t max_agents = 3,
                                                              std::size_t max_actions = 3,
                                                              std::size_t max_nature = 4) {
  std::vector<FiniteFactor> nature;
  std::size_t points = uniform(rng, 1, max_nature);
  if (points == 4 && uniform(rng, 0, 1)) {
    nature.push_back({"w1", "w1", {"a", "b"}, FactorKind::NatureExogenous});
    nature.push_back({"w2", "w2", {"a", "b"}, FactorKind::NatureType});
  } else {
    std::vector<std::string> e;
    for (std::size_t i = 0; i < points; ++i) e.push_back("w" + std::to_string(i));
    nature.push_back({"w", "w", e, FactorKind::NatureExogenous});
  }
  const std::size_t n = uniform(rng, 1, max_agents);
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::shuffle(rank.begin(), rank.end(), rng);
  std::vector<AgentId> agents;
  std::vector<FiniteFactor> actions;
  for (std::size_t a = 0; a < n; ++a) {
    agents.push_back({"p" + std::to_string(a), std::nullopt});
    std::vector<std::string> e;
    for (std::size_t k = 0, m = uniform(rng, 1, max_actions); k < m; ++k) e.push_back(std::to_string(k));
    actions.push_back({"u" + std::to_string(a), "u" + std::to_string(a), e, FactorKind::Action});
  }
  std::vector<InfoSpec> info;
  for (std::size_t a = 0; a < n; ++a) {
    CylinderInfo c;
    for (const auto& f : nature)
      if (uniform(rng, 0, 1)) c.visible.push_back(f.id);
    for (std::size_t b = 0; b < n; ++b)
      if (rank[b] < rank[a] && uniform(rng, 0, 1)) c.visible.push_back(actions[b].id);
    info.push_back(std::move(c));
  }
  return std::make_shared<const WModel>(WModel::build(nature, agents, actions, info));
}

/// Uniformly random strategy profile (one action per information atom).
inline StrategyProfile random_profile(std::mt19937_64& rng, const WModel& model) {
  StrategyProfile p;
  for (std::size_t a = 0; a < model.agent_count(); ++a) {
    Strategy s{a, std::vector<std::size_t>(model.info(a).atom_count())};
    for (auto& x : s.actions) x = uniform(rng, 0, model.action_count(a) - 1);
    p.strategies.push_back(std::move(s));
  }
  return p;
}

/// Configuration index of (ω, u) with Nature first and the last factor fastest.
inline std::size_t oracle_configuration(const WModel& model, std::size_t w,
                                        const std::vector<std::size_t>& u) {
  std::size_t tuple = 0;
  for (std::size_t a = 0; a < u.size(); ++a) tuple = tuple * model.action_count(a) + u[a];
  std::size_t tuples = 1;
  for (std::size_t a = 0; a < u.size(); ++a) tuples *= model.action_count(a);
  return w * tuples + tuple;
}

/// All action tuples u with u_a = λ_a(ω, u) for every agent, by odometer.
inline std::vector<std::vector<std::size_t>> oracle_fixed_points(const WModel& model,
                                                                 const StrategyProfile& profile,
                                                                 std::size_t w) {
  const std::size_t n = model.agent_count();
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> u(n, 0);
  while (true) {
    const std::size_t h = oracle_configuration(model, w, u);
    bool fixed = true;
    for (std::size_t a = 0; a < n && fixed; ++a)
      fixed = profile.strategies[a].actions[model.info(a).labels()[h]] == u[a];
    if (fixed) out.push_back(u);
    std::size_t a = n;
    while (a > 0) {
      --a;
      if (++u[a] < model.action_count(a)) break;
      u[a] = 0;
      if (a == 0) return out;
    }
    if (n == 0) return out;
  }
}

/// Random two-player leader-follower game on a random sequential model where
/// the leader moves first. Values are small integers so ties occur, unless
/// `distinct` asks for almost surely distinct reals.
inline WGame random_leader_follower(std::mt19937_64& rng, bool distinct = false,
                                    Sense leader_sense = Sense::Payoff) {
  const std::size_t points = std::size_t(1) << uniform(rng, 0, 2);  // dyadic masses
  std::vector<std::string> e;
  for (std::size_t i = 0; i < points; ++i) e.push_back("w" + std::to_string(i));
  std::vector<FiniteFactor> nature{{"w", "w", e, FactorKind::NatureExogenous}};
  auto labels = [](std::size_t k) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < k; ++i) v.push_back(std::to_string(i));
    return v;
  };
  std::vector<FiniteFactor> actions{{"ul", "ul", labels(uniform(rng, 1, 3)), FactorKind::Action},
                                    {"uf", "uf", labels(uniform(rng, 1, 3)), FactorKind::Action}};
  CylinderInfo leader, follower;
  if (uniform(rng, 0, 1)) leader.visible.push_back("w");
  // One observed factor at most, so strategy counts stay below 3^4.
  if (uniform(rng, 0, 2)) follower.visible.push_back("ul");
  else if (uniform(rng, 0, 1)) follower.visible.push_back("w");
  auto model = std::make_shared<const WModel>(
      WModel::build(nature, {{"leader", std::nullopt}, {"follower", std::nullopt}}, actions,
                    {leader, follower}));
  auto table = [&] {
    std::vector<double> v(model->configuration().size());
    for (auto& x : v)
      x = distinct ? std::uniform_real_distribution<double>(-10, 10)(rng)
                   : double(uniform(rng, 0, 4));
    return v;
  };
  const auto belief = Belief::uniform(model->nature());
  return make_wgame(model, partition_by_agent_player(*model),
                    {{{"leader", leader_sense, table()}, Expectation{belief}},
                     {{"follower", uniform(rng, 0, 1) ? Sense::Cost : Sense::Payoff, table()},
                      Expectation{belief}}},
                    {Role::Leader, Role::Follower});
}

/// Random game with 2–3 players (one agent each) on a random sequential
/// model, dyadic uniform beliefs, small integer values and occasional
/// adverse infinities.
inline WGame random_game(std::mt19937_64& rng) {
  const std::size_t points = std::size_t(1) << uniform(rng, 0, 2);
  std::vector<std::string> e;
  for (std::size_t i = 0; i < points; ++i) e.push_back("w" + std::to_string(i));
  std::vector<FiniteFactor> nature{{"w", "w", e, FactorKind::NatureExogenous}};
  const std::size_t n = uniform(rng, 2, 3);
  std::vector<AgentId> agents;
  std::vector<FiniteFactor> actions;
  std::vector<InfoSpec> info;
  for (std::size_t a = 0; a < n; ++a) {
    agents.push_back({"p" + std::to_string(a), std::nullopt});
    std::vector<std::string> labels;
    for (std::size_t k = 0, m = uniform(rng, 1, n == 2 ? 3 : 2); k < m; ++k)
      labels.push_back(std::to_string(k));
    actions.push_back({"u" + std::to_string(a), "u" + std::to_string(a), labels, FactorKind::Action});
    // At most one observed factor keeps every player under 3^4 strategies.
    CylinderInfo c;
    if (a > 0 && uniform(rng, 0, 2) == 0) c.visible.push_back(actions[a - 1].id);
    else if (uniform(rng, 0, 1)) c.visible.push_back("w");
    info.push_back(std::move(c));
  }
  auto model = std::make_shared<const WModel>(WModel::build(nature, agents, actions, info));
  std::vector<PlayerData> data;
  std::vector<Role> roles;
  for (std::size_t a = 0; a < n; ++a) {
    const Sense sense = uniform(rng, 0, 1) ? Sense::Cost : Sense::Payoff;
    std::vector<double> v(model->configuration().size());
    for (auto& x : v) x = uniform(rng, 0, 19) == 0 ? adverse_infinity(sense) : double(uniform(rng, 0, 4));
    data.push_back({{agents[a].player, sense, std::move(v)}, Expectation{Belief::uniform(model->nature())}});
    roles.push_back(a == 0 ? Role::Leader : Role::Follower);
  }
  return make_wgame(model, partition_by_agent_player(*model), std::move(data), std::move(roles));
}

/// Copy of `game` with player p's finite values mapped to scale·v + shift.
inline WGame rescaled(const WGame& game, std::size_t p, double scale, double shift) {
  auto data = game.data;
  for (auto& v : data[p].objective.values)
    if (std::isfinite(v)) v = scale * v + shift;
  return make_wgame(game.model, game.players, std::move(data), game.roles);
}

/// Adverse-tail mean of mass α by sorting values worst-first and averaging
/// with a fractional boundary element.
inline double oracle_cvar(std::vector<std::pair<double, double>> value_mass, double alpha,
                          Sense sense) {
  std::sort(value_mass.begin(), value_mass.end(), [&](const auto& a, const auto& b) {
    return sense == Sense::Cost ? a.first > b.first : a.first < b.first;
  });
  double left = alpha, total = 0;
  for (const auto& [v, m] : value_mass) {
    if (left <= 0) break;
    const double take = std::min(m, left);
    total += take * v;
    left -= take;
  }
  return total / alpha;
}

/// All player profiles in enumeration order (last player fastest).
inline std::vector<PlayerProfile> all_profiles(const NormalForm& nf) {
  std::vector<PlayerProfile> out;
  PlayerProfile p(nf.player_count(), 0);
  while (true) {
    out.push_back(p);
    std::size_t i = p.size();
    while (i > 0) {
      --i;
      if (++p[i] < nf.strategy_count(i)) break;
      p[i] = 0;
      if (i == 0) return out;
    }
  }
}

/// Pure Nash equilibria by checking every unilateral deviation.
inline std::set<PlayerProfile> oracle_nash(const NormalForm& nf) {
  std::set<PlayerProfile> out;
  for (const auto& p : all_profiles(nf)) {
    bool stable = true;
    for (std::size_t q = 0; q < p.size() && stable; ++q) {
      const Sense s = nf.game().data[q].objective.sense;
      const double v = nf.value(q, p);
      auto d = p;
      for (d[q] = 0; d[q] < nf.strategy_count(q) && stable; ++d[q])
        stable = !better(nf.value(q, d), v, s);
    }
    if (stable) out.insert(p);
  }
  return out;
}

}  // namespace gpf::testing
