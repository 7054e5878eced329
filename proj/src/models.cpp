#include "gpf/models.hpp"

#include <algorithm>
#include <limits>

#include "gpf/errors.hpp"
#include "gpf/normal_form.hpp"

namespace gpf {

WGame build_prisoners_dilemma() {
  std::vector<FiniteFactor> nature{{"omega", "Nature", {"*"}, FactorKind::NatureExogenous}};
  std::vector<AgentId> agents{{"row", std::nullopt}, {"col", std::nullopt}};
  std::vector<FiniteFactor> actions{{"u_row", "row prisoner", {"C", "D"}, FactorKind::Action},
                                    {"u_col", "column prisoner", {"C", "D"}, FactorKind::Action}};
  auto model = std::make_shared<const WModel>(
      WModel::build(nature, agents, actions, {CylinderInfo{}, CylinderInfo{}}));
  // Configurations enumerate (u_row, u_col) as CC, CD, DC, DD.
  const std::vector<double> row{0.5, 10, 0, 5};
  const std::vector<double> col{0.5, 0, 10, 5};
  const auto belief = Belief::product({{1.0}});
  return make_wgame(model, partition_by_agent_player(*model),
                    {{{"row", Sense::Cost, row}, Expectation{belief}},
                     {{"col", Sense::Cost, col}, Expectation{belief}}});
}

namespace {

std::vector<std::string> value_labels(const std::vector<double>& values, const std::string& what) {
  if (values.empty()) throw InvalidArgument(what + " grid is empty");
  std::vector<std::string> out;
  for (double v : values) out.push_back(format_extended(v));
  return out;
}

std::vector<double> masses_or_uniform(const std::vector<double>& masses, std::size_t size,
                                      const std::string& what) {
  if (masses.empty()) return uniform_masses(size);
  if (masses.size() != size)
    throw InvalidArgument(what + " has " + std::to_string(masses.size()) + " masses for " +
                          std::to_string(size) + " values");
  return masses;
}

void check_truth(std::size_t truth, std::size_t size, const std::string& what) {
  if (truth >= size)
    throw InvalidArgument(what + " truth index " + std::to_string(truth) + " out of range");
}

void check_strategy_counts(const WGame& game, std::uint64_t cap) {
  // NormalForm construction checks every player's count against the cap.
  NormalForm probe(game, cap);
  (void)probe;
}

}  // namespace

TouParams tou_reference_params() {
  TouParams p;
  p.demand = {{100.0}, {}, 0};
  p.cost = {{0.05}, {}, 0};
  p.unwillingness = {{0.15}, {}, 0};
  p.peak_prices = {0.2, 0.3};
  p.offpeak_prices = {0.1};
  p.shifts = {0.0, 0.5, 1.0};
  return p;
}

WGame build_tou_game(const TouParams& params) {
  for (double a : params.shifts)
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("shift α must lie in [0, 1]");
  check_truth(params.demand.truth, params.demand.values.size(), "demand");
  check_truth(params.cost.truth, params.cost.values.size(), "cost");
  check_truth(params.unwillingness.truth, params.unwillingness.values.size(), "unwillingness");

  std::vector<FiniteFactor> nature{
      {"demand", "exogenous demand d", value_labels(params.demand.values, "demand"),
       FactorKind::NatureExogenous},
      {"cost", "leader type: unitary production cost", value_labels(params.cost.values, "cost"),
       FactorKind::NatureType},
      {"unwillingness", "follower type: unwillingness to shift",
       value_labels(params.unwillingness.values, "unwillingness"), FactorKind::NatureType}};

  std::vector<std::pair<double, double>> prices;
  for (double peak : params.peak_prices)
    for (double off : params.offpeak_prices)
      if (peak >= off) prices.emplace_back(peak, off);
  if (prices.empty()) throw InvalidArgument("no price pair satisfies peak >= off-peak");
  std::vector<std::string> price_labels;
  for (auto [peak, off] : prices)
    price_labels.push_back(format_extended(peak) + "/" + format_extended(off));

  std::vector<FiniteFactor> actions{
      {"prices", "peak/off-peak prices", price_labels, FactorKind::Action},
      {"shift", "fraction consumed at peak", value_labels(params.shifts, "shift"),
       FactorKind::Action}};
  std::vector<AgentId> agents{{"leader", std::nullopt}, {"follower", std::nullopt}};
  std::vector<InfoSpec> info{CylinderInfo{{"cost"}},
                             CylinderInfo{{"demand", "unwillingness", "prices"}}};
  auto model = std::make_shared<const WModel>(WModel::build(nature, agents, actions, info));

  const auto& space = model->configuration();
  std::vector<double> leader(space.size()), follower(space.size());
  for (std::size_t h = 0; h < space.size(); ++h) {
    const double d = params.demand.values[space.coordinate(h, 0)];
    const double c = params.cost.values[space.coordinate(h, 1)];
    const double w = params.unwillingness.values[space.coordinate(h, 2)];
    const auto [peak, off] = prices[space.coordinate(h, 3)];
    const double alpha = params.shifts[space.coordinate(h, 4)];
    const double bill = d * alpha * peak + d * (1 - alpha) * off;
    leader[h] = bill - d * c;
    follower[h] = bill + d * (1 - alpha) * w;
  }

  const auto demand_m = masses_or_uniform(params.demand.masses, params.demand.values.size(), "demand");
  const auto cost_m = masses_or_uniform(params.cost.masses, params.cost.values.size(), "cost");
  const auto unw_m = masses_or_uniform(params.unwillingness.masses,
                                       params.unwillingness.values.size(), "unwillingness");
  const auto leader_belief =
      Belief::product({demand_m, make_dirac(cost_m.size(), params.cost.truth), unw_m});
  const auto follower_belief =
      Belief::product({make_dirac(demand_m.size(), params.demand.truth), cost_m,
                       make_dirac(unw_m.size(), params.unwillingness.truth)});
  return make_wgame(model, partition_by_agent_player(*model),
                    {{{"leader", Sense::Payoff, std::move(leader)}, Expectation{leader_belief}},
                     {{"follower", Sense::Cost, std::move(follower)}, Expectation{follower_belief}}},
                    {Role::Leader, Role::Follower});
}

const char* to_string(ThaiInfoMode mode) {
  switch (mode) {
    case ThaiInfoMode::OpenLoop:
      return "open-loop";
    case ThaiInfoMode::CurrentStage:
      return "current-stage";
    case ThaiInfoMode::FullHistory:
      return "full-history";
  }
  return "?";
}

const char* to_string(RewardAggregation mode) {
  return mode == RewardAggregation::Aggregate ? "aggregate" : "literal";
}

ThaiParams thai_reference_params() {
  ThaiParams p;
  p.baseline = {10.0};
  p.price = {1.0};
  p.reward = 0.5;
  p.target_grid = {0.0, 2.0, 4.0};
  p.consumption_grid = {6.0, 8.0, 10.0};
  p.leader_type = {"leader", {{0.3, 0.0}}, {}, 0};
  p.follower_types = {{"follower", {{2.0, 0.1}}, {}, 0}};
  return p;
}

namespace {

void validate_thai(const ThaiParams& p) {
  const std::size_t T = p.horizon();
  if (T == 0) throw InvalidArgument("Thai model needs at least one timestep");
  if (p.price.size() != T)
    throw InvalidArgument("price has " + std::to_string(p.price.size()) + " entries for " +
                          std::to_string(T) + " timesteps");
  if (!p.exogenous.empty() && p.exogenous.size() != T)
    throw InvalidArgument("exogenous grids given for " + std::to_string(p.exogenous.size()) +
                          " of " + std::to_string(T) + " timesteps");
  if (p.reward < 0) throw InvalidArgument("unitary reward r must be >= 0");
  for (double b : p.baseline)
    if (b < 0) throw InvalidArgument("baseline B_t must be >= 0");
  for (double q : p.price)
    if (q < 0) throw InvalidArgument("price p_t must be >= 0");
  if (p.target_grid.empty()) throw InvalidArgument("target grid is empty");
  if (p.consumption_grid.empty()) throw InvalidArgument("consumption grid is empty");
  if (p.follower_types.empty()) throw InvalidArgument("Thai model needs at least one follower");
  auto check_type = [](const TypeGrid& t) {
    if (t.grid.empty()) throw InvalidArgument("type grid of '" + t.name + "' is empty");
    for (const auto& q : t.grid)
      if (q.quadratic < 0)
        throw InvalidArgument("type grid of '" + t.name + "' has a negative quadratic coefficient");
    check_truth(t.truth, t.grid.size(), "type of '" + t.name + "'");
  };
  check_type(p.leader_type);
  for (const auto& f : p.follower_types) {
    check_type(f);
    if (f.name == p.leader_type.name) throw InvalidArgument("follower named like the leader");
  }
}

std::vector<std::string> type_labels(const TypeGrid& t) {
  std::vector<std::string> out;
  for (const auto& q : t.grid)
    out.push_back("(" + format_extended(q.linear) + "," + format_extended(q.quadratic) + ")");
  return out;
}

// Shared by all three Thai builders. `staged` names agents (player, t);
// `with_exogenous` adds one exogenous factor per timestep.
WGame build_thai(const ThaiParams& p, bool staged, bool with_exogenous) {
  validate_thai(p);
  const std::size_t T = p.horizon();
  const std::size_t F = p.follower_types.size();

  std::vector<FiniteFactor> nature;
  std::vector<std::size_t> exo_factor(T, 0);
  std::vector<ExogenousGrid> exo(T);
  if (with_exogenous) {
    for (std::size_t t = 0; t < T; ++t) {
      if (!p.exogenous.empty()) exo[t] = p.exogenous[t];
      exo_factor[t] = nature.size();
      nature.push_back({"exogenous@" + std::to_string(t + 1), "exogenous scale",
                        value_labels(exo[t].scales, "exogenous scale"),
                        FactorKind::NatureExogenous});
    }
  }
  const std::size_t leader_type = nature.size();
  nature.push_back({"type:" + p.leader_type.name, "leader type (production cost)",
                    type_labels(p.leader_type), FactorKind::NatureType});
  std::vector<std::size_t> follower_type(F);
  for (std::size_t f = 0; f < F; ++f) {
    follower_type[f] = nature.size();
    nature.push_back({"type:" + p.follower_types[f].name, "follower type (utility)",
                      type_labels(p.follower_types[f]), FactorKind::NatureType});
  }

  auto target_id = [&](std::size_t t) {
    return staged ? "target@" + std::to_string(t + 1) : std::string("target");
  };
  auto consumption_id = [&](std::size_t f, std::size_t t) {
    std::string id = "consumption:" + p.follower_types[f].name;
    return staged ? id + "@" + std::to_string(t + 1) : id;
  };
  auto stage = [&](std::size_t t) { return staged ? std::optional<int>(int(t + 1)) : std::nullopt; };

  std::vector<AgentId> agents;
  std::vector<FiniteFactor> actions;
  std::vector<InfoSpec> info;
  const auto targets = value_labels(p.target_grid, "target");
  const auto consumptions = value_labels(p.consumption_grid, "consumption");
  for (std::size_t t = 0; t < T; ++t) {
    auto history = [&](bool with_current_target) {
      std::vector<std::string> v;
      if (with_exogenous)
        for (std::size_t s = 0; s < t; ++s) v.push_back(nature[exo_factor[s]].id);
      for (std::size_t s = 0; s < t + (with_current_target ? 1 : 0); ++s) v.push_back(target_id(s));
      for (std::size_t s = 0; s < t; ++s)
        for (std::size_t g = 0; g < F; ++g) v.push_back(consumption_id(g, s));
      return v;
    };

    agents.push_back({p.leader_type.name, stage(t)});
    actions.push_back({target_id(t), "target reduction", targets, FactorKind::Action});
    CylinderInfo leader_info;
    switch (p.info_mode) {
      case ThaiInfoMode::OpenLoop:
        break;
      case ThaiInfoMode::CurrentStage:
        leader_info.visible = {nature[leader_type].id};
        break;
      case ThaiInfoMode::FullHistory:
        leader_info.visible = history(false);
        leader_info.visible.push_back(nature[leader_type].id);
        break;
    }
    info.push_back(leader_info);

    for (std::size_t f = 0; f < F; ++f) {
      agents.push_back({p.follower_types[f].name, stage(t)});
      actions.push_back({consumption_id(f, t), "consumption", consumptions, FactorKind::Action});
      CylinderInfo follower_info;
      switch (p.info_mode) {
        case ThaiInfoMode::OpenLoop:
          break;
        case ThaiInfoMode::CurrentStage:
          follower_info.visible = {nature[follower_type[f]].id, target_id(t)};
          break;
        case ThaiInfoMode::FullHistory:
          follower_info.visible = history(true);
          follower_info.visible.push_back(nature[follower_type[f]].id);
          break;
      }
      info.push_back(follower_info);
    }
  }
  auto model = std::make_shared<const WModel>(WModel::build(nature, agents, actions, info));

  // Agent order per stage: leader, then followers.
  auto target_factor = [&](std::size_t t) { return model->action_factor_index(t * (F + 1)); };
  auto consumption_factor = [&](std::size_t f, std::size_t t) {
    return model->action_factor_index(t * (F + 1) + 1 + f);
  };
  auto effective = [&](double target, double reduction) {
    const double r = std::min(target, reduction);
    return p.clamp_reduction ? std::max(0.0, r) : r;
  };

  const auto& space = model->configuration();
  std::vector<double> leader(space.size());
  std::vector<std::vector<double>> follower(F, std::vector<double>(space.size()));
  std::vector<double> x(F), red(F), weight(F);
  for (std::size_t h = 0; h < space.size(); ++h) {
    const auto& phi_l = p.leader_type.grid[space.coordinate(h, leader_type)];
    double leader_total = 0;
    std::vector<double> follower_total(F, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
      const double scale = with_exogenous ? exo[t].scales[space.coordinate(h, exo_factor[t])] : 1.0;
      const double u = p.target_grid[space.coordinate(h, target_factor(t))];
      double consumed = 0, reduced = 0;
      for (std::size_t f = 0; f < F; ++f) {
        x[f] = p.consumption_grid[space.coordinate(h, consumption_factor(f, t))];
        red[f] = p.baseline[t] - x[f];
        consumed += x[f];
        reduced += red[f];
      }
      if (p.aggregation == RewardAggregation::Aggregate) {
        const double paid = effective(u, reduced);
        double denom = 0;
        for (std::size_t f = 0; f < F; ++f) {
          weight[f] = p.clamp_reduction ? std::max(0.0, red[f]) : red[f];
          denom += weight[f];
        }
        leader_total += p.price[t] * consumed - p.reward * paid - scale * phi_l(consumed);
        for (std::size_t f = 0; f < F; ++f) {
          const double share = denom != 0 ? weight[f] / denom : 0.0;
          const auto& phi_f = p.follower_types[f].grid[space.coordinate(h, follower_type[f])];
          follower_total[f] += p.reward * paid * share + scale * phi_f(x[f]) - p.price[t] * x[f];
        }
      } else {
        double paid = 0, production = 0;
        for (std::size_t f = 0; f < F; ++f) {
          paid += effective(u, red[f]);
          production += phi_l(x[f]);
        }
        leader_total += p.price[t] * consumed - p.reward * paid - scale * production;
        for (std::size_t f = 0; f < F; ++f) {
          const auto& phi_f = p.follower_types[f].grid[space.coordinate(h, follower_type[f])];
          follower_total[f] +=
              p.reward * effective(u, red[f]) + scale * phi_f(x[f]) - p.price[t] * x[f];
        }
      }
    }
    leader[h] = leader_total;
    for (std::size_t f = 0; f < F; ++f) follower[f][h] = follower_total[f];
  }

  // Everyone knows their own type; others are assessed with the grid masses.
  std::vector<std::vector<double>> shared;
  for (std::size_t t = 0; t < T && with_exogenous; ++t)
    shared.push_back(masses_or_uniform(exo[t].masses, exo[t].scales.size(), "exogenous grid"));
  shared.push_back(masses_or_uniform(p.leader_type.masses, p.leader_type.grid.size(),
                                     "type grid of '" + p.leader_type.name + "'"));
  for (const auto& f : p.follower_types)
    shared.push_back(masses_or_uniform(f.masses, f.grid.size(), "type grid of '" + f.name + "'"));

  auto belief_knowing = [&](std::size_t factor, std::size_t truth) {
    auto v = shared;
    v[factor] = make_dirac(v[factor].size(), truth);
    return Belief::product(std::move(v));
  };

  const auto players = partition_by_agent_player(*model);
  std::vector<PlayerData> data;
  std::vector<Role> roles;
  for (std::size_t q = 0; q < players.players.size(); ++q) {
    const auto& id = players.players[q];
    if (id == p.leader_type.name) {
      data.push_back({{id, Sense::Cost, leader},
                      Expectation{belief_knowing(leader_type, p.leader_type.truth)}});
      roles.push_back(Role::Leader);
      continue;
    }
    for (std::size_t f = 0; f < F; ++f) {
      if (p.follower_types[f].name != id) continue;
      data.push_back({{id, Sense::Payoff, follower[f]},
                      Expectation{belief_knowing(follower_type[f], p.follower_types[f].truth)}});
      roles.push_back(Role::Follower);
    }
  }
  auto game = make_wgame(model, players, std::move(data), std::move(roles));
  check_strategy_counts(game, p.cap);
  return game;
}

}  // namespace

WGame build_thai_slsf_st(const ThaiParams& params) {
  if (params.horizon() != 1) throw InvalidArgument("single-timestep model needs exactly one timestep");
  if (params.follower_types.size() != 1)
    throw InvalidArgument("single-follower model needs exactly one follower");
  return build_thai(params, false, false);
}

WGame build_thai_slsf_mt(const ThaiParams& params) {
  if (params.follower_types.size() != 1)
    throw InvalidArgument("single-follower model needs exactly one follower");
  return build_thai(params, true, true);
}

WGame build_thai_slmf_mt(const ThaiParams& params) { return build_thai(params, true, true); }

}  // namespace gpf
