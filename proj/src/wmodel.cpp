#include "gpf/wmodel.hpp"

#include <limits>
#include <random>
#include <set>

#include "gpf/errors.hpp"

namespace gpf {

std::string AgentId::name() const {
  return stage ? player + "@" + std::to_string(*stage) : player;
}

WModel WModel::build(std::vector<FiniteFactor> nature_factors, std::vector<AgentId> agents,
                     std::vector<FiniteFactor> action_factors,
                     const std::vector<InfoSpec>& info_specs) {
  if (nature_factors.empty())
    throw InvalidArgument("a W-model needs at least one Nature factor (use a singleton)");
  if (agents.size() != action_factors.size() || agents.size() != info_specs.size())
    throw InvalidArgument("dimension mismatch: " + std::to_string(agents.size()) + " agents, " +
                          std::to_string(action_factors.size()) + " action sets, " +
                          std::to_string(info_specs.size()) + " information fields");
  if (agents.empty()) throw InvalidArgument("a W-model needs at least one agent");
  std::set<std::string> names;
  for (const auto& a : agents)
    if (!names.insert(a.name()).second)
      throw InvalidArgument("duplicate agent '" + a.name() + "'");
  for (auto& f : nature_factors)
    if (!f.is_nature())
      throw InvalidArgument("Nature factor '" + f.id + "' is declared with kind action");
  for (auto& f : action_factors) f.kind = FactorKind::Action;

  WModel m;
  m.agents_ = std::move(agents);
  m.nature_ = std::make_shared<const ProductSpace>(nature_factors);
  std::vector<FiniteFactor> all = std::move(nature_factors);
  all.insert(all.end(), action_factors.begin(), action_factors.end());
  m.configuration_ = std::make_shared<const ProductSpace>(std::move(all));

  m.info_.reserve(info_specs.size());
  for (std::size_t a = 0; a < info_specs.size(); ++a) {
    const auto& spec = info_specs[a];
    if (const auto* cyl = std::get_if<CylinderInfo>(&spec)) {
      m.info_.push_back(cylinder_partition(m.configuration_, cyl->visible));
    } else {
      const auto& labels = std::get<ExplicitInfo>(spec).labels;
      if (labels.size() != m.configuration_->size())
        throw InvalidArgument("explicit information field of agent '" + m.agents_[a].name() +
                              "' labels " + std::to_string(labels.size()) +
                              " points, configuration space has " +
                              std::to_string(m.configuration_->size()));
      m.info_.emplace_back(m.configuration_, labels);
    }
  }
  for (std::size_t a = 0; a < m.agents_.size(); ++a) check_self_information(m, a, m.info_[a]);
  m.order_ = check_sequential(m);
  return m;
}

std::optional<std::size_t> WModel::agent_index(const std::string& name) const {
  for (std::size_t a = 0; a < agents_.size(); ++a)
    if (agents_[a].name() == name) return a;
  return std::nullopt;
}

void check_self_information(const WModel& model, std::size_t a, const Partition& info) {
  const auto& space = model.configuration();
  const std::size_t factor = model.action_factor_index(a);
  const std::size_t k = space.factor(factor).size();
  for (std::size_t h = 0; h < space.size(); ++h) {
    if (space.coordinate(h, factor) != 0) continue;
    for (std::size_t v = 1; v < k; ++v) {
      const std::size_t other = space.with_coordinate(h, factor, v);
      if (info.atom(h) != info.atom(other))
        throw SelfInformationViolation(model.agent(a).name(), h, other);
    }
  }
}

void validate_profile(const WModel& model, const StrategyProfile& profile) {
  if (profile.strategies.size() != model.agent_count())
    throw InvalidArgument("profile has " + std::to_string(profile.strategies.size()) +
                          " strategies, model has " + std::to_string(model.agent_count()) +
                          " agents");
  for (std::size_t a = 0; a < model.agent_count(); ++a) {
    const auto& s = profile.strategies[a];
    if (s.agent != a) throw InvalidArgument("profile strategies are not in agent order");
    if (s.actions.size() != model.info(a).atom_count())
      throw InvalidArgument("strategy of agent '" + model.agent(a).name() + "' covers " +
                            std::to_string(s.actions.size()) + " atoms, expected " +
                            std::to_string(model.info(a).atom_count()));
    for (std::size_t u : s.actions)
      if (u >= model.action_count(a))
        throw InvalidArgument("strategy of agent '" + model.agent(a).name() +
                              "' plays out-of-range action " + std::to_string(u));
  }
}

std::uint64_t count_strategies(const WModel& model, std::size_t agent, std::uint64_t cap) {
  const std::uint64_t base = model.action_count(agent);
  const std::size_t atoms = model.info(agent).atom_count();
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < atoms; ++i) {
    if (base != 0 && count > cap / base) {
      // Report the exact value when it still fits in 64 bits.
      std::uint64_t exact = count;
      bool overflow = false;
      for (std::size_t j = i; j < atoms; ++j) {
        if (exact > std::numeric_limits<std::uint64_t>::max() / base) {
          overflow = true;
          break;
        }
        exact *= base;
      }
      throw CapacityExceeded("strategy count of agent '" + model.agent(agent).name() + "'",
                             overflow ? std::numeric_limits<std::uint64_t>::max() : exact, cap);
    }
    count *= base;
  }
  if (count > cap)
    throw CapacityExceeded("strategy count of agent '" + model.agent(agent).name() + "'", count,
                           cap);
  return count;
}

Strategy strategy_at(const WModel& model, std::size_t agent, std::uint64_t index) {
  const std::uint64_t base = model.action_count(agent);
  Strategy s{agent, std::vector<std::size_t>(model.info(agent).atom_count(), 0)};
  for (std::size_t i = s.actions.size(); i-- > 0;) {
    s.actions[i] = static_cast<std::size_t>(index % base);
    index /= base;
  }
  if (index != 0) throw InvalidArgument("strategy index out of range");
  return s;
}

std::uint64_t strategy_index(const WModel& model, const Strategy& strategy) {
  const std::uint64_t base = model.action_count(strategy.agent);
  std::uint64_t index = 0;
  for (std::size_t u : strategy.actions) index = index * base + u;
  return index;
}

StrategyRange::StrategyRange(const WModel& model, std::size_t agent, std::uint64_t cap)
    : model_(&model), agent_(agent), count_(count_strategies(model, agent, cap)) {}

StrategyRange::iterator StrategyRange::begin() const {
  return iterator(model_, 0, strategy_at(*model_, agent_, 0));
}

StrategyRange::iterator StrategyRange::end() const { return iterator(model_, count_, Strategy{}); }

StrategyRange::iterator& StrategyRange::iterator::operator++() {
  ++index_;
  // Odometer increment, last atom fastest.
  const std::size_t base = model_->action_count(current_.agent);
  for (std::size_t i = current_.actions.size(); i-- > 0;) {
    if (++current_.actions[i] < base) return *this;
    current_.actions[i] = 0;
  }
  return *this;
}

std::optional<std::vector<std::size_t>> check_sequential(const WModel& model) {
  std::vector<std::size_t> known;
  for (std::size_t f = 0; f < model.nature_factor_count(); ++f) known.push_back(f);
  std::vector<bool> placed(model.agent_count(), false);
  std::vector<std::size_t> order;
  while (order.size() < model.agent_count()) {
    const Partition observed = cylinder_partition_by_index(model.configuration_ptr(), known);
    bool progressed = false;
    for (std::size_t a = 0; a < model.agent_count(); ++a) {
      if (placed[a] || !refines(observed, model.info(a))) continue;
      placed[a] = true;
      order.push_back(a);
      known.push_back(model.action_factor_index(a));
      progressed = true;
      break;
    }
    if (!progressed) return std::nullopt;
  }
  return order;
}

std::vector<std::vector<std::size_t>> closed_loop_solutions(const WModel& model,
                                                            const StrategyProfile& profile,
                                                            std::size_t nature_index) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t t = 0; t < model.action_tuple_count(); ++t) {
    const std::size_t h = model.configuration_index(nature_index, t);
    bool fixed = true;
    for (std::size_t a = 0; a < model.agent_count() && fixed; ++a)
      fixed = profile.strategies[a].act(model, h) == model.action_of(h, a);
    if (!fixed) continue;
    std::vector<std::size_t> u(model.agent_count());
    for (std::size_t a = 0; a < u.size(); ++a) u[a] = model.action_of(h, a);
    out.push_back(std::move(u));
  }
  return out;
}

namespace {

void check_profile_at(const WModel& model, const StrategyProfile& profile,
                      PlayabilityReport& report) {
  ++report.profiles_checked;
  for (std::size_t w = 0; w < model.nature().size(); ++w) {
    auto sols = closed_loop_solutions(model, profile, w);
    if (sols.size() == 1) continue;
    report.playable = false;
    ++report.failures;
    if (report.witnesses.size() < PlayabilityReport::kMaxWitnesses) {
      PlayabilityWitness wit;
      wit.profile = profile;
      wit.nature_index = w;
      wit.solutions = std::move(sols);
      report.witnesses.push_back(std::move(wit));
    }
  }
}

}  // namespace

PlayabilityReport check_playability(const WModel& model, const PlayabilityMode& mode,
                                    std::uint64_t cap) {
  PlayabilityReport report;
  if (std::holds_alternative<PlayabilityMode::All>(mode.value)) {
    report.mode = "all";
    if (model.sequential_order()) {
      report.sequential_order = model.sequential_order();
      return report;
    }
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 1;
    for (std::size_t a = 0; a < model.agent_count(); ++a) {
      counts.push_back(count_strategies(model, a, cap));
      if (total > cap / counts.back())
        throw CapacityExceeded("strategy profile count", std::numeric_limits<std::uint64_t>::max(),
                               cap);
      total *= counts.back();
    }
    if (total > cap) throw CapacityExceeded("strategy profile count", total, cap);
    for (std::uint64_t k = 0; k < total; ++k) {
      StrategyProfile profile;
      std::uint64_t rest = k;
      profile.strategies.resize(model.agent_count());
      for (std::size_t a = model.agent_count(); a-- > 0;) {
        profile.strategies[a] = strategy_at(model, a, rest % counts[a]);
        rest /= counts[a];
      }
      check_profile_at(model, profile, report);
    }
  } else if (const auto* sample = std::get_if<PlayabilityMode::Sample>(&mode.value)) {
    report.mode = "sample";
    std::mt19937_64 rng(sample->seed);
    for (std::uint64_t k = 0; k < sample->count; ++k) {
      StrategyProfile profile;
      for (std::size_t a = 0; a < model.agent_count(); ++a) {
        Strategy s{a, std::vector<std::size_t>(model.info(a).atom_count())};
        std::uniform_int_distribution<std::size_t> pick(0, model.action_count(a) - 1);
        for (auto& u : s.actions) u = pick(rng);
        profile.strategies.push_back(std::move(s));
      }
      check_profile_at(model, profile, report);
    }
  } else {
    report.mode = "explicit";
    for (const auto& profile : std::get<PlayabilityMode::Explicit>(mode.value).profiles) {
      validate_profile(model, profile);
      check_profile_at(model, profile, report);
    }
  }
  return report;
}

std::vector<std::size_t> solution_map_by_enumeration(const WModel& model,
                                                     const StrategyProfile& profile) {
  validate_profile(model, profile);
  std::vector<std::size_t> out(model.nature().size());
  for (std::size_t w = 0; w < out.size(); ++w) {
    std::size_t found = 0;
    for (std::size_t t = 0; t < model.action_tuple_count(); ++t) {
      const std::size_t h = model.configuration_index(w, t);
      bool fixed = true;
      for (std::size_t a = 0; a < model.agent_count() && fixed; ++a)
        fixed = profile.strategies[a].act(model, h) == model.action_of(h, a);
      if (fixed) {
        out[w] = h;
        ++found;
      }
    }
    if (found != 1) throw NotPlayable(w, found);
  }
  return out;
}

std::vector<std::size_t> solution_map(const WModel& model, const StrategyProfile& profile) {
  const auto& order = model.sequential_order();
  if (!order) return solution_map_by_enumeration(model, profile);
  validate_profile(model, profile);
  const auto& space = model.configuration();
  std::vector<std::size_t> out(model.nature().size());
  for (std::size_t w = 0; w < out.size(); ++w) {
    // Unplayed actions sit at 0; each agent's atom ignores them.
    std::size_t h = model.configuration_index(w, 0);
    for (std::size_t a : *order)
      h = space.with_coordinate(h, model.action_factor_index(a), profile.strategies[a].act(model, h));
    out[w] = h;
  }
  return out;
}

}  // namespace gpf
