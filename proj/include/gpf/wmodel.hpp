#pragma once

// Witsenhausen intrinsic model: agents, Nature, action sets, information
// fields, pure strategies, playability and the solution map.

#include <cstdint>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gpf/finite_structures.hpp"

namespace gpf {

inline constexpr std::uint64_t kDefaultStrategyCap = 10'000'000;

struct AgentId {
  std::string player;
  std::optional<int> stage;

  /// "player" or "player@stage".
  std::string name() const;
  friend bool operator==(const AgentId&, const AgentId&) = default;
};

/// Information spec: either the ids of the factors the agent observes, or an
/// explicit atom label per configuration point.
struct CylinderInfo {
  std::vector<std::string> visible;
};
struct ExplicitInfo {
  std::vector<std::size_t> labels;
};
using InfoSpec = std::variant<CylinderInfo, ExplicitInfo>;

class WModel {
 public:
  /// Validates dimensions and absence of self-information.
  static WModel build(std::vector<FiniteFactor> nature_factors, std::vector<AgentId> agents,
                      std::vector<FiniteFactor> action_factors,
                      const std::vector<InfoSpec>& info_specs);

  std::size_t agent_count() const { return agents_.size(); }
  const std::vector<AgentId>& agents() const { return agents_; }
  const AgentId& agent(std::size_t a) const { return agents_[a]; }
  std::optional<std::size_t> agent_index(const std::string& name) const;

  std::size_t nature_factor_count() const { return nature_->factor_count(); }
  const ProductSpace& nature() const { return *nature_; }
  const ProductSpace& configuration() const { return *configuration_; }
  const std::shared_ptr<const ProductSpace>& configuration_ptr() const { return configuration_; }
  const std::shared_ptr<const ProductSpace>& nature_ptr() const { return nature_; }

  /// Configuration-space factor index of agent `a`'s action.
  std::size_t action_factor_index(std::size_t a) const { return nature_->factor_count() + a; }
  const FiniteFactor& action_factor(std::size_t a) const {
    return configuration_->factor(action_factor_index(a));
  }
  std::size_t action_count(std::size_t a) const { return action_factor(a).size(); }
  /// Number of joint action tuples, ∏ |U_a|.
  std::size_t action_tuple_count() const { return configuration_->size() / nature_->size(); }

  const Partition& info(std::size_t a) const { return info_[a]; }

  /// Configuration index of (ω, u) where `action_tuple` indexes ∏ U_a.
  std::size_t configuration_index(std::size_t nature_index, std::size_t action_tuple) const {
    return nature_index * action_tuple_count() + action_tuple;
  }
  std::size_t nature_index_of(std::size_t config) const { return config / action_tuple_count(); }
  std::size_t action_of(std::size_t config, std::size_t a) const {
    return configuration_->coordinate(config, action_factor_index(a));
  }

  /// Sequential agent ordering computed at build time, if one exists.
  const std::optional<std::vector<std::size_t>>& sequential_order() const { return order_; }

 private:
  WModel() = default;
  std::vector<AgentId> agents_;
  std::shared_ptr<const ProductSpace> nature_;
  std::shared_ptr<const ProductSpace> configuration_;
  std::vector<Partition> info_;
  std::optional<std::vector<std::size_t>> order_;
};

/// Throws SelfInformationViolation when `info` separates two configurations
/// that differ only in the action of agent `a`.
void check_self_information(const WModel& model, std::size_t a, const Partition& info);

/// A pure strategy stored per information atom, so it is measurable by
/// construction.
struct Strategy {
  std::size_t agent = 0;
  std::vector<std::size_t> actions;  // indexed by atom id of info(agent)

  std::size_t act(const WModel& model, std::size_t config) const {
    return actions[model.info(agent).atom(config)];
  }
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct StrategyProfile {
  std::vector<Strategy> strategies;  // one per agent, in agent order
  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

void validate_profile(const WModel& model, const StrategyProfile& profile);

/// |U_a|^atoms, or CapacityExceeded when it exceeds `cap`.
std::uint64_t count_strategies(const WModel& model, std::size_t agent,
                               std::uint64_t cap = kDefaultStrategyCap);

/// The strategy with lexicographic rank `index` (first atom most significant).
Strategy strategy_at(const WModel& model, std::size_t agent, std::uint64_t index);
std::uint64_t strategy_index(const WModel& model, const Strategy& strategy);

/// Forward range over every strategy of an agent in lexicographic order.
class StrategyRange {
 public:
  class iterator {
   public:
    using value_type = Strategy;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;
    using reference = const Strategy&;
    using pointer = const Strategy*;

    iterator() = default;
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

   private:
    friend class StrategyRange;
    iterator(const WModel* model, std::uint64_t index, Strategy s)
        : model_(model), index_(index), current_(std::move(s)) {}
    const WModel* model_ = nullptr;
    std::uint64_t index_ = 0;
    Strategy current_;
  };

  StrategyRange(const WModel& model, std::size_t agent, std::uint64_t cap = kDefaultStrategyCap);
  iterator begin() const;
  iterator end() const;
  std::uint64_t size() const { return count_; }

 private:
  const WModel* model_;
  std::size_t agent_;
  std::uint64_t count_;
};

inline StrategyRange enumerate_strategies(const WModel& model, std::size_t agent,
                                          std::uint64_t cap = kDefaultStrategyCap) {
  return StrategyRange(model, agent, cap);
}

/// Greedy sequential ordering: each agent's information is measurable with
/// respect to Nature and the actions of the agents placed before it.
std::optional<std::vector<std::size_t>> check_sequential(const WModel& model);

struct PlayabilityMode {
  struct All {};
  struct Sample {
    std::uint64_t count = 0;
    std::uint64_t seed = 0;
  };
  struct Explicit {
    std::vector<StrategyProfile> profiles;
  };
  std::variant<All, Sample, Explicit> value = All{};
};

struct PlayabilityWitness {
  StrategyProfile profile;
  std::size_t nature_index = 0;
  std::vector<std::vector<std::size_t>> solutions;  // action tuples solving u = λ(ω,u)
};

struct PlayabilityReport {
  bool playable = true;
  std::string mode;                                       // "all", "sample", "explicit"
  std::optional<std::vector<std::size_t>> sequential_order;  // set when the fast path decided
  std::uint64_t profiles_checked = 0;
  std::uint64_t failures = 0;                // (profile, ω) pairs that failed
  std::vector<PlayabilityWitness> witnesses;  // first kMaxWitnesses failures

  static constexpr std::size_t kMaxWitnesses = 32;
};

PlayabilityReport check_playability(const WModel& model, const PlayabilityMode& mode,
                                    std::uint64_t cap = kDefaultStrategyCap);

/// Action tuples solving u = λ(ω, u), by exhaustive enumeration.
std::vector<std::vector<std::size_t>> closed_loop_solutions(const WModel& model,
                                                            const StrategyProfile& profile,
                                                            std::size_t nature_index);

/// Configuration index reached from each Nature point. Uses forward
/// substitution along the sequential order when one exists.
std::vector<std::size_t> solution_map(const WModel& model, const StrategyProfile& profile);
/// Same result by exhaustive fixed-point search at every Nature point.
std::vector<std::size_t> solution_map_by_enumeration(const WModel& model,
                                                     const StrategyProfile& profile);

}  // namespace gpf
