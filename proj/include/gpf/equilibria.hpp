#pragma once

// Best responses, Nash equilibria, and leader-follower (Stackelberg)
// solution concepts, all by exhaustive enumeration over pure strategies.
// Results come out in enumeration order.

#include <optional>
#include <string>
#include <vector>

#include "gpf/normal_form.hpp"

namespace gpf {

struct BestResponseSet {
  std::size_t player = 0;
  PlayerProfile context;                // the player's own entry is ignored
  std::vector<std::uint64_t> strategies;  // ascending enumeration index
  double value = 0;
  bool all_adverse = false;  // every strategy evaluates to the adverse infinity
};

BestResponseSet best_responses(const NormalForm& nf, std::size_t player,
                               const PlayerProfile& context);

/// How a leader resolves ties in the followers' best-response set.
struct StackelbergMode {
  enum class Kind { Optimistic, Pessimistic, Theta, LeaderRisk };
  Kind kind = Kind::Optimistic;
  double theta = 1.0;                          // Theta only
  RiskKind risk = RiskKind::Expectation;       // LeaderRisk only, uniform over the set
  double alpha = 1.0;                          // LeaderRisk with CVaR

  static StackelbergMode optimistic() { return {}; }
  static StackelbergMode pessimistic() { return {Kind::Pessimistic}; }
  static StackelbergMode with_theta(double theta);
  static StackelbergMode leader_risk(RiskKind risk, double alpha = 1.0);

  std::string describe() const;
};

struct EquilibriumReport {
  enum class Kind { Nash, NashStackelberg };
  Kind kind = Kind::Nash;
  std::vector<PlayerProfile> profiles;
  std::vector<std::vector<double>> values;  // per profile, per player
  std::optional<StackelbergMode> mode;

  std::uint64_t profiles_enumerated = 0;
  /// Reported profiles where some player has more than one best response.
  std::uint64_t ties = 0;
  /// Players whose best-response set was entirely adverse-infinite somewhere.
  std::vector<std::size_t> all_adverse_players;
  /// Leader profiles excluded because the followers had no best response.
  std::vector<PlayerProfile> infeasible_leader_profiles;
};

EquilibriumReport nash_equilibria(const NormalForm& nf);

/// Leaders and followers declared by role; throws InvalidArgument when a
/// player has no role or no follower exists.
struct LeaderFollowerSplit {
  std::vector<std::size_t> leaders;
  std::vector<std::size_t> followers;
};
LeaderFollowerSplit leader_follower_split(const WGame& game);

/// Full profiles (leader entries copied from `profile`) in which every
/// follower best-responds to the other followers and the fixed leaders.
std::vector<PlayerProfile> followers_nash(const NormalForm& nf, const PlayerProfile& profile);

/// Value the leader anticipates at the leader entries of `profile`.
/// Throws EmptyFollowerResponse when the followers have no best response.
double leader_value(const NormalForm& nf, std::size_t leader, const PlayerProfile& profile,
                    const StackelbergMode& mode);
/// Same, from a precomputed follower response set.
double leader_value(const NormalForm& nf, std::size_t leader,
                    const std::vector<PlayerProfile>& responses, const StackelbergMode& mode);

struct StackelbergResult {
  std::vector<PlayerProfile> leader_profiles;  // follower entries are 0
  std::vector<std::vector<double>> leader_values;  // per profile, per leader (split order)
  std::vector<PlayerProfile> infeasible;
  std::uint64_t leader_profiles_enumerated = 0;
};

/// Leader profiles where each leader maximizes (payoff) or minimizes (cost)
/// her anticipated value given the other leaders.
StackelbergResult stackelberg_strategies(const NormalForm& nf, const StackelbergMode& mode);

EquilibriumReport nash_stackelberg(const NormalForm& nf, const StackelbergMode& mode);

}  // namespace gpf
