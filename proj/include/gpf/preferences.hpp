#pragma once

// Players, objective tables over the configuration space, beliefs over
// Nature and the risk measures that turn a Nature-indexed table into a number.
//
// Extended reals are plain doubles with ±infinity. A Cost objective marks an
// impossible configuration with +inf, a Payoff objective with -inf.

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gpf/wmodel.hpp"

namespace gpf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Cost, Payoff };

const char* to_string(Sense sense);

/// The worst value a player can face: +inf for a cost, -inf for a payoff.
inline double adverse_infinity(Sense s) { return s == Sense::Cost ? kInf : -kInf; }
/// True iff `a` is strictly preferred to `b`.
inline bool better(double a, double b, Sense s) { return s == Sense::Cost ? a < b : a > b; }

struct PlayerPartition {
  std::vector<std::string> players;
  std::vector<std::size_t> assignment;  // agent -> player index

  /// Agents of player `p` in agent order.
  std::vector<std::size_t> agents_of(std::size_t p) const;
  std::optional<std::size_t> player_index(const std::string& id) const;
};

/// Groups agents by AgentId::player, players in first-appearance order.
PlayerPartition partition_by_agent_player(const WModel& model);

struct Objective {
  std::string player;
  Sense sense = Sense::Cost;
  std::vector<double> values;  // one per configuration point
};

/// Probability mass over Nature, as a joint vector or a product of
/// per-factor vectors.
class Belief {
 public:
  struct Joint {
    std::vector<double> masses;
  };
  struct Product {
    std::vector<std::vector<double>> factors;
  };

  static Belief joint(std::vector<double> masses);
  static Belief product(std::vector<std::vector<double>> factors);
  static Belief uniform(const ProductSpace& nature);

  bool is_joint() const { return std::holds_alternative<Joint>(value_); }
  const std::variant<Joint, Product>& value() const { return value_; }

  /// Throws InvalidArgument if the belief does not fit `nature`.
  void check(const ProductSpace& nature) const;
  double mass(const ProductSpace& nature, std::size_t nature_index) const;
  std::vector<double> masses(const ProductSpace& nature) const;

 private:
  explicit Belief(std::variant<Joint, Product> v) : value_(std::move(v)) {}
  std::variant<Joint, Product> value_;
};

/// Unit mass at `element` of a factor of size `size`.
std::vector<double> make_dirac(std::size_t size, std::size_t element);
inline std::vector<double> make_dirac(const FiniteFactor& factor, std::size_t element) {
  return make_dirac(factor.size(), element);
}
std::vector<double> uniform_masses(std::size_t size);

inline double belief_mass(const Belief& belief, const ProductSpace& nature, std::size_t w) {
  return belief.mass(nature, w);
}

struct Expectation {
  Belief belief;
};
/// Worst value over the support of `support` (all of Nature when unset).
struct WorstCase {
  std::optional<Belief> support;
};
/// Mean of the adverse tail of total mass `alpha` under `belief`.
struct CVaR {
  double alpha = 1.0;
  Belief belief;
};
using RiskMeasure = std::variant<Expectation, WorstCase, CVaR>;

std::string describe(const RiskMeasure& risk);

/// Risk of `values` (one per Nature point) weighted by `masses`. Points with
/// zero mass are ignored. `kind` selects the functional; `alpha` is only read
/// for CVaR.
enum class RiskKind { Expectation, WorstCase, CVaR };
double apply_risk_to_masses(RiskKind kind, double alpha, std::span<const double> values,
                            std::span<const double> masses, Sense sense);

double apply_risk(const RiskMeasure& risk, std::span<const double> values,
                  const ProductSpace& nature, Sense sense);

/// Precomputed form of a RiskMeasure for repeated evaluation on one Nature space.
struct CompiledRisk {
  RiskKind kind = RiskKind::Expectation;
  double alpha = 1.0;
  std::vector<double> masses;

  double operator()(std::span<const double> values, Sense sense) const {
    return apply_risk_to_masses(kind, alpha, values, masses, sense);
  }
};
CompiledRisk compile_risk(const RiskMeasure& risk, const ProductSpace& nature);

struct PlayerData {
  Objective objective;
  RiskMeasure risk;
};

enum class Role { Unspecified, Leader, Follower };
const char* to_string(Role role);

/// W-model together with players and their personal data.
struct WGame {
  std::shared_ptr<const WModel> model;
  PlayerPartition players;
  std::vector<PlayerData> data;  // indexed like players.players
  std::vector<Role> roles;       // indexed like players.players

  std::size_t player_count() const { return players.players.size(); }
  std::vector<std::size_t> players_with(Role role) const;
};

WGame make_wgame(std::shared_ptr<const WModel> model, PlayerPartition players,
                 std::vector<PlayerData> data, std::vector<Role> roles = {});

}  // namespace gpf
