#pragma once

// Ready-made games: the prisoner's dilemma, a discretized time-of-use
// pricing game, and the Thai demand-response program in three variants.

#include <string>
#include <vector>

#include "gpf/preferences.hpp"

namespace gpf {

/// Jail-time costs (C,C)=(1/2,1/2), (C,D)=(10,0), (D,C)=(0,10), (D,D)=(5,5).
WGame build_prisoners_dilemma();

/// A numeric Nature factor with the masses other players assign to it and
/// the element its owner actually holds.
struct NatureGrid {
  std::vector<double> values;
  std::vector<double> masses;  // empty: uniform
  std::size_t truth = 0;
};

struct TouParams {
  NatureGrid demand;         // d, kWh
  NatureGrid cost;           // leader type: unitary production cost
  NatureGrid unwillingness;  // follower type: cost of shifting off-peak
  std::vector<double> peak_prices;
  std::vector<double> offpeak_prices;
  std::vector<double> shifts;  // α, the fraction consumed at peak
};

/// d=100, cost=0.05, unwillingness=0.15, peak ∈ {0.2, 0.3}, off-peak 0.1,
/// α ∈ {0, 0.5, 1}.
TouParams tou_reference_params();

/// Leader (producer) maximizes sales minus production cost; follower
/// (consumer) minimizes bill plus inconvenience. Price pairs with
/// peak < off-peak are left out of the leader's action set.
WGame build_tou_game(const TouParams& params);

/// φ(x) = linear·x − quadratic·x².
struct QuadraticType {
  double linear = 0;
  double quadratic = 0;
  double operator()(double x) const { return linear * x - quadratic * x * x; }
};

struct TypeGrid {
  std::string name;  // owning player id
  std::vector<QuadraticType> grid;
  std::vector<double> masses;  // others' assessment; empty: uniform
  std::size_t truth = 0;
};

/// Exogenous Nature at one timestep: a scale applied to both φ functions.
struct ExogenousGrid {
  std::vector<double> scales{1.0};
  std::vector<double> masses;  // empty: uniform
};

enum class ThaiInfoMode { OpenLoop, CurrentStage, FullHistory };
enum class RewardAggregation { Aggregate, Literal };

const char* to_string(ThaiInfoMode mode);
const char* to_string(RewardAggregation mode);

struct ThaiParams {
  std::vector<double> baseline;  // B_t, one per timestep
  std::vector<double> price;     // p_t
  double reward = 0;             // r
  std::vector<double> target_grid;
  std::vector<double> consumption_grid;
  TypeGrid leader_type{"leader", {{0, 0}}, {}, 0};
  std::vector<TypeGrid> follower_types{{"follower", {{0, 0}}, {}, 0}};
  std::vector<ExogenousGrid> exogenous;  // one per timestep; empty: scale 1
  ThaiInfoMode info_mode = ThaiInfoMode::FullHistory;
  RewardAggregation aggregation = RewardAggregation::Aggregate;
  /// Effective reduction max(0, min{u, B − x}); false keeps the raw min.
  bool clamp_reduction = true;
  std::uint64_t cap = kDefaultStrategyCap;

  std::size_t horizon() const { return baseline.size(); }
};

/// B=10, p=1, r=0.5, targets {0,2,4}, consumption {6,8,10},
/// φ^f = 2x − 0.1x², φ^ℓ = 0.3x, all types known.
ThaiParams thai_reference_params();

/// Leader (cost): p·x − r·min{u, B − x} − φ^ℓ(x).
/// Follower (payoff): r·min{u, B − x} + φ^f(x) − p·x.
WGame build_thai_slsf_st(const ThaiParams& params);
/// Single follower, T timesteps, objectives additive in time.
WGame build_thai_slsf_mt(const ThaiParams& params);
/// Several followers sharing the leader's per-stage reduction target.
WGame build_thai_slmf_mt(const ThaiParams& params);

}  // namespace gpf
