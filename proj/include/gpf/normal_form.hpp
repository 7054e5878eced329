#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "gpf/preferences.hpp"

namespace gpf {

inline constexpr std::uint64_t kDefaultProfileCap = 1'000'000;

/// One strategy index per player. A player's strategy is the tuple of its
/// agents' strategies, ranked with the first agent most significant.
using PlayerProfile = std::vector<std::uint64_t>;

/// Normal-form value of `player` under a full agent-level profile: the
/// player's risk measure applied to ω ↦ j(S_λ(ω)).
double normal_form_value(const WGame& game, std::size_t player, const StrategyProfile& profile);

/// Memoizing evaluator of normal-form values over player-level profiles.
/// Safe to call concurrently; the cache is guarded by a mutex.
class NormalForm {
 public:
  explicit NormalForm(const WGame& game, std::uint64_t cap = kDefaultProfileCap);

  const WGame& game() const { return *game_; }
  const WModel& model() const { return *game_->model; }
  std::size_t player_count() const { return game_->player_count(); }
  std::uint64_t cap() const { return cap_; }

  std::uint64_t strategy_count(std::size_t player) const { return counts_[player]; }
  /// Product of strategy counts over `players`, or CapacityExceeded.
  std::uint64_t profile_count(const std::vector<std::size_t>& players) const;

  std::vector<Strategy> player_strategy(std::size_t player, std::uint64_t index) const;
  StrategyProfile agent_profile(const PlayerProfile& profile) const;
  std::string strategy_label(std::size_t player, std::uint64_t index) const;

  double value(std::size_t player, const PlayerProfile& profile) const;
  std::vector<double> values(const PlayerProfile& profile) const;

  /// Number of distinct profiles evaluated so far.
  std::uint64_t evaluations() const;

 private:
  const WGame* game_;
  std::uint64_t cap_;
  std::vector<std::vector<std::size_t>> agents_;           // per player
  std::vector<std::vector<std::uint64_t>> agent_counts_;   // per player, per agent
  std::vector<std::uint64_t> counts_;                      // per player
  std::vector<CompiledRisk> risks_;                        // per player
  mutable std::mutex mutex_;
  mutable std::map<PlayerProfile, std::vector<double>> memo_;
};

struct NormalFormMatrix {
  std::vector<std::string> row_labels;  // player 0 strategies
  std::vector<std::string> col_labels;  // player 1 strategies
  std::vector<std::pair<double, double>> cells;  // row-major

  std::size_t rows() const { return row_labels.size(); }
  std::size_t cols() const { return col_labels.size(); }
  const std::pair<double, double>& at(std::size_t r, std::size_t c) const {
    return cells[r * cols() + c];
  }
  friend bool operator==(const NormalFormMatrix&, const NormalFormMatrix&) = default;
};

/// Full two-player matrix in enumeration order; NotTwoPlayers otherwise.
NormalFormMatrix normal_form_matrix(const NormalForm& nf);

/// `inf`, `-inf`, or the value with up to 12 significant digits.
std::string format_extended(double v);

/// Header row holds the column strategy labels; each cell is "v1;v2".
std::string to_csv(const NormalFormMatrix& m);

}  // namespace gpf
