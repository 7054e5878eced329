#include "gpf/normal_form.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "gpf/errors.hpp"

namespace gpf {

namespace {

std::vector<double> nature_table(const WGame& game, std::size_t player,
                                 const std::vector<std::size_t>& outcome) {
  const auto& j = game.data[player].objective.values;
  std::vector<double> table(outcome.size());
  for (std::size_t w = 0; w < outcome.size(); ++w) table[w] = j[outcome[w]];
  return table;
}

std::uint64_t checked_product(const std::vector<std::uint64_t>& factors, std::uint64_t cap,
                              const std::string& what) {
  std::uint64_t total = 1;
  for (std::uint64_t f : factors) {
    if (f != 0 && total > cap / f)
      throw CapacityExceeded(what, std::numeric_limits<std::uint64_t>::max(), cap);
    total *= f;
  }
  if (total > cap) throw CapacityExceeded(what, total, cap);
  return total;
}

}  // namespace

double normal_form_value(const WGame& game, std::size_t player, const StrategyProfile& profile) {
  const auto outcome = solution_map(*game.model, profile);
  const auto table = nature_table(game, player, outcome);
  return apply_risk(game.data[player].risk, table, game.model->nature(),
                    game.data[player].objective.sense);
}

NormalForm::NormalForm(const WGame& game, std::uint64_t cap) : game_(&game), cap_(cap) {
  const auto& model = *game.model;
  for (std::size_t p = 0; p < game.player_count(); ++p) {
    agents_.push_back(game.players.agents_of(p));
    std::vector<std::uint64_t> per_agent;
    for (std::size_t a : agents_.back()) per_agent.push_back(count_strategies(model, a, cap));
    counts_.push_back(checked_product(per_agent, cap,
                                      "strategy count of player '" + game.players.players[p] + "'"));
    agent_counts_.push_back(std::move(per_agent));
    risks_.push_back(compile_risk(game.data[p].risk, model.nature()));
  }
}

std::uint64_t NormalForm::profile_count(const std::vector<std::size_t>& players) const {
  std::vector<std::uint64_t> c;
  for (std::size_t p : players) c.push_back(counts_[p]);
  return checked_product(c, cap_, "strategy profile count");
}

std::vector<Strategy> NormalForm::player_strategy(std::size_t player, std::uint64_t index) const {
  if (index >= counts_[player])
    throw InvalidArgument("strategy index " + std::to_string(index) + " out of range for player '" +
                          game_->players.players[player] + "'");
  const auto& agents = agents_[player];
  std::vector<Strategy> out(agents.size());
  for (std::size_t i = agents.size(); i-- > 0;) {
    out[i] = strategy_at(model(), agents[i], index % agent_counts_[player][i]);
    index /= agent_counts_[player][i];
  }
  return out;
}

StrategyProfile NormalForm::agent_profile(const PlayerProfile& profile) const {
  if (profile.size() != player_count())
    throw InvalidArgument("profile has " + std::to_string(profile.size()) + " entries, game has " +
                          std::to_string(player_count()) + " players");
  StrategyProfile out;
  out.strategies.resize(model().agent_count());
  for (std::size_t p = 0; p < profile.size(); ++p)
    for (auto& s : player_strategy(p, profile[p])) out.strategies[s.agent] = std::move(s);
  return out;
}

std::string NormalForm::strategy_label(std::size_t player, std::uint64_t index) const {
  std::string label;
  const auto strategies = player_strategy(player, index);
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (i) label += " | ";
    const auto& factor = model().action_factor(strategies[i].agent);
    const auto& acts = strategies[i].actions;
    if (acts.size() == 1) {
      label += factor.elements[acts[0]];
      continue;
    }
    label += "[";
    for (std::size_t k = 0; k < acts.size(); ++k) {
      if (k) label += ",";
      label += factor.elements[acts[k]];
    }
    label += "]";
  }
  return label;
}

std::vector<double> NormalForm::values(const PlayerProfile& profile) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(profile); it != memo_.end()) return it->second;
  }
  const auto outcome = solution_map(model(), agent_profile(profile));
  std::vector<double> out(player_count());
  for (std::size_t p = 0; p < out.size(); ++p)
    out[p] = risks_[p](nature_table(*game_, p, outcome), game_->data[p].objective.sense);
  std::lock_guard lock(mutex_);
  memo_.insert_or_assign(profile, out);
  return out;
}

double NormalForm::value(std::size_t player, const PlayerProfile& profile) const {
  return values(profile)[player];
}

std::uint64_t NormalForm::evaluations() const {
  std::lock_guard lock(mutex_);
  return memo_.size();
}

NormalFormMatrix normal_form_matrix(const NormalForm& nf) {
  if (nf.player_count() != 2) throw NotTwoPlayers(nf.player_count());
  const std::uint64_t rows = nf.strategy_count(0), cols = nf.strategy_count(1);
  nf.profile_count({0, 1});
  NormalFormMatrix m;
  for (std::uint64_t r = 0; r < rows; ++r) m.row_labels.push_back(nf.strategy_label(0, r));
  for (std::uint64_t c = 0; c < cols; ++c) m.col_labels.push_back(nf.strategy_label(1, c));
  m.cells.reserve(rows * cols);
  for (std::uint64_t r = 0; r < rows; ++r)
    for (std::uint64_t c = 0; c < cols; ++c) {
      const auto v = nf.values({r, c});
      m.cells.emplace_back(v[0], v[1]);
    }
  return m;
}

std::string format_extended(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_csv(const NormalFormMatrix& m) {
  std::string out;
  for (const auto& c : m.col_labels) out += "," + csv_field(c);
  out += "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += csv_field(m.row_labels[r]);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const auto& [a, b] = m.at(r, c);
      out += "," + format_extended(a) + ";" + format_extended(b);
    }
    out += "\n";
  }
  return out;
}

}  // namespace gpf
