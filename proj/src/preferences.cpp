#include "gpf/preferences.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "gpf/errors.hpp"

namespace gpf {

const char* to_string(Sense sense) { return sense == Sense::Cost ? "cost" : "payoff"; }

const char* to_string(Role role) {
  switch (role) {
    case Role::Leader:
      return "leader";
    case Role::Follower:
      return "follower";
    case Role::Unspecified:
      break;
  }
  return "unspecified";
}

std::vector<std::size_t> PlayerPartition::agents_of(std::size_t p) const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < assignment.size(); ++a)
    if (assignment[a] == p) out.push_back(a);
  return out;
}

std::optional<std::size_t> PlayerPartition::player_index(const std::string& id) const {
  for (std::size_t p = 0; p < players.size(); ++p)
    if (players[p] == id) return p;
  return std::nullopt;
}

PlayerPartition partition_by_agent_player(const WModel& model) {
  PlayerPartition out;
  for (const auto& agent : model.agents()) {
    auto p = out.player_index(agent.player);
    if (!p) {
      out.players.push_back(agent.player);
      p = out.players.size() - 1;
    }
    out.assignment.push_back(*p);
  }
  return out;
}

namespace {

constexpr double kMassTolerance = 1e-12;

void check_distribution(std::span<const double> v, const std::string& what) {
  if (v.empty()) throw InvalidArgument(what + " is empty");
  double sum = 0;
  for (double m : v) {
    if (!(m >= 0) || !std::isfinite(m))
      throw InvalidArgument(what + " has a negative or non-finite mass");
    sum += m;
  }
  if (std::abs(sum - 1.0) > kMassTolerance)
    throw InvalidArgument(what + " sums to " + std::to_string(sum) + ", expected 1");
}

}  // namespace

Belief Belief::joint(std::vector<double> masses) {
  check_distribution(masses, "joint belief");
  return Belief(Joint{std::move(masses)});
}

Belief Belief::product(std::vector<std::vector<double>> factors) {
  for (std::size_t i = 0; i < factors.size(); ++i)
    check_distribution(factors[i], "belief on Nature factor " + std::to_string(i));
  return Belief(Product{std::move(factors)});
}

Belief Belief::uniform(const ProductSpace& nature) {
  std::vector<std::vector<double>> f;
  for (const auto& factor : nature.factors()) f.push_back(uniform_masses(factor.size()));
  return Belief(Product{std::move(f)});
}

void Belief::check(const ProductSpace& nature) const {
  if (const auto* j = std::get_if<Joint>(&value_)) {
    if (j->masses.size() != nature.size())
      throw InvalidArgument("joint belief has " + std::to_string(j->masses.size()) +
                            " masses, Nature has " + std::to_string(nature.size()) + " points");
    return;
  }
  const auto& p = std::get<Product>(value_);
  if (p.factors.size() != nature.factor_count())
    throw InvalidArgument("product belief has " + std::to_string(p.factors.size()) +
                          " factors, Nature has " + std::to_string(nature.factor_count()));
  for (std::size_t i = 0; i < p.factors.size(); ++i)
    if (p.factors[i].size() != nature.factor(i).size())
      throw InvalidArgument("belief on Nature factor '" + nature.factor(i).id + "' has " +
                            std::to_string(p.factors[i].size()) + " masses, factor has " +
                            std::to_string(nature.factor(i).size()) + " elements");
}

double Belief::mass(const ProductSpace& nature, std::size_t w) const {
  if (const auto* j = std::get_if<Joint>(&value_)) return j->masses.at(w);
  const auto& p = std::get<Product>(value_);
  double m = 1.0;
  for (std::size_t i = 0; i < p.factors.size(); ++i) m *= p.factors[i][nature.coordinate(w, i)];
  return m;
}

std::vector<double> Belief::masses(const ProductSpace& nature) const {
  check(nature);
  std::vector<double> out(nature.size());
  for (std::size_t w = 0; w < out.size(); ++w) out[w] = mass(nature, w);
  return out;
}

std::vector<double> make_dirac(std::size_t size, std::size_t element) {
  if (element >= size)
    throw InvalidArgument("Dirac element " + std::to_string(element) +
                          " out of range for factor of size " + std::to_string(size));
  std::vector<double> v(size, 0.0);
  v[element] = 1.0;
  return v;
}

std::vector<double> uniform_masses(std::size_t size) {
  if (size == 0) throw InvalidArgument("uniform distribution over an empty set");
  return std::vector<double>(size, 1.0 / static_cast<double>(size));
}

std::string describe(const RiskMeasure& risk) {
  if (std::holds_alternative<Expectation>(risk)) return "expectation";
  if (std::holds_alternative<WorstCase>(risk)) return "worst-case";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", std::get<CVaR>(risk).alpha);
  return std::string("cvar(") + buf + ")";
}

namespace {

// Σ w·v over entries with w > 0, with the sign of any infinity dominating.
double weighted_sum(std::span<const std::pair<double, double>> weighted) {
  bool pos = false, neg = false;
  double sum = 0;
  for (auto [v, w] : weighted) {
    if (w <= 0) continue;
    if (v == kInf) {
      pos = true;
    } else if (v == -kInf) {
      neg = true;
    } else {
      sum += w * v;
    }
  }
  if (pos && neg)
    throw IndeterminateValue("+inf and -inf both carry positive probability");
  if (pos) return kInf;
  if (neg) return -kInf;
  return sum;
}

}  // namespace

double apply_risk_to_masses(RiskKind kind, double alpha, std::span<const double> values,
                            std::span<const double> masses, Sense sense) {
  if (values.size() != masses.size())
    throw InvalidArgument("risk measure: " + std::to_string(values.size()) + " values for " +
                          std::to_string(masses.size()) + " Nature points");
  std::vector<std::pair<double, double>> support;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (masses[i] > 0) support.emplace_back(values[i], masses[i]);
  if (support.empty()) throw InvalidArgument("risk measure: belief has no positive mass");

  if (kind == RiskKind::CVaR && alpha >= 1.0) kind = RiskKind::Expectation;
  switch (kind) {
    case RiskKind::Expectation:
      return weighted_sum(support);
    case RiskKind::WorstCase: {
      double worst = support.front().first;
      for (auto [v, w] : support)
        if (better(worst, v, sense)) worst = v;
      return worst;
    }
    case RiskKind::CVaR: {
      if (!(alpha > 0.0 && alpha <= 1.0))
        throw InvalidArgument("CVaR level must lie in (0, 1], got " + std::to_string(alpha));
      // Adverse values first; ties keep Nature order.
      std::stable_sort(support.begin(), support.end(), [sense](const auto& a, const auto& b) {
        return better(b.first, a.first, sense);
      });
      std::vector<std::pair<double, double>> tail;
      double remaining = alpha;
      for (auto [v, w] : support) {
        if (remaining <= 0) break;
        const double take = std::min(w, remaining);
        tail.emplace_back(v, take);
        remaining -= take;
      }
      double total = 0;
      for (auto [v, w] : tail) total += w;
      const double s = weighted_sum(tail);
      return std::isfinite(s) ? s / total : s;
    }
  }
  return 0;
}

CompiledRisk compile_risk(const RiskMeasure& risk, const ProductSpace& nature) {
  CompiledRisk out;
  if (const auto* e = std::get_if<Expectation>(&risk)) {
    out.kind = RiskKind::Expectation;
    out.masses = e->belief.masses(nature);
  } else if (const auto* wc = std::get_if<WorstCase>(&risk)) {
    out.kind = RiskKind::WorstCase;
    out.masses = wc->support ? wc->support->masses(nature)
                             : std::vector<double>(nature.size(), 1.0 / nature.size());
  } else {
    const auto& c = std::get<CVaR>(risk);
    if (!(c.alpha > 0.0 && c.alpha <= 1.0))
      throw InvalidArgument("CVaR level must lie in (0, 1], got " + std::to_string(c.alpha));
    out.kind = RiskKind::CVaR;
    out.alpha = c.alpha;
    out.masses = c.belief.masses(nature);
  }
  return out;
}

double apply_risk(const RiskMeasure& risk, std::span<const double> values,
                  const ProductSpace& nature, Sense sense) {
  return compile_risk(risk, nature)(values, sense);
}

std::vector<std::size_t> WGame::players_with(Role role) const {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < roles.size(); ++p)
    if (roles[p] == role) out.push_back(p);
  return out;
}

WGame make_wgame(std::shared_ptr<const WModel> model, PlayerPartition players,
                 std::vector<PlayerData> data, std::vector<Role> roles) {
  if (!model) throw InvalidArgument("W-game needs a model");
  if (players.assignment.size() != model->agent_count())
    throw InvalidArgument("player partition assigns " + std::to_string(players.assignment.size()) +
                          " agents, model has " + std::to_string(model->agent_count()));
  std::vector<bool> used(players.players.size(), false);
  for (std::size_t a = 0; a < players.assignment.size(); ++a) {
    if (players.assignment[a] >= players.players.size())
      throw InvalidArgument("agent '" + model->agent(a).name() + "' assigned to unknown player");
    used[players.assignment[a]] = true;
  }
  for (std::size_t p = 0; p < used.size(); ++p)
    if (!used[p]) throw InvalidArgument("player '" + players.players[p] + "' owns no agent");
  if (data.size() != players.players.size())
    throw InvalidArgument("missing player data: " + std::to_string(data.size()) + " entries for " +
                          std::to_string(players.players.size()) + " players");
  for (std::size_t p = 0; p < data.size(); ++p) {
    const auto& obj = data[p].objective;
    if (obj.player != players.players[p])
      throw InvalidArgument("objective of player '" + players.players[p] + "' is labelled '" +
                            obj.player + "'");
    if (obj.values.size() != model->configuration().size())
      throw InvalidArgument("objective of player '" + obj.player + "' has " +
                            std::to_string(obj.values.size()) + " values, configuration space has " +
                            std::to_string(model->configuration().size()));
    for (double v : obj.values)
      if (std::isnan(v)) throw InvalidArgument("objective of player '" + obj.player + "' has NaN");
    // Validates belief shapes against Nature.
    (void)compile_risk(data[p].risk, model->nature());
  }
  if (roles.empty()) roles.assign(players.players.size(), Role::Unspecified);
  if (roles.size() != players.players.size())
    throw InvalidArgument("roles given for " + std::to_string(roles.size()) + " of " +
                          std::to_string(players.players.size()) + " players");
  return WGame{std::move(model), std::move(players), std::move(data), std::move(roles)};
}

}  // namespace gpf
