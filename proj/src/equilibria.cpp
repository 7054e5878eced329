#include "gpf/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "gpf/errors.hpp"

namespace gpf {

namespace {

// Profiles varying the entries of `players`, all other entries fixed to
// `base`. Rank is mixed radix with the first listed player most significant.
class Grid {
 public:
  Grid(const NormalForm& nf, std::vector<std::size_t> players, PlayerProfile base)
      : players_(std::move(players)), base_(std::move(base)) {
    total_ = nf.profile_count(players_);
    counts_.resize(players_.size());
    strides_.resize(players_.size());
    std::uint64_t stride = 1;
    for (std::size_t i = players_.size(); i-- > 0;) {
      counts_[i] = nf.strategy_count(players_[i]);
      strides_[i] = stride;
      stride *= counts_[i];
    }
  }

  std::uint64_t size() const { return total_; }
  const std::vector<std::size_t>& players() const { return players_; }
  std::uint64_t count(std::size_t i) const { return counts_[i]; }
  std::uint64_t digit(std::uint64_t rank, std::size_t i) const {
    return (rank / strides_[i]) % counts_[i];
  }
  std::uint64_t with_digit(std::uint64_t rank, std::size_t i, std::uint64_t d) const {
    return rank - digit(rank, i) * strides_[i] + d * strides_[i];
  }
  PlayerProfile at(std::uint64_t rank) const {
    PlayerProfile p = base_;
    for (std::size_t i = 0; i < players_.size(); ++i) p[players_[i]] = digit(rank, i);
    return p;
  }

 private:
  std::vector<std::size_t> players_;
  PlayerProfile base_;
  std::vector<std::uint64_t> counts_, strides_;
  std::uint64_t total_ = 0;
};

Sense sense_of(const NormalForm& nf, std::size_t player) {
  return nf.game().data[player].objective.sense;
}

struct GridSolution {
  std::vector<std::uint64_t> members;          // ranks where every grid player best-responds
  std::vector<std::vector<double>> values;     // per rank
  std::vector<bool> all_adverse;               // per grid player
  std::uint64_t ties = 0;                      // members with a non-unique best response
};

// Ranks of `grid` where each grid player's entry is a best response to the
// rest of the profile.
GridSolution mutual_best_responses(const NormalForm& nf, const Grid& grid) {
  GridSolution out;
  const std::uint64_t total = grid.size();
  out.values.resize(total);
  for (std::uint64_t r = 0; r < total; ++r) out.values[r] = nf.values(grid.at(r));

  const std::size_t n = grid.players().size();
  out.all_adverse.assign(n, false);
  std::vector<bool> member(total, true);
  std::vector<std::uint64_t> best_count(total, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t p = grid.players()[i];
    const Sense sense = sense_of(nf, p);
    for (std::uint64_t r = 0; r < total; ++r) {
      if (grid.digit(r, i) != 0) continue;
      double best = out.values[r][p];
      for (std::uint64_t d = 1; d < grid.count(i); ++d) {
        const double v = out.values[grid.with_digit(r, i, d)][p];
        if (better(v, best, sense)) best = v;
      }
      if (best == adverse_infinity(sense)) out.all_adverse[i] = true;
      std::uint64_t attaining = 0;
      for (std::uint64_t d = 0; d < grid.count(i); ++d)
        if (out.values[grid.with_digit(r, i, d)][p] == best) ++attaining;
      for (std::uint64_t d = 0; d < grid.count(i); ++d) {
        const std::uint64_t rd = grid.with_digit(r, i, d);
        if (out.values[rd][p] != best) {
          member[rd] = false;
        } else if (attaining > 1) {
          best_count[rd] = 1;
        }
      }
    }
  }
  for (std::uint64_t r = 0; r < total; ++r) {
    if (!member[r]) continue;
    out.members.push_back(r);
    out.ties += best_count[r];
  }
  return out;
}

// Independent re-check: no unilateral deviation strictly improves a player.
void verify_unilateral(const NormalForm& nf, const PlayerProfile& profile,
                       const std::vector<std::size_t>& players) {
  for (std::size_t p : players) {
    const double current = nf.value(p, profile);
    PlayerProfile dev = profile;
    for (std::uint64_t d = 0; d < nf.strategy_count(p); ++d) {
      dev[p] = d;
      if (better(nf.value(p, dev), current, sense_of(nf, p)))
        throw std::logic_error("equilibrium re-verification failed for player " +
                               nf.game().players.players[p]);
    }
  }
}

std::vector<std::size_t> all_players(const NormalForm& nf) {
  std::vector<std::size_t> out(nf.player_count());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = p;
  return out;
}

double theta_mix(double theta, double optimistic, double pessimistic) {
  // 0 · (±inf) is taken as 0 so the endpoints reproduce the pure modes.
  const double a = theta == 0 ? 0.0 : theta * optimistic;
  const double b = theta == 1 ? 0.0 : (1 - theta) * pessimistic;
  const double s = a + b;
  if (std::isnan(s)) throw IndeterminateValue("theta mix of +inf and -inf");
  return s;
}

}  // namespace

BestResponseSet best_responses(const NormalForm& nf, std::size_t player,
                               const PlayerProfile& context) {
  if (player >= nf.player_count()) throw InvalidArgument("unknown player index");
  if (context.size() != nf.player_count())
    throw InvalidArgument("context profile has the wrong number of players");
  const Sense sense = sense_of(nf, player);
  BestResponseSet out{player, context, {}, adverse_infinity(sense), false};
  std::vector<double> values(nf.strategy_count(player));
  PlayerProfile probe = context;
  bool first = true;
  for (std::uint64_t s = 0; s < values.size(); ++s) {
    probe[player] = s;
    values[s] = nf.value(player, probe);
    if (first || better(values[s], out.value, sense)) out.value = values[s];
    first = false;
  }
  for (std::uint64_t s = 0; s < values.size(); ++s)
    if (values[s] == out.value) out.strategies.push_back(s);
  out.all_adverse = out.value == adverse_infinity(sense);
  return out;
}

StackelbergMode StackelbergMode::with_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw InvalidArgument("theta must lie in [0, 1], got " + std::to_string(theta));
  StackelbergMode m;
  m.kind = Kind::Theta;
  m.theta = theta;
  return m;
}

StackelbergMode StackelbergMode::leader_risk(RiskKind risk, double alpha) {
  if (risk == RiskKind::CVaR && !(alpha > 0.0 && alpha <= 1.0))
    throw InvalidArgument("CVaR level must lie in (0, 1], got " + std::to_string(alpha));
  StackelbergMode m;
  m.kind = Kind::LeaderRisk;
  m.risk = risk;
  m.alpha = alpha;
  return m;
}

std::string StackelbergMode::describe() const {
  switch (kind) {
    case Kind::Optimistic:
      return "optimistic";
    case Kind::Pessimistic:
      return "pessimistic";
    case Kind::Theta:
      return "theta=" + format_extended(theta);
    case Kind::LeaderRisk:
      switch (risk) {
        case RiskKind::Expectation:
          return "risk=expectation";
        case RiskKind::WorstCase:
          return "risk=worst";
        case RiskKind::CVaR:
          return "risk=cvar:" + format_extended(alpha);
      }
  }
  return "?";
}

EquilibriumReport nash_equilibria(const NormalForm& nf) {
  const auto players = all_players(nf);
  const Grid grid(nf, players, PlayerProfile(nf.player_count(), 0));
  auto solved = mutual_best_responses(nf, grid);
  EquilibriumReport report;
  report.kind = EquilibriumReport::Kind::Nash;
  report.profiles_enumerated = grid.size();
  report.ties = solved.ties;
  for (std::size_t i = 0; i < players.size(); ++i)
    if (solved.all_adverse[i]) report.all_adverse_players.push_back(players[i]);
  for (std::uint64_t r : solved.members) {
    auto profile = grid.at(r);
    verify_unilateral(nf, profile, players);
    report.profiles.push_back(std::move(profile));
    report.values.push_back(solved.values[r]);
  }
  return report;
}

LeaderFollowerSplit leader_follower_split(const WGame& game) {
  LeaderFollowerSplit split;
  for (std::size_t p = 0; p < game.player_count(); ++p) {
    switch (game.roles[p]) {
      case Role::Leader:
        split.leaders.push_back(p);
        break;
      case Role::Follower:
        split.followers.push_back(p);
        break;
      case Role::Unspecified:
        throw InvalidArgument("player '" + game.players.players[p] +
                              "' has no leader/follower role");
    }
  }
  if (split.followers.empty()) throw InvalidArgument("game declares no follower");
  return split;
}

std::vector<PlayerProfile> followers_nash(const NormalForm& nf, const PlayerProfile& profile) {
  if (profile.size() != nf.player_count())
    throw InvalidArgument("profile has the wrong number of players");
  const auto split = leader_follower_split(nf.game());
  PlayerProfile base = profile;
  for (std::size_t f : split.followers) base[f] = 0;
  const Grid grid(nf, split.followers, base);
  const auto solved = mutual_best_responses(nf, grid);
  std::vector<PlayerProfile> out;
  out.reserve(solved.members.size());
  for (std::uint64_t r : solved.members) out.push_back(grid.at(r));
  return out;
}

double leader_value(const NormalForm& nf, std::size_t leader,
                    const std::vector<PlayerProfile>& responses, const StackelbergMode& mode) {
  if (responses.empty()) throw EmptyFollowerResponse({});
  const Sense sense = sense_of(nf, leader);
  std::vector<double> values;
  values.reserve(responses.size());
  for (const auto& r : responses) values.push_back(nf.value(leader, r));
  double best = values.front(), worst = values.front();
  for (double v : values) {
    if (better(v, best, sense)) best = v;
    if (better(worst, v, sense)) worst = v;
  }
  switch (mode.kind) {
    case StackelbergMode::Kind::Optimistic:
      return best;
    case StackelbergMode::Kind::Pessimistic:
      return worst;
    case StackelbergMode::Kind::Theta:
      return theta_mix(mode.theta, best, worst);
    case StackelbergMode::Kind::LeaderRisk: {
      const std::vector<double> masses(values.size(), 1.0 / static_cast<double>(values.size()));
      return apply_risk_to_masses(mode.risk, mode.alpha, values, masses, sense);
    }
  }
  return best;
}

double leader_value(const NormalForm& nf, std::size_t leader, const PlayerProfile& profile,
                    const StackelbergMode& mode) {
  const auto responses = followers_nash(nf, profile);
  if (responses.empty()) {
    const auto split = leader_follower_split(nf.game());
    std::vector<std::uint64_t> leaders;
    for (std::size_t l : split.leaders) leaders.push_back(profile[l]);
    throw EmptyFollowerResponse(std::move(leaders));
  }
  return leader_value(nf, leader, responses, mode);
}

StackelbergResult stackelberg_strategies(const NormalForm& nf, const StackelbergMode& mode) {
  const auto split = leader_follower_split(nf.game());
  if (split.leaders.empty()) throw InvalidArgument("game declares no leader");
  const Grid grid(nf, split.leaders, PlayerProfile(nf.player_count(), 0));
  const std::size_t n = split.leaders.size();

  StackelbergResult out;
  out.leader_profiles_enumerated = grid.size();
  std::vector<std::optional<std::vector<double>>> anticipated(grid.size());
  for (std::uint64_t r = 0; r < grid.size(); ++r) {
    const auto profile = grid.at(r);
    const auto responses = followers_nash(nf, profile);
    if (responses.empty()) {
      out.infeasible.push_back(profile);
      continue;
    }
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = leader_value(nf, split.leaders[i], responses, mode);
    anticipated[r] = std::move(v);
  }

  for (std::uint64_t r = 0; r < grid.size(); ++r) {
    if (!anticipated[r]) continue;
    bool stable = true;
    for (std::size_t i = 0; i < n && stable; ++i) {
      const Sense sense = sense_of(nf, split.leaders[i]);
      for (std::uint64_t d = 0; d < grid.count(i) && stable; ++d) {
        const auto& dev = anticipated[grid.with_digit(r, i, d)];
        if (dev && better((*dev)[i], (*anticipated[r])[i], sense)) stable = false;
      }
    }
    if (!stable) continue;
    out.leader_profiles.push_back(grid.at(r));
    out.leader_values.push_back(*anticipated[r]);
  }
  return out;
}

EquilibriumReport nash_stackelberg(const NormalForm& nf, const StackelbergMode& mode) {
  const auto split = leader_follower_split(nf.game());
  const auto leaders = stackelberg_strategies(nf, mode);
  EquilibriumReport report;
  report.kind = EquilibriumReport::Kind::NashStackelberg;
  report.mode = mode;
  report.infeasible_leader_profiles = leaders.infeasible;
  for (const auto& lp : leaders.leader_profiles) {
    PlayerProfile base = lp;
    const Grid grid(nf, split.followers, base);
    const auto solved = mutual_best_responses(nf, grid);
    report.ties += solved.ties;
    for (std::size_t i = 0; i < split.followers.size(); ++i)
      if (solved.all_adverse[i]) report.all_adverse_players.push_back(split.followers[i]);
    for (std::uint64_t r : solved.members) {
      auto profile = grid.at(r);
      verify_unilateral(nf, profile, split.followers);
      report.profiles.push_back(std::move(profile));
      report.values.push_back(solved.values[r]);
    }
  }
  report.profiles_enumerated = nf.evaluations();
  std::sort(report.all_adverse_players.begin(), report.all_adverse_players.end());
  report.all_adverse_players.erase(
      std::unique(report.all_adverse_players.begin(), report.all_adverse_players.end()),
      report.all_adverse_players.end());
  return report;
}

}  // namespace gpf
