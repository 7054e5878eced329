#include "gpf/cli.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "gpf/game_file.hpp"

namespace gpf {

using Json = nlohmann::ordered_json;

Json report_number(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return std::stod(format_extended(v));
}

StackelbergMode parse_stackelberg_mode(const std::string& text) {
  if (text == "optimistic") return StackelbergMode::optimistic();
  if (text == "pessimistic") return StackelbergMode::pessimistic();
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw InvalidArgument("--mode: '" + s + "' is not a number");
    return v;
  };
  if (text.rfind("theta=", 0) == 0) {
    const double theta = number(text.substr(6));
    if (theta == 1.0) return StackelbergMode::optimistic();
    if (theta == 0.0) return StackelbergMode::pessimistic();
    return StackelbergMode::with_theta(theta);
  }
  if (text == "risk=expectation") return StackelbergMode::leader_risk(RiskKind::Expectation);
  if (text == "risk=worst") return StackelbergMode::leader_risk(RiskKind::WorstCase);
  if (text.rfind("risk=cvar:", 0) == 0)
    return StackelbergMode::leader_risk(RiskKind::CVaR, number(text.substr(10)));
  throw InvalidArgument("--mode: expected optimistic, pessimistic, theta=T, risk=expectation, "
                        "risk=worst or risk=cvar:A, got '" + text + "'");
}

PlayabilityMode parse_playability_mode(const std::string& text) {
  if (text == "all") return {};
  auto bad = [&] {
    return InvalidArgument("--mode: expected all or sample=N,seed=S, got '" + text + "'");
  };
  PlayabilityMode::Sample sample;
  bool have_count = false;
  std::stringstream parts(text);
  std::string part;
  while (std::getline(parts, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw bad();
    const auto key = part.substr(0, eq), value = part.substr(eq + 1);
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) throw bad();
    const auto n = std::stoull(value);
    if (key == "sample") {
      sample.count = n;
      have_count = true;
    } else if (key == "seed") {
      sample.seed = n;
    } else {
      throw bad();
    }
  }
  if (!have_count) throw bad();
  return {sample};
}

namespace {

// ---- text rendering --------------------------------------------------------

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const Json& j) {
  if (j.is_null()) return "none";
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_number_integer()) return j.dump();
  return format_extended(j.get<double>());
}

bool is_flat(const Json& j) {
  if (is_scalar(j)) return true;
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (!is_flat(e)) return false;
  return true;
}

std::string flat_text(const Json& j) {
  if (is_scalar(j)) return scalar_text(j);
  std::string s = "[";
  for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + flat_text(j[i]);
  return s + "]";
}

void render(const Json& j, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (is_flat(v)) {
        out += pad + k + ": " + flat_text(v) + "\n";
      } else {
        out += pad + k + ":\n";
        render(v, indent + 2, out);
      }
    }
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (is_flat(e)) {
        out += pad + "- " + flat_text(e) + "\n";
      } else {
        out += pad + "-\n";
        render(e, indent + 2, out);
      }
    }
  } else {
    out += pad + scalar_text(j) + "\n";
  }
}

// ---- report sections -------------------------------------------------------

struct Context {
  const WGame& game;
  const NormalForm& nf;
};

std::string player_id(const WGame& g, std::size_t p) { return g.players.players[p]; }

std::string describe_strategy(const WModel& model, const Strategy& s) {
  const auto& elements = model.action_factor(s.agent).elements;
  if (s.actions.size() == 1) return elements[s.actions[0]];
  std::string out = "[";
  for (std::size_t k = 0; k < s.actions.size(); ++k) out += (k ? "," : "") + elements[s.actions[k]];
  return out + "]";
}

Json game_summary(const LoadedGame& loaded, const std::string& path, std::uint64_t cap) {
  const auto& game = loaded.game;
  const auto& model = *game.model;
  Json nature = Json::array();
  for (const auto& f : model.nature().factors())
    nature.push_back({{"id", f.id}, {"kind", to_string(f.kind)}, {"size", f.size()}});
  Json agents = Json::array();
  std::vector<std::optional<std::uint64_t>> counts(model.agent_count());
  for (std::size_t a = 0; a < model.agent_count(); ++a) {
    try {
      counts[a] = count_strategies(model, a, cap);
    } catch (const CapacityExceeded&) {
    }
    agents.push_back({{"name", model.agent(a).name()},
                      {"player", player_id(game, game.players.assignment[a])},
                      {"actions", model.action_count(a)},
                      {"info_atoms", model.info(a).atom_count()},
                      {"strategies", counts[a] ? Json(*counts[a]) : Json(nullptr)}});
  }
  Json players = Json::array();
  for (std::size_t p = 0; p < game.player_count(); ++p) {
    Json names = Json::array();
    for (std::size_t a : game.players.agents_of(p)) names.push_back(model.agent(a).name());
    players.push_back({{"id", player_id(game, p)},
                       {"role", to_string(game.roles[p])},
                       {"sense", to_string(game.data[p].objective.sense)},
                       {"risk", describe(game.data[p].risk)},
                       {"agents", std::move(names)}});
  }
  return {{"source", path},
          {"origin", loaded.origin},
          {"nature_points", model.nature().size()},
          {"configurations", model.configuration().size()},
          {"nature", std::move(nature)},
          {"agents", std::move(agents)},
          {"players", std::move(players)}};
}

Json sequential_json(const WModel& model) {
  const auto& order = model.sequential_order();
  if (!order) return nullptr;
  Json names = Json::array();
  for (std::size_t a : *order) names.push_back(model.agent(a).name());
  return names;
}

Json profile_json(const Context& c, const PlayerProfile& profile,
                  const std::vector<std::size_t>& players) {
  Json strategies = Json::object();
  for (std::size_t p : players) strategies[player_id(c.game, p)] = c.nf.strategy_label(p, profile[p]);
  Json index = Json::array();
  for (std::size_t p : players) index.push_back(profile[p]);
  return {{"index", std::move(index)}, {"strategies", std::move(strategies)}};
}

Json values_json(const Context& c, const std::vector<double>& values,
                 const std::vector<std::size_t>& players) {
  Json out = Json::object();
  for (std::size_t i = 0; i < players.size(); ++i)
    out[player_id(c.game, players[i])] = report_number(values[i]);
  return out;
}

std::vector<std::size_t> all_players(const WGame& g) {
  std::vector<std::size_t> v(g.player_count());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = p;
  return v;
}

Json playability_json(const WModel& model, const PlayabilityReport& r) {
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses) {
    Json profile = Json::object();
    for (const auto& s : w.profile.strategies) profile[model.agent(s.agent).name()] = describe_strategy(model, s);
    Json solutions = Json::array();
    for (const auto& tuple : w.solutions) {
      Json t = Json::object();
      for (std::size_t a = 0; a < tuple.size(); ++a)
        t[model.agent(a).name()] = model.action_factor(a).elements[tuple[a]];
      solutions.push_back(std::move(t));
    }
    witnesses.push_back({{"profile", std::move(profile)},
                         {"nature", model.nature().describe(w.nature_index)},
                         {"nature_index", w.nature_index},
                         {"solution_count", w.solutions.size()},
                         {"solutions", std::move(solutions)}});
  }
  Json order = nullptr;
  if (r.sequential_order) {
    order = Json::array();
    for (std::size_t a : *r.sequential_order) order.push_back(model.agent(a).name());
  }
  return {{"verdict", r.playable ? "playable" : "not playable"},
          {"mode", r.mode},
          {"sequential_order", std::move(order)},
          {"profiles_checked", r.profiles_checked},
          {"failures", r.failures},
          {"witnesses", std::move(witnesses)}};
}

Json equilibrium_json(const Context& c, const EquilibriumReport& r) {
  const auto players = all_players(c.game);
  Json profiles = Json::array();
  for (std::size_t i = 0; i < r.profiles.size(); ++i) {
    auto p = profile_json(c, r.profiles[i], players);
    p["values"] = values_json(c, r.values[i], players);
    profiles.push_back(std::move(p));
  }
  Json adverse = Json::array();
  for (std::size_t p : r.all_adverse_players) adverse.push_back(player_id(c.game, p));
  Json out = Json::object();
  if (r.mode) out["mode"] = r.mode->describe();
  out["count"] = r.profiles.size();
  out["profiles"] = std::move(profiles);
  out["ties"] = r.ties;
  out["all_adverse_players"] = std::move(adverse);
  if (r.kind == EquilibriumReport::Kind::NashStackelberg) {
    const auto split = leader_follower_split(c.game);
    Json infeasible = Json::array();
    for (const auto& lp : r.infeasible_leader_profiles)
      infeasible.push_back(profile_json(c, lp, split.leaders));
    out["infeasible_leader_profiles"] = std::move(infeasible);
  }
  return out;
}

Json stackelberg_json(const Context& c, const StackelbergResult& r, const StackelbergMode& mode) {
  const auto split = leader_follower_split(c.game);
  Json leaders = Json::array(), followers = Json::array();
  for (std::size_t p : split.leaders) leaders.push_back(player_id(c.game, p));
  for (std::size_t p : split.followers) followers.push_back(player_id(c.game, p));
  Json profiles = Json::array();
  for (std::size_t i = 0; i < r.leader_profiles.size(); ++i) {
    auto p = profile_json(c, r.leader_profiles[i], split.leaders);
    p["anticipated_values"] = values_json(c, r.leader_values[i], split.leaders);
    profiles.push_back(std::move(p));
  }
  Json infeasible = Json::array();
  for (const auto& lp : r.infeasible) infeasible.push_back(profile_json(c, lp, split.leaders));
  return {{"mode", mode.describe()},
          {"leaders", std::move(leaders)},
          {"followers", std::move(followers)},
          {"leader_profiles_enumerated", r.leader_profiles_enumerated},
          {"count", r.leader_profiles.size()},
          {"profiles", std::move(profiles)},
          {"infeasible_leader_profiles", std::move(infeasible)}};
}

Json strategies_json(const Context& c) {
  constexpr std::uint64_t kListed = 64;
  const auto& model = c.nf.model();
  Json players = Json::array();
  for (std::size_t p = 0; p < c.game.player_count(); ++p) {
    Json agents = Json::array();
    for (std::size_t a : c.game.players.agents_of(p))
      agents.push_back({{"name", model.agent(a).name()},
                        {"info_atoms", model.info(a).atom_count()},
                        {"actions", model.action_count(a)},
                        {"strategies", count_strategies(model, a, c.nf.cap())}});
    const auto n = c.nf.strategy_count(p);
    Json labels = Json::array();
    for (std::uint64_t i = 0; i < std::min(n, kListed); ++i) labels.push_back(c.nf.strategy_label(p, i));
    players.push_back({{"id", player_id(c.game, p)},
                       {"strategies", n},
                       {"agents", std::move(agents)},
                       {"labels", std::move(labels)},
                       {"labels_truncated", n > kListed}});
  }
  return {{"players", std::move(players)}};
}

Json normal_form_json(const Context& c, const std::string& csv_path) {
  if (c.game.player_count() == 2) {
    const auto m = normal_form_matrix(c.nf);
    Json cells = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      Json row = Json::array();
      for (std::size_t col = 0; col < m.cols(); ++col) {
        const auto& [a, b] = m.at(r, col);
        row.push_back(Json::array({report_number(a), report_number(b)}));
      }
      cells.push_back(std::move(row));
    }
    Json out = {{"players", {player_id(c.game, 0), player_id(c.game, 1)}},
                {"rows", m.row_labels},
                {"cols", m.col_labels},
                {"cells", std::move(cells)}};
    if (!csv_path.empty()) {
      std::ofstream f(csv_path, std::ios::binary);
      if (!f || !(f << to_csv(m))) throw SchemaError(csv_path, "cannot write CSV file");
      out["csv"] = csv_path;
    }
    return out;
  }
  if (!csv_path.empty()) throw NotTwoPlayers(c.game.player_count());
  const auto players = all_players(c.game);
  const auto total = c.nf.profile_count(players);
  Json profiles = Json::array();
  PlayerProfile profile(players.size(), 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint64_t rest = i;
    for (std::size_t p = players.size(); p-- > 0;) {
      profile[p] = rest % c.nf.strategy_count(p);
      rest /= c.nf.strategy_count(p);
    }
    auto entry = profile_json(c, profile, players);
    entry["values"] = values_json(c, c.nf.values(profile), players);
    profiles.push_back(std::move(entry));
  }
  Json ids = Json::array();
  for (std::size_t p : players) ids.push_back(player_id(c.game, p));
  return {{"players", std::move(ids)}, {"profiles", std::move(profiles)}};
}

// ---- errors ----------------------------------------------------------------

Json error_json(const std::exception& e, const WModel* model, int& exit_code) {
  exit_code = kExitInvalid;
  Json err = Json::object();
  if (const auto* c = dynamic_cast<const CapacityExceeded*>(&e)) {
    exit_code = kExitCapacity;
    err["type"] = "capacity_exceeded";
    err["requested"] = c->requested();
    err["cap"] = c->cap();
  } else if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    err["type"] = "parse_error";
    err["location"] = {{"line", p->line()}, {"column", p->column()}};
  } else if (const auto* s = dynamic_cast<const SchemaError*>(&e)) {
    err["type"] = "schema_error";
    err["location"] = {{"path", s->path()}};
  } else if (const auto* v = dynamic_cast<const SelfInformationViolation*>(&e)) {
    err["type"] = "self_information_violation";
    err["location"] = {{"agent", v->agent()},
                       {"configurations", {v->first(), v->second()}}};
  } else if (const auto* n = dynamic_cast<const NotPlayable*>(&e)) {
    err["type"] = "not_playable";
    Json w = {{"nature_index", n->nature_index()}, {"solution_count", n->solutions()}};
    if (model) w["nature"] = model->nature().describe(n->nature_index());
    err["witness"] = std::move(w);
  } else if (const auto* f = dynamic_cast<const EmptyFollowerResponse*>(&e)) {
    err["type"] = "empty_follower_response";
    err["witness"] = {{"leader_profile", f->leaders()}};
  } else if (const auto* t = dynamic_cast<const NotTwoPlayers*>(&e)) {
    err["type"] = "not_two_players";
    err["witness"] = {{"players", t->players()}};
  } else if (dynamic_cast<const IndeterminateValue*>(&e)) {
    err["type"] = "indeterminate_value";
  } else if (dynamic_cast<const InvalidArgument*>(&e)) {
    err["type"] = "invalid_argument";
  } else {
    err["type"] = "internal_error";
  }
  err["message"] = e.what();
  return err;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) s += (i ? " " : "") + args[i];
  return s;
}

}  // namespace

std::string render_text(const Json& report) {
  std::string out;
  render(report, 0, out);
  return out;
}

RunResult run(const std::vector<std::string>& args) {
  CLI::App app{"Finite games in product form: validation and equilibrium enumeration", "gpf"};
  app.require_subcommand(1);
  std::string game_path, out_path, format = "json", csv_path;
  std::string stackelberg_mode = "optimistic", playability_mode = "all";
  std::uint64_t cap = kDefaultProfileCap;
  bool timing = false;
  app.add_option("--game", game_path, "Game definition file")->required();
  app.add_option("--out", out_path, "Write the report to this file instead of stdout");
  app.add_option("--cap", cap, "Maximum number of enumerated strategies/profiles")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--timing", timing, "Print elapsed time to stderr");

  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  sub("validate", "Check self-information, sequentiality and playability");
  sub("strategies", "Count and list pure strategies");
  sub("playability", "Check playability")
      ->add_option("--mode", playability_mode, "all | sample=N,seed=S");
  sub("normal-form", "Tabulate normal-form values")
      ->add_option("--csv", csv_path, "Also write the two-player matrix as CSV");
  sub("nash", "Enumerate pure Nash equilibria");
  sub("stackelberg", "Enumerate Stackelberg leader strategies")
      ->add_option("--mode", stackelberg_mode,
                   "optimistic | pessimistic | theta=T | risk=expectation|worst|cvar:A");
  sub("nash-stackelberg", "Enumerate Nash-Stackelberg equilibria")
      ->add_option("--mode", stackelberg_mode,
                   "optimistic | pessimistic | theta=T | risk=expectation|worst|cvar:A");
  sub("export", "Write the game in the custom schema");

  RunResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.output = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = kExitInvalid;
    result.output = std::string(e.what()) + "\n";
    result.log = "run with --help for usage\n";
    return result;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();

  Json report;
  report["command"] = {{"name", command}, {"args", join_args(args)}};
  std::optional<LoadedGame> loaded;
  std::optional<NormalForm> nf;
  try {
    loaded = load_game(game_path);
    const auto& game = loaded->game;
    const auto& model = *game.model;

    if (command == "export") {
      result.output = export_game(game).dump(2) + "\n";
    } else {
      report["game"] = game_summary(*loaded, game_path, cap);
      Json validation = {{"self_information", "ok"}, {"sequential_order", sequential_json(model)}};
      if (command == "validate" || command == "playability") {
        const auto mode = command == "validate" ? PlayabilityMode{}
                                                : parse_playability_mode(playability_mode);
        const auto r = check_playability(model, mode, cap);
        validation["playability"] = playability_json(model, r);
        if (!r.playable) result.exit_code = kExitInvalid;
      } else {
        validation["playability"] = {
            {"verdict", model.sequential_order() ? "playable" : "unchecked"},
            {"mode", model.sequential_order() ? "sequential" : "none"}};
      }
      report["validation"] = std::move(validation);

      nf.emplace(game, cap);
      const Context c{game, *nf};
      if (command == "strategies") {
        report["result"] = strategies_json(c);
      } else if (command == "normal-form") {
        report["result"] = normal_form_json(c, csv_path);
      } else if (command == "nash") {
        report["result"] = equilibrium_json(c, nash_equilibria(*nf));
      } else if (command == "stackelberg") {
        const auto mode = parse_stackelberg_mode(stackelberg_mode);
        report["result"] = stackelberg_json(c, stackelberg_strategies(*nf, mode), mode);
      } else if (command == "nash-stackelberg") {
        const auto mode = parse_stackelberg_mode(stackelberg_mode);
        report["result"] = equilibrium_json(c, nash_stackelberg(*nf, mode));
      }
    }
  } catch (const std::exception& e) {
    report["error"] = error_json(e, loaded ? loaded->game.model.get() : nullptr, result.exit_code);
  }

  if (command != "export" || report.contains("error")) {
    report["diagnostics"] = {{"cap", cap}, {"evaluations", nf ? nf->evaluations() : 0}};
    result.output = format == "text" ? render_text(report) : report.dump(2) + "\n";
  }
  if (timing) {
    const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
    result.log += "elapsed: " + format_extended(ms.count()) + " ms\n";
  }
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f || !(f << result.output)) {
      result.log += "cannot write " + out_path + "\n";
      result.exit_code = kExitInvalid;
    }
  }
  return result;
}

}  // namespace gpf
