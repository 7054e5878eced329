#include "gpf/game_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gpf/models.hpp"

namespace gpf {

using nlohmann::json;

namespace {

// A JSON value together with its location in the document.
class Node {
 public:
  Node(const json& v, std::string path) : v_(v), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return v_; }
  [[noreturn]] void fail(const std::string& detail) const {
    throw SchemaError(path_.empty() ? "/" : path_, detail);
  }

  bool has(const std::string& key) const { return v_.is_object() && v_.contains(key); }
  Node at(const std::string& key) const {
    object();
    if (!v_.contains(key)) fail("missing field '" + key + "'");
    return Node(v_.at(key), path_ + "/" + key);
  }
  std::optional<Node> find(const std::string& key) const {
    object();
    if (!v_.contains(key) || v_.at(key).is_null()) return std::nullopt;
    return Node(v_.at(key), path_ + "/" + key);
  }
  Node operator[](std::size_t i) const { return Node(v_.at(i), path_ + "/" + std::to_string(i)); }

  void object() const {
    if (!v_.is_object()) fail("expected an object");
  }
  std::size_t size() const {
    if (!v_.is_array()) fail("expected an array");
    return v_.size();
  }
  void only(std::initializer_list<const char*> keys) const {
    object();
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, _] : v_.items())
      if (!allowed.count(k)) Node(v_.at(k), path_ + "/" + k).fail("unknown field");
  }

  std::string str() const {
    if (!v_.is_string()) fail("expected a string");
    return v_.get<std::string>();
  }
  bool boolean() const {
    if (!v_.is_boolean()) fail("expected true or false");
    return v_.get<bool>();
  }
  double num() const {
    if (!v_.is_number()) fail("expected a number");
    return v_.get<double>();
  }
  double extended() const {
    if (v_.is_string()) {
      const auto s = v_.get<std::string>();
      if (s == "inf") return kInf;
      if (s == "-inf") return -kInf;
      fail("expected a number, \"inf\" or \"-inf\"");
    }
    return num();
  }
  std::uint64_t uint() const {
    if (!v_.is_number_integer() || (v_.is_number_integer() && !v_.is_number_unsigned() &&
                                    v_.get<std::int64_t>() < 0))
      fail("expected a non-negative integer");
    return v_.get<std::uint64_t>();
  }

  std::vector<double> nums() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)[i].num();
    return out;
  }
  std::vector<double> extendeds() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)[i].extended();
    return out;
  }
  std::vector<std::string> strs() const {
    std::vector<std::string> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)[i].str();
    return out;
  }

 private:
  const json& v_;
  std::string path_;
};

// ---- builtin parameters ----------------------------------------------------

NatureGrid read_nature_grid(const Node& n, NatureGrid g) {
  n.only({"values", "masses", "truth"});
  if (auto v = n.find("values")) g.values = v->nums();
  if (auto v = n.find("masses")) g.masses = v->nums();
  if (auto v = n.find("truth")) g.truth = v->uint();
  return g;
}

TouParams read_tou(const Node& n) {
  auto p = tou_reference_params();
  n.only({"demand", "cost", "unwillingness", "peak_prices", "offpeak_prices", "shifts"});
  if (auto v = n.find("demand")) p.demand = read_nature_grid(*v, p.demand);
  if (auto v = n.find("cost")) p.cost = read_nature_grid(*v, p.cost);
  if (auto v = n.find("unwillingness")) p.unwillingness = read_nature_grid(*v, p.unwillingness);
  if (auto v = n.find("peak_prices")) p.peak_prices = v->nums();
  if (auto v = n.find("offpeak_prices")) p.offpeak_prices = v->nums();
  if (auto v = n.find("shifts")) p.shifts = v->nums();
  return p;
}

TypeGrid read_type(const Node& n, TypeGrid t) {
  n.only({"name", "grid", "masses", "truth"});
  if (auto v = n.find("name")) t.name = v->str();
  if (auto v = n.find("grid")) {
    t.grid.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const Node e = (*v)[i];
      if (e.size() != 2) e.fail("expected [linear, quadratic]");
      t.grid.push_back({e[0].num(), e[1].num()});
    }
  }
  if (auto v = n.find("masses")) t.masses = v->nums();
  if (auto v = n.find("truth")) t.truth = v->uint();
  return t;
}

ThaiParams read_thai(const Node& n) {
  auto p = thai_reference_params();
  n.only({"baseline", "price", "reward", "targets", "consumption", "leader_type", "follower_types",
          "exogenous", "info_mode", "aggregation", "clamp_reduction", "cap"});
  if (auto v = n.find("baseline")) p.baseline = v->nums();
  if (auto v = n.find("price")) p.price = v->nums();
  if (auto v = n.find("reward")) p.reward = v->num();
  if (auto v = n.find("targets")) p.target_grid = v->nums();
  if (auto v = n.find("consumption")) p.consumption_grid = v->nums();
  if (auto v = n.find("leader_type")) p.leader_type = read_type(*v, p.leader_type);
  if (auto v = n.find("follower_types")) {
    std::vector<TypeGrid> types;
    for (std::size_t i = 0; i < v->size(); ++i)
      types.push_back(read_type((*v)[i], p.follower_types.front()));
    p.follower_types = std::move(types);
  }
  if (auto v = n.find("exogenous")) {
    p.exogenous.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const Node e = (*v)[i];
      e.only({"scales", "masses"});
      ExogenousGrid g;
      if (auto s = e.find("scales")) g.scales = s->nums();
      if (auto s = e.find("masses")) g.masses = s->nums();
      p.exogenous.push_back(std::move(g));
    }
  }
  if (auto v = n.find("info_mode")) {
    const auto s = v->str();
    if (s == "open-loop") p.info_mode = ThaiInfoMode::OpenLoop;
    else if (s == "current-stage") p.info_mode = ThaiInfoMode::CurrentStage;
    else if (s == "full-history") p.info_mode = ThaiInfoMode::FullHistory;
    else v->fail("expected open-loop, current-stage or full-history");
  }
  if (auto v = n.find("aggregation")) {
    const auto s = v->str();
    if (s == "aggregate") p.aggregation = RewardAggregation::Aggregate;
    else if (s == "literal") p.aggregation = RewardAggregation::Literal;
    else v->fail("expected aggregate or literal");
  }
  if (auto v = n.find("clamp_reduction")) p.clamp_reduction = v->boolean();
  if (auto v = n.find("cap")) p.cap = v->uint();
  return p;
}

LoadedGame load_builtin(const Node& n) {
  n.only({"model", "params"});
  const Node model = n.at("model");
  const auto name = model.str();
  const json empty = json::object();
  const Node params = n.find("params").value_or(Node(empty, n.path() + "/params"));
  params.object();
  try {
    if (name == "prisoners_dilemma") {
      params.only({});
      return {build_prisoners_dilemma(), "builtin:" + name};
    }
    if (name == "tou") return {build_tou_game(read_tou(params)), "builtin:" + name};
    if (name == "thai_slsf_st") return {build_thai_slsf_st(read_thai(params)), "builtin:" + name};
    if (name == "thai_slsf_mt") return {build_thai_slsf_mt(read_thai(params)), "builtin:" + name};
    if (name == "thai_slmf_mt") return {build_thai_slmf_mt(read_thai(params)), "builtin:" + name};
  } catch (const SchemaError&) {
    throw;
  } catch (const InvalidArgument& e) {
    params.fail(e.what());
  }
  model.fail("unknown model '" + name +
             "' (expected prisoners_dilemma, tou, thai_slsf_st, thai_slsf_mt, thai_slmf_mt)");
}

// ---- custom games ----------------------------------------------------------

FactorKind read_kind(const Node& n) {
  const auto s = n.str();
  if (s == "exogenous") return FactorKind::NatureExogenous;
  if (s == "type") return FactorKind::NatureType;
  n.fail("expected exogenous or type");
}

FiniteFactor read_factor(const Node& n, FactorKind kind, bool nature) {
  if (nature) n.only({"id", "label", "kind", "elements"});
  else n.only({"id", "label", "elements"});
  FiniteFactor f;
  f.id = n.at("id").str();
  f.label = n.find("label") ? n.at("label").str() : f.id;
  f.kind = nature && n.has("kind") ? read_kind(n.at("kind")) : kind;
  const Node elements = n.at("elements");
  f.elements = elements.strs();
  if (f.elements.empty()) elements.fail("factor needs at least one element");
  return f;
}

Belief read_belief(const Node& n) {
  n.only({"product", "joint"});
  try {
    if (auto v = n.find("joint")) {
      if (n.has("product")) n.fail("give either product or joint, not both");
      return Belief::joint(v->nums());
    }
    const Node product = n.at("product");
    std::vector<std::vector<double>> factors;
    for (std::size_t i = 0; i < product.size(); ++i) factors.push_back(product[i].nums());
    return Belief::product(std::move(factors));
  } catch (const SchemaError&) {
    throw;
  } catch (const InvalidArgument& e) {
    n.fail(e.what());
  }
}

RiskMeasure read_risk(const Node& n, const ProductSpace& nature) {
  n.only({"kind", "alpha", "belief", "support"});
  const auto kind = n.at("kind").str();
  auto belief = [&] {
    auto v = n.find("belief");
    return v ? read_belief(*v) : Belief::uniform(nature);
  };
  if (kind == "expectation") return Expectation{belief()};
  if (kind == "worst-case") {
    WorstCase w;
    if (auto v = n.find("support")) w.support = read_belief(*v);
    return w;
  }
  if (kind == "cvar") return CVaR{n.at("alpha").num(), belief()};
  n.at("kind").fail("expected expectation, worst-case or cvar");
}

Sense read_sense(const Node& n) {
  const auto s = n.str();
  if (s == "cost") return Sense::Cost;
  if (s == "payoff") return Sense::Payoff;
  n.fail("expected cost or payoff");
}

Role read_role(const Node& n) {
  const auto s = n.str();
  if (s == "leader") return Role::Leader;
  if (s == "follower") return Role::Follower;
  n.fail("expected leader or follower");
}

LoadedGame load_custom(const Node& n) {
  n.only({"nature", "agents", "players"});
  const Node nature_node = n.at("nature");
  std::vector<FiniteFactor> nature;
  for (std::size_t i = 0; i < nature_node.size(); ++i)
    nature.push_back(read_factor(nature_node[i], FactorKind::NatureExogenous, true));
  if (nature.empty()) nature_node.fail("Nature needs at least one factor");

  const Node agents_node = n.at("agents");
  std::vector<AgentId> agents;
  std::vector<FiniteFactor> actions;
  for (std::size_t i = 0; i < agents_node.size(); ++i) {
    const Node a = agents_node[i];
    a.only({"player", "stage", "actions", "info"});
    AgentId id{a.at("player").str(), std::nullopt};
    if (auto s = a.find("stage")) {
      if (!s->raw().is_number_integer()) s->fail("expected an integer");
      id.stage = s->raw().get<int>();
    }
    agents.push_back(id);
    actions.push_back(read_factor(a.at("actions"), FactorKind::Action, false));
  }

  std::set<std::string> ids;
  std::size_t configurations = 1;
  for (const auto& f : nature) ids.insert(f.id), configurations *= f.size();
  for (const auto& f : actions) ids.insert(f.id), configurations *= f.size();

  std::vector<InfoSpec> info;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const Node a = agents_node[i];
    const auto spec = a.find("info");
    if (!spec) {
      info.push_back(CylinderInfo{});
      continue;
    }
    spec->only({"observes", "atoms"});
    if (auto v = spec->find("atoms")) {
      if (spec->has("observes")) spec->fail("give either observes or atoms, not both");
      if (v->size() != configurations)
        v->fail("expected " + std::to_string(configurations) + " atom labels, one per configuration");
      ExplicitInfo e;
      for (std::size_t k = 0; k < v->size(); ++k) e.labels.push_back((*v)[k].uint());
      info.push_back(std::move(e));
    } else {
      const Node observes = spec->at("observes");
      CylinderInfo c;
      for (std::size_t k = 0; k < observes.size(); ++k) {
        c.visible.push_back(observes[k].str());
        if (!ids.count(c.visible.back())) observes[k].fail("unknown factor '" + c.visible.back() + "'");
      }
      info.push_back(std::move(c));
    }
  }

  std::shared_ptr<const WModel> model;
  try {
    model = std::make_shared<const WModel>(WModel::build(nature, agents, actions, info));
  } catch (const SelfInformationViolation&) {
    throw;
  } catch (const InvalidArgument& e) {
    n.fail(e.what());
  }

  const Node players_node = n.at("players");
  PlayerPartition players;
  std::vector<PlayerData> data;
  std::vector<Role> roles;
  for (std::size_t i = 0; i < players_node.size(); ++i) {
    const Node p = players_node[i];
    p.only({"id", "role", "sense", "objective", "risk"});
    const auto id = p.at("id").str();
    if (players.player_index(id)) p.at("id").fail("duplicate player '" + id + "'");
    players.players.push_back(id);
    roles.push_back(p.find("role") ? read_role(p.at("role")) : Role::Unspecified);
    const Node objective = p.at("objective");
    if (objective.size() != model->configuration().size())
      objective.fail("expected " + std::to_string(model->configuration().size()) +
                     " values, one per configuration");
    Objective obj{id, read_sense(p.at("sense")), objective.extendeds()};
    RiskMeasure risk = p.find("risk") ? read_risk(p.at("risk"), model->nature())
                                      : RiskMeasure{Expectation{Belief::uniform(model->nature())}};
    data.push_back({std::move(obj), std::move(risk)});
  }
  for (std::size_t a = 0; a < model->agent_count(); ++a) {
    auto q = players.player_index(model->agent(a).player);
    if (!q) agents_node[a].at("player").fail("player '" + model->agent(a).player + "' is not declared");
    players.assignment.push_back(*q);
  }
  try {
    return {make_wgame(model, std::move(players), std::move(data), std::move(roles)), "custom"};
  } catch (const InvalidArgument& e) {
    players_node.fail(e.what());
  }
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json belief_to_json(const Belief& b) {
  if (const auto* j = std::get_if<Belief::Joint>(&b.value())) return {{"joint", j->masses}};
  return {{"product", std::get<Belief::Product>(b.value()).factors}};
}

json factor_to_json(const FiniteFactor& f) {
  json out = {{"id", f.id}, {"label", f.label}};
  if (f.is_nature()) out["kind"] = to_string(f.kind);
  out["elements"] = f.elements;
  return out;
}

}  // namespace

LoadedGame load_game_json(const json& doc) {
  const Node root(doc, "");
  root.only({"version", "builtin", "custom"});
  const Node version = root.at("version");
  if (version.uint() != 1) version.fail("unsupported version (expected 1)");
  if (root.has("builtin") == root.has("custom")) root.fail("expected exactly one of builtin, custom");
  if (root.has("builtin")) return load_builtin(root.at("builtin"));
  return load_custom(root.at("custom"));
}

LoadedGame load_game_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string detail = e.what();
    if (auto pos = detail.find("syntax error"); pos != std::string::npos) detail = detail.substr(pos);
    throw ParseError(source, line, column, detail);
  }
  return load_game_json(doc);
}

LoadedGame load_game(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path, "cannot open game file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_game_text(buf.str(), path);
}

json extended_to_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

json export_game(const WGame& game) {
  const auto& model = *game.model;
  json nature = json::array();
  for (const auto& f : model.nature().factors()) nature.push_back(factor_to_json(f));

  json agents = json::array();
  for (std::size_t a = 0; a < model.agent_count(); ++a) {
    const auto& id = model.agent(a);
    json agent = {{"player", game.players.players[game.players.assignment[a]]}};
    if (id.stage) agent["stage"] = *id.stage;
    agent["actions"] = factor_to_json(model.action_factor(a));
    agent["info"] = {{"atoms", model.info(a).labels()}};
    agents.push_back(std::move(agent));
  }

  json players = json::array();
  for (std::size_t p = 0; p < game.player_count(); ++p) {
    const auto& d = game.data[p];
    json player = {{"id", game.players.players[p]}};
    if (game.roles[p] != Role::Unspecified) player["role"] = to_string(game.roles[p]);
    player["sense"] = to_string(d.objective.sense);
    json values = json::array();
    for (double v : d.objective.values) values.push_back(extended_to_json(v));
    player["objective"] = std::move(values);
    json risk;
    if (const auto* e = std::get_if<Expectation>(&d.risk)) {
      risk = {{"kind", "expectation"}, {"belief", belief_to_json(e->belief)}};
    } else if (const auto* w = std::get_if<WorstCase>(&d.risk)) {
      risk = {{"kind", "worst-case"}};
      if (w->support) risk["support"] = belief_to_json(*w->support);
    } else {
      const auto& c = std::get<CVaR>(d.risk);
      risk = {{"kind", "cvar"}, {"alpha", c.alpha}, {"belief", belief_to_json(c.belief)}};
    }
    player["risk"] = std::move(risk);
    players.push_back(std::move(player));
  }
  return {{"version", 1},
          {"custom", {{"nature", std::move(nature)}, {"agents", std::move(agents)},
                      {"players", std::move(players)}}}};
}

}  // namespace gpf
