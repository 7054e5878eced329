#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "gpf/cli.hpp"
#include "gpf/game_file.hpp"
#include "support.hpp"

using namespace gpf;
namespace fs = std::filesystem;

namespace {

std::string game(const char* name) { return std::string(GPF_GAMES_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = fs::temp_directory_path() / ("gpf_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

nlohmann::json report(const RunResult& r) { return nlohmann::json::parse(r.output); }

}  // namespace

TEST_CASE("nash on the prisoner's dilemma") {
  const auto r = run({"nash", "--game", game("pd.json")});
  CHECK(r.exit_code == 0);
  const auto j = report(r);
  REQUIRE(j["result"]["profiles"].size() == 1);
  CHECK(j["result"]["profiles"][0]["strategies"]["row"] == "D");
  CHECK(j["result"]["profiles"][0]["values"]["col"] == 5);
}

TEST_CASE("theta=1 and optimistic produce identical reports") {
  for (const char* cmd : {"stackelberg", "nash-stackelberg"}) {
    auto a = run({cmd, "--game", game("tou.json"), "--mode", "theta=1"});
    auto b = run({cmd, "--game", game("tou.json"), "--mode", "optimistic"});
    CHECK(a.exit_code == 0);
    const auto strip = [](std::string s) { return s.substr(s.find("\"game\"")); };
    CHECK(strip(a.output) == strip(b.output));
  }
}

TEST_CASE("mutual observation fails playability with a witness") {
  const auto r = run({"playability", "--game", game("mutual_observation.json"), "--mode", "all"});
  CHECK(r.exit_code == 2);
  const auto w = report(r)["validation"]["playability"]["witnesses"];
  REQUIRE(w.size() > 0);
  CHECK(w[0]["solution_count"] == 2);
  const auto sampled = run({"playability", "--game", game("mutual_observation.json"), "--mode",
                            "sample=10,seed=4"});
  CHECK(sampled.output == run({"playability", "--game", game("mutual_observation.json"), "--mode",
                               "sample=10,seed=4"}).output);
}

TEST_CASE("errors carry locations") {
  const auto bad_json = write_temp("bad.json", "{\n  \"version\": 1,\n  oops\n}");
  auto r = run({"validate", "--game", bad_json});
  CHECK(r.exit_code == 2);
  CHECK(report(r)["error"]["location"]["line"] == 3);

  const auto schema = write_temp("schema.json", R"({"version": 1, "builtin": {"model": "tou",
      "params": {"shifts": [0, "x"]}}})");
  r = run({"validate", "--game", schema});
  CHECK(report(r)["error"]["location"]["path"] == "/builtin/params/shifts/1");

  const auto self = write_temp("self.json", R"({"version": 1, "custom": {
      "nature": [{"id": "w", "elements": ["*"]}],
      "agents": [{"player": "p", "actions": {"id": "u", "elements": ["0", "1"]},
                  "info": {"observes": ["u"]}}],
      "players": [{"id": "p", "sense": "cost", "objective": [0, 1]}]}})");
  r = run({"validate", "--game", self});
  CHECK(r.exit_code == 2);
  CHECK(report(r)["error"]["type"] == "self_information_violation");
  CHECK(report(r)["error"]["location"]["agent"] == "p");

  r = run({"stackelberg", "--game", game("tou.json"), "--mode", "sideways"});
  CHECK(r.exit_code == 2);
  CHECK(report(r)["error"]["type"] == "invalid_argument");

  r = run({"frobnicate"});
  CHECK(r.exit_code == 2);
}

TEST_CASE("one-point Nature with a single agent") {
  const auto path = write_temp("single.json", R"({"version": 1, "custom": {
      "nature": [{"id": "w", "elements": ["*"]}],
      "agents": [{"player": "p", "actions": {"id": "u", "elements": ["only"]}}],
      "players": [{"id": "p", "sense": "payoff", "objective": ["-inf"]}]}})");
  const auto r = run({"strategies", "--game", path});
  CHECK(r.exit_code == 0);
  CHECK(report(r)["result"]["players"][0]["strategies"] == 1);
}

TEST_CASE("capacity exceeded exits with 3") {
  const auto r = run({"nash", "--game", game("thai_slsf_st.json"), "--cap", "10"});
  CHECK(r.exit_code == 3);
  CHECK(report(r)["error"]["cap"] == 10);
}

TEST_CASE("export round-trips exactly") {
  const auto r = run({"export", "--game", game("tou.json")});
  REQUIRE(r.exit_code == 0);
  const auto back = load_game_text(r.output);
  const auto orig = load_game(game("tou.json"));
  CHECK(normal_form_matrix(NormalForm(back.game)) == normal_form_matrix(NormalForm(orig.game)));
  CHECK(back.game.roles == orig.game.roles);
}

TEST_CASE("text rendering carries the same numbers") {
  const auto j = run({"normal-form", "--game", game("pd.json")});
  const auto t = run({"normal-form", "--game", game("pd.json"), "--format", "text"});
  CHECK(t.exit_code == 0);
  CHECK(t.output.find("cells: [[[0.5, 0.5], [10, 0]], [[0, 10], [5, 5]]]") != std::string::npos);
  CHECK(report(j)["result"]["cells"][0][1][0] == 10);
}

TEST_CASE("csv export") {
  const auto path = (fs::temp_directory_path() / "gpf_test_pd.csv").string();
  const auto r = run({"normal-form", "--game", game("pd.json"), "--csv", path});
  CHECK(r.exit_code == 0);
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  CHECK(s.str() == ",C,D\nC,0.5;0.5,10;0\nD,0;10,5;5\n");
}

TEST_CASE("mode parsing") {
  CHECK(parse_stackelberg_mode("theta=0").kind == StackelbergMode::Kind::Pessimistic);
  CHECK(parse_stackelberg_mode("theta=0.25").theta == 0.25);
  CHECK(parse_stackelberg_mode("risk=cvar:0.5").alpha == 0.5);
  CHECK_THROWS_AS(parse_stackelberg_mode("theta=abc"), InvalidArgument);
  CHECK(std::holds_alternative<PlayabilityMode::All>(parse_playability_mode("all").value));
  const auto s = std::get<PlayabilityMode::Sample>(parse_playability_mode("sample=5,seed=9").value);
  CHECK(s.count == 5);
  CHECK(s.seed == 9);
  CHECK_THROWS_AS(parse_playability_mode("sample=x"), InvalidArgument);
}
