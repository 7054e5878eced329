#pragma once

// Command runner behind the gpf executable. Reports are built as one JSON
// document; the text rendering is derived from it.

#include <string>
#include <vector>

#include "json.hpp"

#include "gpf/equilibria.hpp"

namespace gpf {

enum ExitCode { kExitOk = 0, kExitInvalid = 2, kExitCapacity = 3 };

struct RunResult {
  std::string output;  // report, game document, or help text
  int exit_code = kExitOk;
  std::string log;     // diagnostics for stderr
};

/// Runs one command; `args` excludes the program name. Never throws on bad
/// input: every failure becomes a report with an `error` section.
RunResult run(const std::vector<std::string>& args);

/// optimistic | pessimistic | theta=T | risk=expectation | risk=worst | risk=cvar:A.
/// theta=1 and theta=0 are the optimistic and pessimistic modes.
StackelbergMode parse_stackelberg_mode(const std::string& text);

/// all | sample=N,seed=S
PlayabilityMode parse_playability_mode(const std::string& text);

/// Values rounded to 12 significant digits; infinities as "inf" / "-inf".
nlohmann::ordered_json report_number(double v);

std::string render_text(const nlohmann::ordered_json& report);

}  // namespace gpf
