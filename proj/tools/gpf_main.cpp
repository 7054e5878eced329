#include <iostream>

#include "gpf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto result = gpf::run(args);
  std::cerr << result.log;
  const bool to_file = [&] {
    for (const auto& a : args)
      if (a == "--out" || a.rfind("--out=", 0) == 0) return true;
    return false;
  }();
  if (!to_file || result.exit_code != gpf::kExitOk) std::cout << result.output;
  return result.exit_code;
}
