#pragma once

// Game-definition documents: loading (builtin models or a custom product-form
// description) and exporting any game to the custom schema.

#include <string>

#include "json.hpp"

#include "gpf/errors.hpp"
#include "gpf/preferences.hpp"

namespace gpf {

/// The document does not parse. `line` and `column` are 1-based.
class ParseError : public InvalidArgument {
 public:
  ParseError(std::string source, std::size_t line, std::size_t column, const std::string& detail)
      : InvalidArgument(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                        detail),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// The document parses but does not describe a game. `path` is a JSON
/// pointer to the offending field.
class SchemaError : public InvalidArgument {
 public:
  SchemaError(std::string path, const std::string& detail)
      : InvalidArgument(path + ": " + detail), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct LoadedGame {
  WGame game;
  std::string origin;  // "builtin:<model>" or "custom"
};

LoadedGame load_game_json(const nlohmann::json& doc);
LoadedGame load_game_text(const std::string& text, const std::string& source = "<input>");
LoadedGame load_game(const std::string& path);

/// Custom-schema document reproducing `game` exactly (information fields as
/// explicit atom maps, objective values at round-trip precision).
nlohmann::json export_game(const WGame& game);

/// `inf` / `-inf` as strings, finite values as numbers.
nlohmann::json extended_to_json(double v);

}  // namespace gpf
