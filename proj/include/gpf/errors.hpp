#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two structures that must live on the same product space do not.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured cap.
class CapacityExceeded : public Error {
 public:
  CapacityExceeded(std::string what, std::uint64_t requested, std::uint64_t cap)
      : Error(what + ": " + std::to_string(requested) + " exceeds cap " +
              std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}
  // `requested` saturates at UINT64_MAX when the true count overflows.
  std::uint64_t requested() const { return requested_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t requested_;
  std::uint64_t cap_;
};

/// An agent's information field distinguishes configurations that differ
/// only in that agent's own action.
class SelfInformationViolation : public Error {
 public:
  SelfInformationViolation(std::string agent, std::size_t first,
                           std::size_t second)
      : Error("agent '" + agent +
              "' observes its own action: configurations " +
              std::to_string(first) + " and " + std::to_string(second) +
              " differ only in its action but lie in different atoms"),
        agent_(std::move(agent)),
        first_(first),
        second_(second) {}
  const std::string& agent() const { return agent_; }
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::string agent_;
  std::size_t first_;
  std::size_t second_;
};

/// The closed-loop equation u = λ(ω, u) does not have exactly one solution.
class NotPlayable : public Error {
 public:
  NotPlayable(std::size_t nature_index, std::size_t solutions)
      : Error("closed-loop equation at nature point " +
              std::to_string(nature_index) + " has " +
              std::to_string(solutions) + " solutions (expected 1)"),
        nature_index_(nature_index),
        solutions_(solutions) {}
  std::size_t nature_index() const { return nature_index_; }
  std::size_t solutions() const { return solutions_; }

 private:
  std::size_t nature_index_;
  std::size_t solutions_;
};

/// +inf and -inf both carry positive weight in an averaging risk measure.
class IndeterminateValue : public Error {
 public:
  using Error::Error;
};

/// The followers have no (Nash) best response to a leader profile.
class EmptyFollowerResponse : public Error {
 public:
  explicit EmptyFollowerResponse(std::vector<std::uint64_t> leaders)
      : Error("followers have no best response to leader profile " +
              render(leaders)),
        leaders_(std::move(leaders)) {}
  const std::vector<std::uint64_t>& leaders() const { return leaders_; }

 private:
  static std::string render(const std::vector<std::uint64_t>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(v[i]);
    }
    return s + ")";
  }
  std::vector<std::uint64_t> leaders_;
};

class NotTwoPlayers : public Error {
 public:
  explicit NotTwoPlayers(std::size_t players)
      : Error("normal-form matrix export needs exactly 2 players, game has " +
              std::to_string(players)),
        players_(players) {}
  std::size_t players() const { return players_; }

 private:
  std::size_t players_;
};

}  // namespace gpf
