#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hypcyl {

// Exit codes shared by the CLI and the test drivers.
// 0 success, 1 input error, 2 budget exhausted, 3 invariant violation.
enum class ExitCode : int { ok = 0, input = 1, budget = 2, invariant = 3 };

// Malformed or out-of-contract input (bad files, unknown vertices,
// degenerate profiles, violated preconditions).
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Exact integer arithmetic overflowed. Constants are evaluated with checked
// 64-bit arithmetic and fail loudly instead of wrapping.
class ArithmeticError : public InputError {
public:
  explicit ArithmeticError(const std::string& what) : InputError(what) {}
};

// A bounded search ran out of budget. Searches that can certify a partial
// result attach it here: `partial` lists certified items (formatted), and
// `lower_bound` carries the best bound found so far when that is the result
// shape (e.g. a hyperbolicity scan).
class BudgetError : public std::runtime_error {
public:
  explicit BudgetError(const std::string& what,
                       std::vector<std::string> partial = {},
                       long long lower_bound = -1)
      : std::runtime_error(what),
        partial_(std::move(partial)),
        lower_bound_(lower_bound) {}

  const std::vector<std::string>& partial() const { return partial_; }
  long long lower_bound() const { return lower_bound_; }

private:
  std::vector<std::string> partial_;
  long long lower_bound_;
};

// An internal consistency check failed: a bound from the construction was
// exceeded or two routes to the same object disagreed. Signals a bug or a
// profile/cylinder mismatch, never a user typo.
class InvariantError : public std::runtime_error {
public:
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hypcyl
