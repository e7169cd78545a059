#pragma once

#include <string>

#include "hypcyl/errors.hpp"

namespace hypcyl {

// Monotone step counter for bounded searches. A negative limit means
// unlimited. Ticking past the limit throws BudgetError; the catch site is
// responsible for attaching any partial result it can certify.
class BudgetMeter {
public:
  explicit BudgetMeter(long long limit, std::string label = "search")
      : limit_(limit), label_(std::move(label)) {}

  void tick(long long n = 1) {
    used_ += n;
    if (limit_ >= 0 && used_ > limit_) {
      throw BudgetError(label_ + ": budget of " + std::to_string(limit_) +
                        " steps exhausted");
    }
  }

  long long used() const { return used_; }
  long long limit() const { return limit_; }

private:
  long long limit_;
  std::string label_;
  long long used_ = 0;
};

}  // namespace hypcyl
