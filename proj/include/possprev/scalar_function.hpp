#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "possprev/error.hpp"

namespace possprev {

// Open interval (lo, hi). Infinite bounds are allowed.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const noexcept { return x > lo && x < hi; }
  static Interval real_line() noexcept { return {}; }
};

// A real map with a validity interval. Calls outside the interval throw
// DomainError instead of producing NaN.
class ScalarFunction {
 public:
  ScalarFunction(std::function<double(double)> fn, Interval domain,
                 std::string name = "f")
      : fn_(std::move(fn)), domain_(domain), name_(std::move(name)) {}

  double operator()(double x) const {
    if (!std::isfinite(x) || !domain_.contains(x)) {
      std::ostringstream os;
      os << name_ << " evaluated at " << x << " outside its domain ("
         << domain_.lo << ", " << domain_.hi << ")";
      throw DomainError(os.str(), x);
    }
    return fn_(x);
  }

  const Interval& domain() const noexcept { return domain_; }
  const std::string& name() const noexcept { return name_; }

  static ScalarFunction identity() {
    return {[](double x) { return x; }, Interval::real_line(), "identity"};
  }

 private:
  std::function<double(double)> fn_;
  Interval domain_;
  std::string name_;
};

}  // namespace possprev
