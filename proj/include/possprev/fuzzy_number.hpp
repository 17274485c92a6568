#pragma once

#include <algorithm>
#include <array>
#include <initializer_list>
#include <cmath>
#include <sstream>
#include <variant>
#include <vector>

#include "possprev/error.hpp"

namespace possprev {

// Closed interval [lo, hi] returned by a γ-cut.
struct LevelSet {
  double lo;
  double hi;
};

// A fuzzy number given by its level sets γ ↦ [a1(γ), a2(γ)], plus a crisp
// shift applied to both endpoints.
class FuzzyNumber {
 public:
  struct Triangular {
    double center;
    double left_spread;
    double right_spread;
  };
  struct Trapezoidal {
    double core_left;
    double core_right;
    double left_spread;
    double right_spread;
  };
  struct Sampled {
    std::vector<double> gamma;
    std::vector<double> lo;
    std::vector<double> hi;
  };
  using Family = std::variant<Triangular, Trapezoidal, Sampled>;

  static constexpr double kNestingSlack = 1e-12;

  static FuzzyNumber triangular(double center, double left, double right,
                                double shift = 0.0) {
    check_finite({center, left, right, shift});
    if (left < 0.0 || right < 0.0) {
      throw ValidationError("triangular spreads must be non-negative");
    }
    return FuzzyNumber(Triangular{center, left, right}, shift);
  }

  static FuzzyNumber trapezoidal(double core_left, double core_right, double left,
                                 double right, double shift = 0.0) {
    check_finite({core_left, core_right, left, right, shift});
    if (left < 0.0 || right < 0.0) {
      throw ValidationError("trapezoidal spreads must be non-negative");
    }
    if (core_left > core_right) {
      throw ValidationError("trapezoidal core must satisfy core_left <= core_right");
    }
    return FuzzyNumber(Trapezoidal{core_left, core_right, left, right}, shift);
  }

  // Rows (γ, a1, a2); linear interpolation between rows.
  static FuzzyNumber sampled(const std::vector<std::array<double, 3>>& rows,
                             double shift = 0.0) {
    if (rows.size() < 3) {
      throw ValidationError("sampled fuzzy number needs at least 3 rows");
    }
    Sampled s;
    for (const auto& r : rows) {
      check_finite({r[0], r[1], r[2]});
      s.gamma.push_back(r[0]);
      s.lo.push_back(r[1]);
      s.hi.push_back(r[2]);
    }
    check_finite({shift});
    if (s.gamma.front() != 0.0 || s.gamma.back() != 1.0) {
      throw ValidationError("sampled level-set grid must start at 0 and end at 1");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (s.lo[i] > s.hi[i] + kNestingSlack) {
        std::ostringstream os;
        os << "sampled level set at gamma=" << s.gamma[i] << " has a1 > a2";
        throw ValidationError(os.str());
      }
      if (i == 0) continue;
      if (s.gamma[i] <= s.gamma[i - 1]) {
        throw ValidationError("sampled level-set grid must be strictly increasing");
      }
      if (s.lo[i] < s.lo[i - 1] - kNestingSlack ||
          s.hi[i] > s.hi[i - 1] + kNestingSlack) {
        std::ostringstream os;
        os << "sampled level sets are not nested at gamma=" << s.gamma[i];
        throw ValidationError(os.str());
      }
    }
    return FuzzyNumber(std::move(s), shift);
  }

  static FuzzyNumber crisp(double value) { return triangular(value, 0.0, 0.0); }

  LevelSet level_set(double gamma) const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
      std::ostringstream os;
      os << "level set requested at gamma=" << gamma << " outside [0,1]";
      throw DomainError(os.str(), gamma);
    }
    LevelSet cut = std::visit(
        [gamma](const auto& fam) -> LevelSet {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Triangular>) {
            return {fam.center - fam.left_spread * (1.0 - gamma),
                    fam.center + fam.right_spread * (1.0 - gamma)};
          } else if constexpr (std::is_same_v<T, Trapezoidal>) {
            return {fam.core_left - fam.left_spread * (1.0 - gamma),
                    fam.core_right + fam.right_spread * (1.0 - gamma)};
          } else {
            return interpolate(fam, gamma);
          }
        },
        family_);
    return {cut.lo + shift_, cut.hi + shift_};
  }

  // [a1(0), a2(0)]
  LevelSet support() const { return level_set(0.0); }

  FuzzyNumber shifted(double offset) const {
    FuzzyNumber copy = *this;
    copy.shift_ += offset;
    return copy;
  }

  bool is_crisp() const {
    const LevelSet s = support();
    return s.lo == s.hi;
  }

  const Family& family() const noexcept { return family_; }
  double shift() const noexcept { return shift_; }

  std::vector<double> breakpoints() const {
    if (const auto* s = std::get_if<Sampled>(&family_)) return s->gamma;
    return {};
  }

 private:
  FuzzyNumber(Family fam, double shift) : family_(std::move(fam)), shift_(shift) {}

  static void check_finite(std::initializer_list<double> xs) {
    for (double x : xs) {
      if (!std::isfinite(x)) throw ValidationError("fuzzy number has non-finite parameter");
    }
  }

  static LevelSet interpolate(const Sampled& s, double gamma) {
    auto it = std::upper_bound(s.gamma.begin(), s.gamma.end(), gamma);
    if (it == s.gamma.end()) return {s.lo.back(), s.hi.back()};
    const auto hi = static_cast<std::size_t>(it - s.gamma.begin());
    const auto lo = hi - 1;
    const double t = (gamma - s.gamma[lo]) / (s.gamma[hi] - s.gamma[lo]);
    return {s.lo[lo] + t * (s.lo[hi] - s.lo[lo]), s.hi[lo] + t * (s.hi[hi] - s.hi[lo])};
  }

  Family family_;
  double shift_ = 0.0;
};

}  // namespace possprev
