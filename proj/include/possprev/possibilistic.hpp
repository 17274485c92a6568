#pragma once

#include <sstream>
#include <utility>

#include "possprev/error.hpp"
#include "possprev/fuzzy_number.hpp"
#include "possprev/scalar_function.hpp"
#include "possprev/weighting.hpp"

namespace possprev {

// E_f(u(A)) = ½ ∫₀¹ [u(a1(γ)) + u(a2(γ))] f(γ) dγ
//
// `u` is any callable double -> double. A DomainError raised by `u` is
// rethrown with the offending γ and endpoint attached.
template <class U>
double possibilistic_expected_utility(const FuzzyNumber& a, const WeightingFunction& f,
                                      U&& u) {
  const auto grid = a.breakpoints();
  auto integrand = [&](double gamma) {
    const LevelSet cut = a.level_set(gamma);
    double lo_value;
    double hi_value;
    try {
      lo_value = u(cut.lo);
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << e.what() << " (left endpoint a1 at gamma=" << gamma << ")";
      throw DomainError(os.str(), cut.lo);
    }
    try {
      hi_value = u(cut.hi);
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << e.what() << " (right endpoint a2 at gamma=" << gamma << ")";
      throw DomainError(os.str(), cut.hi);
    }
    return 0.5 * (lo_value + hi_value);
  };
  return f.integrate(integrand, grid);
}

// E_f(A) = ½ ∫₀¹ [a1(γ) + a2(γ)] f(γ) dγ
inline double possibilistic_expected_value(const FuzzyNumber& a,
                                           const WeightingFunction& f) {
  const auto grid = a.breakpoints();
  return f.integrate(
      [&](double gamma) {
        const LevelSet cut = a.level_set(gamma);
        return 0.5 * (cut.lo + cut.hi);
      },
      grid);
}

}  // namespace possprev
