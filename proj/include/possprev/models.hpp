#pragma once

#include <cmath>
#include <sstream>
#include <string_view>

#include "possprev/error.hpp"
#include "possprev/possibilistic.hpp"
#include "possprev/random_variable.hpp"
#include "possprev/scenario.hpp"

namespace possprev {

// Expectation of g(base + R) for the period's background risk R under the
// model's layout: plain g(base), M(g(base+X)) or E_f(g(base+A)).
template <class G>
double period_expectation(const Scenario& s, RiskKind kind,
                          const std::optional<BackgroundRisk>& risk, double base, G&& g) {
  switch (kind) {
    case RiskKind::None:
      return g(base);
    case RiskKind::Random:
      return probabilistic_expected_utility(std::get<DiscreteRandomVariable>(*risk),
                                            [&](double x) { return g(base + x); });
    case RiskKind::Fuzzy:
      return possibilistic_expected_utility(std::get<FuzzyNumber>(*risk), s.f,
                                            [&](double x) { return g(base + x); });
  }
  return g(base);
}

// Both sides of a first-order condition at effort e:
//   lhs = period-1 expected marginal utility  (u', M(u'), or E_f(u'))
//   rhs = p'(e) · [loss-state minus no-loss-state period-2 expected utility]
// V'(e) = rhs - lhs.
struct FocSides {
  double lhs;
  double rhs;
  double residual() const { return rhs - lhs; }
  double relative_residual() const { return std::abs(rhs - lhs) / std::abs(lhs); }
};

// A scenario validated for one model. The period-2 utility gap does not
// depend on effort and is computed once.
class PreparedModel {
 public:
  PreparedModel(const Scenario& s, ModelId m) : s_(&s), model_(m), layout_(layout(m)) {
    validate(s, m);
    upper_bound_ = effort_upper_bound(s, m);
    auto v = [&](double x) { return s.v(x); };
    loss_state_ = period_expectation(s, layout_.period2, s.risk2, s.w2 - s.loss, v);
    safe_state_ = period_expectation(s, layout_.period2, s.risk2, s.w2, v);
  }

  ModelId model() const noexcept { return model_; }
  double upper_bound() const noexcept { return upper_bound_; }

  // [P2 v](w2 - l) - [P2 v](w2), negative under v' > 0.
  double period2_gap() const noexcept { return loss_state_ - safe_state_; }

  double total_utility(double e) const {
    check_effort(e);
    const Scenario& s = *s_;
    const double first = period_expectation(s, layout_.period1, s.risk1, s.w1 - e,
                                            [&](double x) { return s.u(x); });
    const double prob = s.p(e);
    return first + prob * loss_state_ + (1.0 - prob) * safe_state_;
  }

  double period1_marginal(double e) const {
    check_effort(e);
    const Scenario& s = *s_;
    return period_expectation(s, layout_.period1, s.risk1, s.w1 - e,
                              [&](double x) { return s.u.d1(x); });
  }

  FocSides foc_sides(double e) const {
    return {period1_marginal(e), s_->p.d1(e) * period2_gap()};
  }

  double marginal_utility(double e) const { return foc_sides(e).residual(); }

 private:
  void check_effort(double e) const {
    if (!(e >= 0.0 && e <= upper_bound_)) {
      std::ostringstream os;
      os << "scenario '" << s_->id << "': effort " << e << " outside [0, " << upper_bound_
         << "] for model " << to_string(model_);
      throw DomainError(os.str(), e);
    }
  }

  const Scenario* s_;
  ModelId model_;
  RiskLayout layout_;
  double upper_bound_ = 0.0;
  double loss_state_ = 0.0;
  double safe_state_ = 0.0;
};

inline double total_utility(const Scenario& s, ModelId m, double e) {
  return PreparedModel(s, m).total_utility(e);
}

inline double marginal_utility(const Scenario& s, ModelId m, double e) {
  return PreparedModel(s, m).marginal_utility(e);
}

enum class Corner { Interior, AtZero, AtUpperBound };

inline std::string_view to_string(Corner c) {
  switch (c) {
    case Corner::Interior: return "interior";
    case Corner::AtZero: return "at_zero";
    case Corner::AtUpperBound: return "at_upper_bound";
  }
  return "?";
}

struct SolveResult {
  ModelId model;
  double e_star;
  double foc_residual;  // V'(e*)
  Corner corner;
  double v_prime_at_zero;
  double upper_bound;
  int iterations = 0;
};

struct SolverOptions {
  double residual_tolerance = 1e-10;  // |V'(e*)| bound reported for interior optima
  double bracket_tolerance = 1e-12;
  int max_iterations = 400;
};

// Maximizes V_m over [0, upper bound] by bisection on the strictly decreasing
// V'_m. Bisection runs until the bracket is below bracket_tolerance; stopping
// on |V'| alone would leave a relative FOC error of order tolerance/u'.
inline SolveResult solve_optimal(const Scenario& s, ModelId m, const SolverOptions& opts = {}) {
  const PreparedModel model(s, m);
  SolveResult out{m, 0.0, 0.0, Corner::Interior, 0.0, model.upper_bound(), 0};
  const double d0 = model.marginal_utility(0.0);
  out.v_prime_at_zero = d0;
  if (d0 <= 0.0) {
    out.corner = Corner::AtZero;
    out.foc_residual = d0;
    return out;
  }
  const double d_hi = model.marginal_utility(model.upper_bound());
  if (d_hi >= 0.0) {
    out.corner = Corner::AtUpperBound;
    out.e_star = model.upper_bound();
    out.foc_residual = d_hi;
    return out;
  }
  double lo = 0.0;
  double hi = model.upper_bound();
  double mid = 0.5 * (lo + hi);
  double d_mid = model.marginal_utility(mid);
  int iter = 0;
  while (hi - lo > opts.bracket_tolerance && iter < opts.max_iterations) {
    ++iter;
    if (d_mid == 0.0) break;
    if (d_mid > 0.0) lo = mid; else hi = mid;
    const double next = 0.5 * (lo + hi);
    if (next == lo || next == hi) break;
    mid = next;
    d_mid = model.marginal_utility(mid);
  }
  if (std::abs(d_mid) > opts.residual_tolerance) {
    std::ostringstream os;
    os << "scenario '" << s.id << "': bisection for model " << to_string(m)
       << " ended with |V'| = " << std::abs(d_mid) << " above tolerance";
    throw InternalError(os.str());
  }
  out.e_star = mid;
  out.foc_residual = d_mid;
  out.iterations = iter;
  return out;
}

}  // namespace possprev
