#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "possprev/error.hpp"
#include "possprev/fuzzy_number.hpp"
#include "possprev/random_variable.hpp"
#include "possprev/scenario.hpp"
#include "possprev/weighting.hpp"

// Brute-force reference computations. Nothing here calls the quadrature,
// expectation or solver code of the main path: level sets and weights are
// sampled directly, discrete sums are accumulated in long double, and optima
// are found by scanning a grid of total utility values.
namespace possprev::oracle {

struct OracleConfig {
  long gamma_grid_size = 10000;    // midpoint cells on [0,1], >= 1e4
  double effort_grid_step = 1e-4;  // argmax grid step, <= 1e-4
};

// Observed |main - oracle| gaps of a cross-validation run.
struct ToleranceReport {
  std::vector<double> gaps;

  void record(double main_value, double oracle_value) {
    gaps.push_back(std::abs(main_value - oracle_value));
  }
  double worst() const {
    return gaps.empty() ? 0.0 : *std::max_element(gaps.begin(), gaps.end());
  }
};

// Midpoint nodes (γ, f(γ) h) on [0,1]. A power law with k < 1 is integrated
// in t = γ^{k+1}, where dt = f dγ, so the midpoint rule sees no weight
// singularity.
inline std::vector<std::pair<double, long double>> gamma_nodes(const WeightingFunction& f,
                                                              const OracleConfig& cfg) {
  const long n = cfg.gamma_grid_size;
  const long double h = 1.0L / static_cast<long double>(n);
  const auto* pl = std::get_if<WeightingFunction::PowerLaw>(&f.family());
  if (pl != nullptr && pl->exponent >= 1.0) pl = nullptr;
  std::vector<std::pair<double, long double>> nodes;
  nodes.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const long double t = (static_cast<long double>(i) + 0.5L) * h;
    if (pl != nullptr) {
      nodes.emplace_back(static_cast<double>(std::pow(t, 1.0L / (pl->exponent + 1.0L))), h);
    } else {
      const double gamma = static_cast<double>(t);
      nodes.emplace_back(gamma, f(gamma) * h);
    }
  }
  return nodes;
}

// Midpoint rule for ½ ∫ [u(a1)+u(a2)] f dγ.
template <class U>
double expected_utility(const FuzzyNumber& a, const WeightingFunction& f, U&& u,
                        const OracleConfig& cfg = {}) {
  long double sum = 0.0L;
  for (const auto& [gamma, w] : gamma_nodes(f, cfg)) {
    const LevelSet cut = a.level_set(gamma);
    sum += 0.5L * (static_cast<long double>(u(cut.lo)) + u(cut.hi)) * w;
  }
  return static_cast<double>(sum);
}

inline double expected_value(const FuzzyNumber& a, const WeightingFunction& f,
                             const OracleConfig& cfg = {}) {
  return expected_utility(a, f, [](double x) { return x; }, cfg);
}

// Exhaustive Σ p g(x) in extended precision.
template <class G>
double discrete_expectation(const DiscreteRandomVariable& x, G&& g) {
  long double sum = 0.0L;
  for (const auto& o : x.outcomes()) {
    sum += static_cast<long double>(o.probability) * g(o.value);
  }
  return static_cast<double>(sum);
}

// Total utility of one model, assembled from tabulated level sets / outcomes.
class TotalUtility {
 public:
  TotalUtility(const Scenario& s, ModelId m, const OracleConfig& cfg) : s_(s) {
    const RiskLayout lay = layout(m);
    if (kind_of(s.risk1) != lay.period1 && lay.period1 != RiskKind::None) {
      throw ModelMismatchError("oracle: scenario lacks the model's period-1 risk");
    }
    if (kind_of(s.risk2) != lay.period2 && lay.period2 != RiskKind::None) {
      throw ModelMismatchError("oracle: scenario lacks the model's period-2 risk");
    }
    first_ = tabulate(lay.period1, s.risk1, s.f, cfg);
    second_ = tabulate(lay.period2, s.risk2, s.f, cfg);
    auto v_of = [&](double base) {
      long double sum = 0.0L;
      for (const auto& [offset, weight] : second_) sum += weight * s.v(base + offset);
      return sum;
    };
    loss_state_ = v_of(s.w2 - s.loss);
    safe_state_ = v_of(s.w2);
    const double worst = lay.period1 == RiskKind::None ? 0.0 : min_offset(first_);
    upper_ = s.w1 + worst - std::max(0.0, s.u.domain().lo) - kEffortMargin;
  }

  double operator()(double e) const {
    long double first = 0.0L;
    for (const auto& [offset, weight] : first_) first += weight * s_.u(s_.w1 - e + offset);
    const long double prob = s_.p(e);
    return static_cast<double>(first + prob * loss_state_ + (1.0L - prob) * safe_state_);
  }

  double upper_bound() const noexcept { return upper_; }

 private:
  using Atoms = std::vector<std::pair<double, long double>>;

  // The period's risk as (offset, weight) atoms: one per outcome, or two per
  // midpoint node carrying half its weight.
  static Atoms tabulate(RiskKind kind, const std::optional<BackgroundRisk>& risk,
                        const WeightingFunction& f, const OracleConfig& cfg) {
    Atoms atoms;
    if (kind == RiskKind::None) {
      atoms.emplace_back(0.0, 1.0L);
    } else if (kind == RiskKind::Random) {
      for (const auto& o : std::get<DiscreteRandomVariable>(*risk).outcomes()) {
        atoms.emplace_back(o.value, o.probability);
      }
    } else {
      const auto& a = std::get<FuzzyNumber>(*risk);
      for (const auto& [gamma, w] : gamma_nodes(f, cfg)) {
        const LevelSet cut = a.level_set(gamma);
        atoms.emplace_back(cut.lo, 0.5L * w);
        atoms.emplace_back(cut.hi, 0.5L * w);
      }
    }
    return atoms;
  }

  static double min_offset(const Atoms& atoms) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& [offset, w] : atoms) lo = std::min(lo, offset);
    return lo;
  }

  const Scenario& s_;
  Atoms first_;
  Atoms second_;
  long double loss_state_ = 0.0L;
  long double safe_state_ = 0.0L;
  double upper_ = 0.0;
};

// Grid maximizer of V_m on {0, h, 2h, ...} ∩ [0, upper bound], h the
// configured step. The scan starts on a coarse grid covering the whole effort
// range and rescans ±3 cells around the best point at 10x finer steps until
// it reaches h; under concavity this returns the fine-grid argmax.
inline double argmax(const Scenario& s, ModelId m, const OracleConfig& cfg = {}) {
  const TotalUtility total(s, m, cfg);
  const double upper = total.upper_bound();
  const double h = cfg.effort_grid_step;
  auto cells = [&](double step) { return static_cast<long>(std::floor(upper / step)); };

  double step = h;
  while (cells(step) > 200) step *= 10.0;

  long best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  long lo = 0;
  long hi = cells(step);
  for (;;) {
    for (long i = lo; i <= hi; ++i) {
      const double value = total(std::min(static_cast<double>(i) * step, upper));
      if (value > best_value) {
        best_value = value;
        best = i;
      }
    }
    if (step <= h * 1.0000001) break;
    const long ratio = 10;
    step /= 10.0;
    best *= ratio;
    lo = std::max(0L, best - 3 * ratio);
    hi = std::min(cells(step), best + 3 * ratio);
    best_value = -std::numeric_limits<double>::infinity();
  }
  return std::min(static_cast<double>(best) * step, upper);
}

}  // namespace possprev::oracle
