#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "possprev/error.hpp"
#include "possprev/models.hpp"
#include "possprev/possibilistic.hpp"
#include "possprev/scenario.hpp"

namespace possprev {

namespace sampling {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}
inline int pick(std::mt19937_64& rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

inline LossProbability loss_probability(std::mt19937_64& rng) {
  if (pick(rng, 2) == 0) {
    return LossProbability::exponential(uniform(rng, 0.05, 0.9), uniform(rng, 0.2, 3.0));
  }
  return LossProbability::rational(uniform(rng, 0.05, 0.9), uniform(rng, 0.5, 4.0));
}

inline WeightingFunction weighting(std::mt19937_64& rng) {
  switch (pick(rng, 5)) {
    case 0: return WeightingFunction::uniform();
    case 1: return WeightingFunction::power_law(static_cast<double>(1 + pick(rng, 3)));
    case 2: return WeightingFunction::power_law(uniform(rng, 1.0, 4.0));
    case 3: return WeightingFunction::power_law(uniform(rng, 0.05, 1.0));
    default: {
      // Random non-decreasing table, normalized by its own trapezoid mass.
      std::vector<std::pair<double, double>> rows;
      double level = uniform(rng, 0.0, 0.5);
      for (int i = 0; i <= 10; ++i) {
        rows.emplace_back(i / 10.0, level);
        level += uniform(rng, 0.0, 0.5);
      }
      double mass = 0.0;
      for (std::size_t i = 1; i < rows.size(); ++i) {
        mass += 0.05 * (rows[i].second + rows[i - 1].second);
      }
      for (auto& r : rows) r.second /= mass;
      return WeightingFunction::tabulated(std::move(rows));
    }
  }
}

// Triangular, trapezoidal or sampled fuzzy number with spreads up to
// max_spread; either shifted to E_f = 0 or given a random offset.
inline FuzzyNumber fuzzy(std::mt19937_64& rng, double max_spread, const WeightingFunction& f,
                       bool zero_mean, bool crisp = false) {
  if (crisp) {
    return FuzzyNumber::crisp(zero_mean ? 0.0 : uniform(rng, -0.5, 0.5) * max_spread);
  }
  const double left = uniform(rng, 0.0, max_spread);
  const double right = uniform(rng, 0.0, max_spread);
  FuzzyNumber a = FuzzyNumber::crisp(0.0);
  switch (pick(rng, 3)) {
    case 0: a = FuzzyNumber::triangular(0.0, left, right); break;
    case 1: {
      const double core = uniform(rng, 0.0, 0.5) * std::min(left, right);
      a = FuzzyNumber::trapezoidal(-0.5 * core, 0.5 * core, left - 0.5 * core,
                                   right - 0.5 * core);
      break;
    }
    default: {
      // Curved flanks a1 = -L(1-γ)^q, a2 = R(1-γ)^r on 11 rows.
      const double q = uniform(rng, 0.5, 2.0);
      const double r = uniform(rng, 0.5, 2.0);
      std::vector<std::array<double, 3>> rows;
      for (int i = 0; i <= 10; ++i) {
        const double g = i / 10.0;
        rows.push_back({g, -left * std::pow(1.0 - g, q), right * std::pow(1.0 - g, r)});
      }
      a = FuzzyNumber::sampled(rows);
      break;
    }
  }
  if (zero_mean) return a.shifted(-possibilistic_expected_value(a, f));
  return a.shifted(uniform(rng, -0.5, 0.5) * max_spread);
}

// Two-point, three-point or discretized-normal variable with spread up to
// max_spread.
inline DiscreteRandomVariable random_variable(std::mt19937_64& rng, double max_spread,
                                           bool zero_mean, bool crisp = false) {
  if (crisp) {
    return DiscreteRandomVariable::point_mass(zero_mean ? 0.0 : uniform(rng, -0.5, 0.5) * max_spread);
  }
  DiscreteRandomVariable x = DiscreteRandomVariable::point_mass(0.0);
  switch (pick(rng, 3)) {
    case 0: {
      const double q = uniform(rng, 0.2, 0.8);
      x = DiscreteRandomVariable(
          {{-uniform(rng, 0.0, max_spread), q}, {uniform(rng, 0.0, max_spread), 1.0 - q}});
      break;
    }
    case 1: {
      const double p1 = uniform(rng, 0.1, 0.5);
      const double p2 = uniform(rng, 0.1, 0.4);
      x = DiscreteRandomVariable({{-uniform(rng, 0.0, max_spread), p1},
                                  {uniform(rng, -0.2, 0.2) * max_spread, p2},
                                  {uniform(rng, 0.0, max_spread), 1.0 - p1 - p2}});
      break;
    }
    default: {
      const int nodes = 3 + 2 * pick(rng, 3);
      x = discretize_normal(0.0, uniform(rng, 0.01, 0.25) * max_spread, nodes);
      break;
    }
  }
  if (zero_mean) return x.shifted(-expected_value(x));
  return x.shifted(uniform(rng, -0.5, 0.5) * max_spread);
}

// Log, CRRA or CARA; also quadratic (valid up to ~wealth_ceiling) unless
// prudent_only.
inline UtilityFunction utility(std::mt19937_64& rng, double wealth_ceiling, bool prudent_only) {
  const int families = prudent_only ? 3 : 4;
  switch (pick(rng, families)) {
    case 0: return UtilityFunction::log();
    case 1: {
      double eta = uniform(rng, 0.3, 4.0);
      if (std::abs(eta - 1.0) < 1e-3) eta = 1.5;
      return UtilityFunction::crra(eta);
    }
    case 2: return UtilityFunction::cara(uniform(rng, 0.02, 0.4));
    default: return UtilityFunction::quadratic(1.0 / (2.0 * wealth_ceiling * uniform(rng, 1.2, 3.0)));
  }
}

}  // namespace sampling

struct EnsembleOptions {
  RiskKind risk1 = RiskKind::None;
  RiskKind risk2 = RiskKind::None;
  bool zero_mean = false;     // shift risks so E_f(A) = 0 / M(X) = 0
  bool prudent_only = true;   // exclude quadratic utility
  bool crisp = false;         // zero-spread fuzzy numbers, point-mass random variables
  double spread_fraction = 0.3;  // risk spreads <= fraction * min(w1, w2)
  std::vector<ModelId> require_interior;  // redraw until these have interior optima
  int max_attempts = 2000;
};

// Deterministic random scenarios: scenario i depends only on (seed, i), so
// ensembles can be generated and solved in any order.
//
// Wealths are drawn from [5, 50], l from (0, 0.8 w2], spreads up to
// spread_fraction * min(w1, w2). Draws whose wealth range leaves a utility
// domain are rejected and redrawn.
class ScenarioGenerator {
 public:
  ScenarioGenerator(std::uint64_t seed, EnsembleOptions options)
      : seed_(seed), options_(std::move(options)) {}

  Scenario at(long index) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
    std::mt19937_64 rng(seq);
    for (int attempt = 0; attempt < options_.max_attempts; ++attempt) {
      Scenario s = draw(rng, index);
      if (acceptable(s)) return s;
    }
    throw InternalError("scenario generator exhausted its attempts at index " +
                        std::to_string(index));
  }

  const EnsembleOptions& options() const noexcept { return options_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::optional<BackgroundRisk> draw_risk(std::mt19937_64& rng, RiskKind kind, double max_spread,
                                          const WeightingFunction& f) const {
    switch (kind) {
      case RiskKind::None: return std::nullopt;
      case RiskKind::Fuzzy:
        return BackgroundRisk(
            sampling::fuzzy(rng, max_spread, f, options_.zero_mean, options_.crisp));
      case RiskKind::Random:
        return BackgroundRisk(
            sampling::random_variable(rng, max_spread, options_.zero_mean, options_.crisp));
    }
    return std::nullopt;
  }

  Scenario draw(std::mt19937_64& rng, long index) const {
    const double w1 = sampling::uniform(rng, 5.0, 50.0);
    const double w2 = sampling::uniform(rng, 5.0, 50.0);
    const double loss = sampling::uniform(rng, 0.0, 0.8 * w2);
    const double max_spread = options_.spread_fraction * std::min(w1, w2);
    const double ceiling = std::max(w1, w2) + max_spread;
    WeightingFunction f = sampling::weighting(rng);
    UtilityFunction u = sampling::utility(rng, ceiling, options_.prudent_only);
    UtilityFunction v = sampling::utility(rng, ceiling, options_.prudent_only);
    LossProbability p = sampling::loss_probability(rng);
    auto risk1 = draw_risk(rng, options_.risk1, max_spread, f);
    auto risk2 = draw_risk(rng, options_.risk2, max_spread, f);
    return Scenario{"gen-" + std::to_string(seed_) + "-" + std::to_string(index),
                    w1, w2, loss > 0.0 ? loss : 0.5 * w2, u, v, p, f, risk1, risk2};
  }

  bool acceptable(const Scenario& s) const {
    try {
      for (ModelId m : kAllModels) {
        const RiskLayout lay = layout(m);
        if ((lay.period1 != RiskKind::None && lay.period1 != options_.risk1) ||
            (lay.period2 != RiskKind::None && lay.period2 != options_.risk2)) {
          continue;
        }
        validate(s, m);
      }
      for (ModelId m : options_.require_interior) {
        if (solve_optimal(s, m).corner != Corner::Interior) return false;
      }
    } catch (const Error&) {
      return false;
    }
    return true;
  }

  std::uint64_t seed_;
  EnsembleOptions options_;
};

}  // namespace possprev
