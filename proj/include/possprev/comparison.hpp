#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "possprev/error.hpp"
#include "possprev/models.hpp"

namespace possprev {

// Comparison results between the benchmark and the background-risk models,
// and between single-risk and two-risk models.
enum class ConditionId {
  P5_1, C5_2, P5_3, L5_4, C5_5, P5_6, R5_7, P5_8, R5_9, P5_10, R5_11,
  P6_1, C6_2, P6_3, C6_4, P6_5, C6_6, GenericPair
};

inline std::string_view to_string(ConditionId c) {
  switch (c) {
    case ConditionId::P5_1: return "P5_1";
    case ConditionId::C5_2: return "C5_2";
    case ConditionId::P5_3: return "P5_3";
    case ConditionId::L5_4: return "L5_4";
    case ConditionId::C5_5: return "C5_5";
    case ConditionId::P5_6: return "P5_6";
    case ConditionId::R5_7: return "R5_7";
    case ConditionId::P5_8: return "P5_8";
    case ConditionId::R5_9: return "R5_9";
    case ConditionId::P5_10: return "P5_10";
    case ConditionId::R5_11: return "R5_11";
    case ConditionId::P6_1: return "P6_1";
    case ConditionId::C6_2: return "C6_2";
    case ConditionId::P6_3: return "P6_3";
    case ConditionId::C6_4: return "C6_4";
    case ConditionId::P6_5: return "P6_5";
    case ConditionId::C6_6: return "C6_6";
    case ConditionId::GenericPair: return "pair";
  }
  return "?";
}

inline constexpr double kDefaultGuardBand = 1e-7;

// The ordering under test is always "e_left <= e_right".
struct ComparisonCase {
  ModelId left;
  ModelId right;
  ConditionId condition;
  double guard_band = kDefaultGuardBand;
};

// Left/right models of each named result, oriented so that the result's
// ordering assertion reads e_left <= e_right.
inline ComparisonCase make_case(ConditionId c, double guard_band = kDefaultGuardBand) {
  using M = ModelId;
  switch (c) {
    case ConditionId::P5_1:
    case ConditionId::C5_2: return {M::M4, M::Benchmark, c, guard_band};
    case ConditionId::P5_3:
    case ConditionId::L5_4:
    case ConditionId::C5_5: return {M::Benchmark, M::M5, c, guard_band};
    case ConditionId::P5_6:
    case ConditionId::R5_7: return {M::Benchmark, M::M6, c, guard_band};
    case ConditionId::P5_8:
    case ConditionId::R5_9: return {M::Benchmark, M::M7, c, guard_band};
    case ConditionId::P5_10:
    case ConditionId::R5_11: return {M::Benchmark, M::M8, c, guard_band};
    case ConditionId::P6_1:
    case ConditionId::C6_2: return {M::M6, M::M4, c, guard_band};
    case ConditionId::P6_3:
    case ConditionId::C6_4: return {M::M6, M::M5, c, guard_band};
    case ConditionId::P6_5:
    case ConditionId::C6_6: return {M::M7, M::M1, c, guard_band};
    case ConditionId::GenericPair: break;
  }
  throw ValidationError("generic pairs are built with compare_pair");
}

struct ComparisonVerdict {
  ModelId left;
  ModelId right;
  ConditionId condition;
  double e_left;
  double e_right;
  bool ordering_holds;   // e_left <= e_right
  bool condition_holds;  // condition value >= 0
  double margin;         // condition value, signed distance from its threshold
  // Defined only off the boundary: |margin| and |e_left - e_right| both
  // exceed the guard band.
  std::optional<bool> equivalence_respected;
};

namespace detail {

// Ratio of a model's period-1 expected marginal utility to the riskless u'.
// NaN when `e` lies beyond the model's feasible efforts: the condition is then
// undefined and the verdict reports no equivalence.
inline double period1_ratio(const Scenario& s, ModelId m, double e) {
  const PreparedModel model(s, m);
  if (e > model.upper_bound()) return std::numeric_limits<double>::quiet_NaN();
  return model.period1_marginal(e) / s.u.d1(s.w1 - e);
}

// Ratio of a model's period-2 utility gap to the riskless gap v(w2-l)-v(w2).
inline double period2_ratio(const Scenario& s, ModelId m) {
  return PreparedModel(s, m).period2_gap() /
         PreparedModel(s, ModelId::Benchmark).period2_gap();
}

inline double solved_effort(const Scenario& s, ModelId m) {
  return solve_optimal(s, m).e_star;
}

// Condition (ii) of each named result as a dimensionless value that is >= 0
// exactly when (ii) holds. `reference` is the optimum the condition is
// evaluated at (benchmark e* for the benchmark comparisons, the two-risk
// optimum for the single-to-two-risk comparisons).
inline double condition_at(const Scenario& s, ConditionId c, double reference) {
  using M = ModelId;
  switch (c) {
    case ConditionId::P5_1:
    case ConditionId::C5_2:
      return period1_ratio(s, M::M4, reference) - 1.0;
    case ConditionId::P5_3:
    case ConditionId::L5_4:
    case ConditionId::C5_5:
      // v(w2-l)-v(w2)-E_f(v(w2-l+B))+E_f(v(w2+B)) >= 0, divided by |v(w2-l)-v(w2)|
      return period2_ratio(s, M::M5) - 1.0;
    case ConditionId::P5_6:
    case ConditionId::R5_7:
      return period2_ratio(s, M::M6) - period1_ratio(s, M::M6, reference);
    case ConditionId::P5_8:
    case ConditionId::R5_9:
      return period2_ratio(s, M::M7) - period1_ratio(s, M::M7, reference);
    case ConditionId::P5_10:
    case ConditionId::R5_11:
      return period2_ratio(s, M::M8) - period1_ratio(s, M::M8, reference);
    case ConditionId::P6_1:
    case ConditionId::C6_2:
      return 1.0 - period2_ratio(s, M::M6);
    case ConditionId::P6_3:
    case ConditionId::C6_4:
      return period1_ratio(s, M::M6, reference) - 1.0;
    case ConditionId::P6_5:
    case ConditionId::C6_6:
      return 1.0 - period2_ratio(s, M::M7);
    case ConditionId::GenericPair: break;
  }
  throw ValidationError("generic pairs are evaluated with compare_pair");
}

// Model whose optimum the named condition is evaluated at.
inline ModelId reference_model(ConditionId c) {
  switch (c) {
    case ConditionId::P6_1:
    case ConditionId::C6_2:
    case ConditionId::P6_3:
    case ConditionId::C6_4: return ModelId::M6;
    case ConditionId::P6_5:
    case ConditionId::C6_6: return ModelId::M7;
    default: return ModelId::Benchmark;
  }
}

inline ComparisonVerdict make_verdict(ModelId left, ModelId right, ConditionId c, double e_left,
                                      double e_right, double margin, double band) {
  ComparisonVerdict v{left, right, c, e_left, e_right, e_left <= e_right, margin >= 0.0,
                      margin, std::nullopt};
  if (std::abs(margin) > band && std::abs(e_left - e_right) > band) {
    v.equivalence_respected = (v.ordering_holds == v.condition_holds);
  }
  return v;
}

}  // namespace detail

// Signed condition value (ii) of the case's result at the optimum it names;
// >= 0 iff (ii) holds.
inline double condition_value(const Scenario& s, const ComparisonCase& c) {
  const double ref = detail::solved_effort(s, detail::reference_model(c.condition));
  return detail::condition_at(s, c.condition, ref);
}

// Solves both models of a named equivalence and checks (i) <=> (ii).
inline ComparisonVerdict verify_equivalence(const Scenario& s, const ComparisonCase& c) {
  if (c.left == c.right) throw ValidationError("comparison needs two distinct models");
  const double e_left = detail::solved_effort(s, c.left);
  const double e_right = detail::solved_effort(s, c.right);
  const ModelId ref_model = detail::reference_model(c.condition);
  const double ref = ref_model == c.left ? e_left : (ref_model == c.right ? e_right
                                                     : detail::solved_effort(s, ref_model));
  const double margin = detail::condition_at(s, c.condition, ref);
  return detail::make_verdict(c.left, c.right, c.condition, e_left, e_right, margin,
                              c.guard_band);
}

inline constexpr double kZeroMeanTolerance = 1e-9;

inline bool has_zero_mean(const std::optional<BackgroundRisk>& risk, const WeightingFunction& f,
                          double tol = kZeroMeanTolerance) {
  if (!risk) return false;
  if (const auto* a = std::get_if<FuzzyNumber>(&*risk)) {
    return std::abs(possibilistic_expected_value(*a, f)) <= tol;
  }
  return std::abs(expected_value(std::get<DiscreteRandomVariable>(*risk))) <= tol;
}

// v(w2-l) - v(w2) - [E_f(v(w2-l+B)) - E_f(v(w2+B))]; non-negative when
// v''' > 0 and E_f(B) = 0.
inline double lemma_gap(const Scenario& s) {
  return PreparedModel(s, ModelId::Benchmark).period2_gap() -
         PreparedModel(s, ModelId::M5).period2_gap();
}

inline constexpr double kCorollaryTolerance = 1e-9;
inline constexpr double kLemmaTolerance = 1e-10;

// Checks a sufficient-condition result (prudence + zero-mean risk) on `s`.
// For corollaries, ordering_holds is the stated conclusion e_left <= e_right
// within `tol`. For the lemma, no optimum is involved: e_left/e_right are 0,
// margin is lemma_gap(s) and ordering_holds is margin >= -kLemmaTolerance.
inline ComparisonVerdict verify_sufficient(const Scenario& s, const ComparisonCase& c,
                                           double tol = kCorollaryTolerance) {
  auto require = [&](bool ok, const char* what) {
    if (!ok) {
      throw HypothesisNotMetError("scenario '" + s.id + "': " +
                                  std::string(to_string(c.condition)) + " needs " + what);
    }
  };
  auto fuzzy_zero_mean = [&](const std::optional<BackgroundRisk>& r) {
    return kind_of(r) == RiskKind::Fuzzy && has_zero_mean(r, s.f);
  };
  switch (c.condition) {
    case ConditionId::C5_2:
    case ConditionId::C6_4:
      require(s.u.prudent(), "u''' > 0");
      require(fuzzy_zero_mean(s.risk1), "a period-1 fuzzy risk with E_f(A) = 0");
      break;
    case ConditionId::L5_4:
    case ConditionId::C5_5:
    case ConditionId::C6_2:
    case ConditionId::C6_6:
      require(s.v.prudent(), "v''' > 0");
      require(fuzzy_zero_mean(s.risk2), "a period-2 fuzzy risk with E_f(B) = 0");
      break;
    default:
      throw ValidationError(std::string(to_string(c.condition)) +
                            " is not a sufficient-condition result");
  }
  if (c.condition == ConditionId::L5_4) {
    // Domain checks come with the model preparation.
    validate(s, ModelId::M5);
    const double gap = lemma_gap(s);
    return {c.left, c.right, c.condition, 0.0, 0.0, gap >= -kLemmaTolerance,
            gap >= -kLemmaTolerance, gap, std::nullopt};
  }
  ComparisonVerdict v = verify_equivalence(s, c);
  v.ordering_holds = v.e_left <= v.e_right + tol;
  return v;
}

// Generic single-step comparison: `right` adds exactly one period's risk to
// `left` (or vice versa), or one side is the benchmark and the other carries
// risk in both periods.
//
//  - risk added in period 2: e_rich <= e_poor  iff  gap_rich / gap_poor <= 1
//  - risk added in period 1: e_rich <= e_poor  iff  K_poor(e_rich) <= K_rich(e_rich),
//    K the period-1 expected marginal utility
//  - benchmark vs two-risk model: e* <= e_rich iff
//    K_rich(e*) / u'(w1-e*) <= gap_rich / gap_benchmark
//
// The verdict is oriented so that left is the richer model in the first two
// patterns and the benchmark in the third, matching those orderings.
inline ComparisonVerdict compare_pair(const Scenario& s, ModelId a, ModelId b,
                                      double guard_band = kDefaultGuardBand) {
  const RiskLayout la = layout(a);
  const RiskLayout lb = layout(b);
  auto not_comparable = [&]() {
    std::ostringstream os;
    os << "pair " << to_string(a) << ':' << to_string(b)
       << " is not comparable: the models must differ by one added background risk";
    throw PairNotComparableError(os.str());
  };
  if (a == b) not_comparable();

  if (a == ModelId::Benchmark || b == ModelId::Benchmark) {
    const ModelId rich = a == ModelId::Benchmark ? b : a;
    const RiskLayout lr = layout(rich);
    if (lr.period1 != RiskKind::None && lr.period2 != RiskKind::None) {
      const double e_bench = detail::solved_effort(s, ModelId::Benchmark);
      const double e_rich = detail::solved_effort(s, rich);
      const double margin = detail::period2_ratio(s, rich) -
                            detail::period1_ratio(s, rich, e_bench);
      return detail::make_verdict(ModelId::Benchmark, rich, ConditionId::GenericPair, e_bench,
                                  e_rich, margin, guard_band);
    }
  }

  const bool p1_same = la.period1 == lb.period1;
  const bool p2_same = la.period2 == lb.period2;
  if (p1_same == p2_same) not_comparable();
  int added_period = 0;
  ModelId rich = a;
  ModelId poor = b;
  if (!p1_same) {
    added_period = 1;
    if (la.period1 == RiskKind::None) std::swap(rich, poor);
    else if (lb.period1 != RiskKind::None) not_comparable();
  } else {
    added_period = 2;
    if (la.period2 == RiskKind::None) std::swap(rich, poor);
    else if (lb.period2 != RiskKind::None) not_comparable();
  }
  const double e_rich = detail::solved_effort(s, rich);
  const double e_poor = detail::solved_effort(s, poor);
  double margin = 0.0;
  if (added_period == 2) {
    margin = 1.0 - PreparedModel(s, rich).period2_gap() / PreparedModel(s, poor).period2_gap();
  } else {
    margin = PreparedModel(s, rich).period1_marginal(e_rich) /
                 PreparedModel(s, poor).period1_marginal(e_rich) -
             1.0;
  }
  return detail::make_verdict(rich, poor, ConditionId::GenericPair, e_rich, e_poor, margin,
                              guard_band);
}

// Remark results and the model whose optimum they contrast with e*.
inline ModelId ambiguity_model(ConditionId remark) {
  switch (remark) {
    case ConditionId::R5_7: return ModelId::M6;
    case ConditionId::R5_9: return ModelId::M7;
    case ConditionId::R5_11: return ModelId::M8;
    default: break;
  }
  throw ValidationError("ambiguity search needs R5_7, R5_9 or R5_11");
}

// Both prudence ratios of a remark at the benchmark optimum:
// period-1 K(e*)/u'(w1-e*) and period-2 gap/gap_benchmark. Both are >= 1 for
// prudent agents facing zero-mean risks. period1 is NaN when e* exceeds the
// model's feasible efforts.
struct PrudenceRatios {
  double period1;
  double period2;
};

inline PrudenceRatios prudence_ratios(const Scenario& s, ConditionId remark) {
  const ModelId m = ambiguity_model(remark);
  const double e_bench = detail::solved_effort(s, ModelId::Benchmark);
  return {detail::period1_ratio(s, m, e_bench), detail::period2_ratio(s, m)};
}

struct AmbiguityWitnesses {
  Scenario below;  // e* < e_k*
  Scenario above;  // e* > e_k*
  double gap_below;
  double gap_above;
  long examined;
};

// Scans `generate(0), generate(1), ...` until it has one scenario with
// e* < e_k* - band and one with e* > e_k* + band, k the remark's model.
inline AmbiguityWitnesses search_ambiguity(const std::function<Scenario(long)>& generate,
                                           ConditionId remark, long budget,
                                           double guard_band = kDefaultGuardBand) {
  const ModelId m = ambiguity_model(remark);
  std::optional<Scenario> below;
  std::optional<Scenario> above;
  double gap_below = 0.0;
  double gap_above = 0.0;
  long i = 0;
  for (; i < budget && !(below && above); ++i) {
    Scenario s = generate(i);
    const double gap = detail::solved_effort(s, m) - detail::solved_effort(s, ModelId::Benchmark);
    if (!below && gap > guard_band) {
      below = s;
      gap_below = gap;
    } else if (!above && gap < -guard_band) {
      above = s;
      gap_above = gap;
    }
  }
  if (!(below && above)) {
    std::ostringstream os;
    os << to_string(remark) << ": no " << (below ? "e* > e_k*" : "e* < e_k*")
       << " witness within " << budget << " scenarios";
    throw WitnessNotFoundError(os.str());
  }
  return {*below, *above, gap_below, gap_above, i};
}

}  // namespace possprev
