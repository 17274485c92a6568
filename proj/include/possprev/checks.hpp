#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "possprev/comparison.hpp"
#include "possprev/generator.hpp"
#include "possprev/oracle.hpp"
#include "possprev/parallel.hpp"
#include "possprev/scenario_io.hpp"

// Randomized verification suites behind `possprev check`. Every item is
// generated from (seed, line, index) alone, so reports are reproducible
// regardless of thread count.
namespace possprev::checks {

struct CheckOptions {
  std::uint64_t seed = 42;
  long count = 0;  // 0: the suite's default
  double guard_band = kDefaultGuardBand;
  unsigned threads = default_thread_count();
};

// Outcome of one randomized item. `metric` is oriented so that larger is
// worse; `replay` describes the offending input when the item fails.
struct Item {
  bool pass = true;
  double metric = 0.0;
  bool skipped = false;  // tie inside the guard band: neither pass nor fail
  std::optional<io::json> replay;
};

struct CheckLine {
  std::string name;
  std::string metric_name;
  long passed = 0;
  long failed = 0;
  long skipped = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::optional<io::json> offending;

  void add(const Item& item) {
    if (item.skipped) {
      ++skipped;
      return;
    }
    if (item.pass) ++passed; else ++failed;
    if (item.metric > worst) worst = item.metric;
    if (!item.pass && !offending) offending = item.replay;
  }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed;
  long count;
  std::vector<CheckLine> lines;

  bool ok() const {
    for (const auto& l : lines) {
      if (l.failed != 0) return false;
    }
    return true;
  }
};

namespace detail {

inline std::mt19937_64 item_rng(std::uint64_t seed, std::uint64_t line, long index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(line), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

template <class F>
CheckLine run_line(std::string name, std::string metric, long count, unsigned threads, F&& item) {
  CheckLine line;
  line.name = std::move(name);
  line.metric_name = std::move(metric);
  for (const Item& r : parallel_map(count, item, threads)) line.add(r);
  return line;
}

// Convex test function with a label: x², x⁴, e^{cx}, 1/(x+s).
struct ConvexCase {
  std::string label;
  std::function<double(double)> fn;
};

inline ConvexCase convex_case(std::mt19937_64& rng, double support_lo) {
  switch (sampling::pick(rng, 4)) {
    case 0: return {"x^2", [](double x) { return x * x; }};
    case 1: return {"x^4", [](double x) { return x * x * x * x; }};
    case 2: {
      const double c = sampling::uniform(rng, -1.0, 1.0);
      return {"exp(" + io::format_number(c) + "x)", [c](double x) { return std::exp(c * x); }};
    }
    default: {
      const double s = 1.0 - support_lo;
      return {"1/(x+" + io::format_number(s) + ")", [s](double x) { return 1.0 / (x + s); }};
    }
  }
}

inline io::json fuzzy_replay(const FuzzyNumber& a, const WeightingFunction& f,
                             const std::string& u) {
  return {{"fuzzy", io::to_json(BackgroundRisk(a))}, {"weighting", io::to_json(f)}, {"u", u}};
}

inline std::uint64_t model_line(ModelId m) { return 100 + static_cast<std::uint64_t>(m); }

}  // namespace detail

// Jensen inequality u(E_f(A)) <= E_f(u(A)) + 1e-10 for convex u, and
// linearity E_f((ag+bh)(A)) = a E_f(g(A)) + b E_f(h(A)) within 1e-9.
inline SuiteReport run_jensen(const CheckOptions& opt) {
  const long n = opt.count > 0 ? opt.count : 500;
  SuiteReport report{"jensen", opt.seed, n, {}};
  report.lines.push_back(detail::run_line(
      "jensen_inequality", "max(u(E_f A) - E_f u(A))", n, opt.threads, [&](long i) {
        auto rng = detail::item_rng(opt.seed, 1, i);
        const WeightingFunction f = sampling::weighting(rng);
        const FuzzyNumber a = sampling::fuzzy(rng, sampling::uniform(rng, 0.1, 3.0), f, false);
        const auto u = detail::convex_case(rng, a.support().lo);
        const double lhs = u.fn(possibilistic_expected_value(a, f));
        const double rhs = possibilistic_expected_utility(a, f, u.fn);
        const double excess = lhs - rhs;
        return Item{excess <= 1e-10, excess, false, detail::fuzzy_replay(a, f, u.label)};
      }));
  report.lines.push_back(detail::run_line(
      "linearity", "max residual", n, opt.threads, [&](long i) {
        auto rng = detail::item_rng(opt.seed, 2, i);
        const WeightingFunction f = sampling::weighting(rng);
        const FuzzyNumber a = sampling::fuzzy(rng, sampling::uniform(rng, 0.1, 3.0), f, false);
        const double wa = sampling::uniform(rng, -5.0, 5.0);
        const double wb = sampling::uniform(rng, -5.0, 5.0);
        auto g = [](double x) { return std::sin(x) + x * x * x; };
        auto h = [](double x) { return std::exp(0.5 * x); };
        const double combined =
            possibilistic_expected_utility(a, f, [&](double x) { return wa * g(x) + wb * h(x); });
        const double split = wa * possibilistic_expected_utility(a, f, g) +
                             wb * possibilistic_expected_utility(a, f, h);
        const double residual = std::abs(combined - split);
        return Item{residual <= 1e-9, residual, false,
                    detail::fuzzy_replay(a, f, "a(sin x + x^3) + b exp(x/2)")};
      }));
  return report;
}

// Main quadrature vs midpoint oracle (1e-6), identity reduction (1e-12),
// discrete expectation vs extended-precision sum (1e-12).
inline SuiteReport run_oracle(const CheckOptions& opt) {
  const long n = opt.count > 0 ? opt.count : 200;
  SuiteReport report{"oracle", opt.seed, n, {}};
  report.lines.push_back(detail::run_line(
      "quadrature_vs_midpoint", "max |main - oracle|", n, opt.threads, [&](long i) {
        auto rng = detail::item_rng(opt.seed, 3, i);
        const WeightingFunction f = sampling::weighting(rng);
        const FuzzyNumber a = sampling::fuzzy(rng, sampling::uniform(rng, 0.1, 4.0), f, false);
        const double base = sampling::uniform(rng, 6.0, 40.0);
        const UtilityFunction u = sampling::utility(rng, base + 10.0, false);
        auto g = [&](double x) { return u(base + x); };
        const double gap = std::abs(possibilistic_expected_utility(a, f, g) -
                                    oracle::expected_utility(a, f, g));
        return Item{gap <= 1e-6, gap, false,
                    detail::fuzzy_replay(a, f, u.name() + " at " + io::format_number(base) + "+x")};
      }));
  report.lines.push_back(detail::run_line(
      "identity_reduction", "max |E_f(id(A)) - E_f(A)|", n, opt.threads, [&](long i) {
        auto rng = detail::item_rng(opt.seed, 4, i);
        const WeightingFunction f = sampling::weighting(rng);
        const FuzzyNumber a = sampling::fuzzy(rng, sampling::uniform(rng, 0.1, 4.0), f, false);
        const double gap =
            std::abs(possibilistic_expected_utility(a, f, ScalarFunction::identity()) -
                     possibilistic_expected_value(a, f));
        return Item{gap <= 1e-12, gap, false, detail::fuzzy_replay(a, f, "identity")};
      }));
  report.lines.push_back(detail::run_line(
      "discrete_vs_exhaustive", "max |main - oracle|", n, opt.threads, [&](long i) {
        auto rng = detail::item_rng(opt.seed, 5, i);
        const auto x = sampling::random_variable(rng, sampling::uniform(rng, 0.1, 4.0), false);
        const double base = sampling::uniform(rng, 6.0, 40.0);
        const UtilityFunction u = sampling::utility(rng, base + 10.0, false);
        auto g = [&](double v) { return u(base + v); };
        const double gap = std::abs(probabilistic_expected_utility(x, g) -
                                    oracle::discrete_expectation(x, g));
        return Item{gap <= 1e-12, gap, false,
                    io::json{{"random", io::to_json(BackgroundRisk(x))}, {"u", u.name()}}};
      }));
  return report;
}

// Per model: interior FOC relative residual <= 1e-9, V' strictly decreasing
// on a 100-point grid, solver within one grid step of the oracle argmax.
inline SuiteReport run_focs(const CheckOptions& opt) {
  const long n = opt.count > 0 ? opt.count : 100;
  SuiteReport report{"focs", opt.seed, n, {}};
  const oracle::OracleConfig cfg;
  for (ModelId m : kAllModels) {
    EnsembleOptions eo;
    eo.risk1 = layout(m).period1;
    eo.risk2 = layout(m).period2;
    eo.prudent_only = false;
    const ScenarioGenerator gen(opt.seed * 1000 + detail::model_line(m), eo);
    const std::string name(to_string(m));
    report.lines.push_back(detail::run_line(
        name + ".foc", "max relative FOC residual", n, opt.threads, [&](long i) {
          const Scenario s = gen.at(i);
          const SolveResult r = solve_optimal(s, m);
          if (r.corner != Corner::Interior) return Item{true, 0.0, true, {}};
          const double rel = PreparedModel(s, m).foc_sides(r.e_star).relative_residual();
          return Item{rel <= 1e-9, rel, false, io::to_json(s)};
        }));
    report.lines.push_back(detail::run_line(
        name + ".concavity", "max V'(e_{k+1}) - V'(e_k)", n, opt.threads, [&](long i) {
          const Scenario s = gen.at(i);
          const PreparedModel model(s, m);
          double worst = -std::numeric_limits<double>::infinity();
          double prev = model.marginal_utility(0.0);
          for (int k = 1; k < 100; ++k) {
            const double next = model.marginal_utility(std::min(model.upper_bound() * k / 99.0, model.upper_bound()));
            worst = std::max(worst, next - prev);
            prev = next;
          }
          return Item{worst < 0.0, worst, false, io::to_json(s)};
        }));
    report.lines.push_back(detail::run_line(
        name + ".oracle_argmax", "max |e*_solver - e*_grid|", n, opt.threads, [&](long i) {
          const Scenario s = gen.at(i);
          const double gap =
              std::abs(solve_optimal(s, m).e_star - oracle::argmax(s, m, cfg));
          return Item{gap <= cfg.effort_grid_step, gap, false, io::to_json(s)};
        }));
  }
  return report;
}

namespace detail {

inline ScenarioGenerator theorem_ensemble(const CheckOptions& opt, RiskKind r1, RiskKind r2,
                                          bool zero_mean, bool prudent,
                                          std::vector<ModelId> interior, std::uint64_t line) {
  EnsembleOptions eo;
  eo.risk1 = r1;
  eo.risk2 = r2;
  eo.zero_mean = zero_mean;
  eo.prudent_only = prudent;
  eo.require_interior = std::move(interior);
  return ScenarioGenerator(opt.seed * 1000 + line, eo);
}

inline Item verdict_item(const Scenario& s, const ComparisonVerdict& v) {
  if (!v.equivalence_respected) return Item{true, 0.0, true, {}};
  return Item{*v.equivalence_respected,
              *v.equivalence_respected ? -std::abs(v.margin) : std::abs(v.margin), false,
              io::to_json(s)};
}

inline constexpr long kTheoremCount = 1000;
inline constexpr long kWitnessBudget = 10000;

}  // namespace detail

inline constexpr ConditionId kEquivalences[] = {
    ConditionId::P5_1, ConditionId::P5_3, ConditionId::P5_6, ConditionId::P5_8,
    ConditionId::P5_10, ConditionId::P6_1, ConditionId::P6_3, ConditionId::P6_5};
inline constexpr ConditionId kSufficient[] = {ConditionId::C5_2, ConditionId::C5_5,
                                              ConditionId::C6_2, ConditionId::C6_4,
                                              ConditionId::C6_6, ConditionId::L5_4};
inline constexpr ConditionId kRemarks[] = {ConditionId::R5_7, ConditionId::R5_9,
                                           ConditionId::R5_11};

// Equivalence (i) <=> (ii) of each named result, ties excluded.
inline std::vector<CheckLine> run_equivalences(const CheckOptions& opt) {
  const long n = opt.count > 0 ? opt.count : detail::kTheoremCount;
  std::vector<CheckLine> lines;
  std::uint64_t line = 200;
  for (ConditionId c : kEquivalences) {
    const ComparisonCase cc = make_case(c, opt.guard_band);
    const RiskLayout l1 = layout(cc.left);
    const RiskLayout l2 = layout(cc.right);
    const RiskKind r1 = l1.period1 != RiskKind::None ? l1.period1 : l2.period1;
    const RiskKind r2 = l1.period2 != RiskKind::None ? l1.period2 : l2.period2;
    const auto gen = detail::theorem_ensemble(opt, r1, r2, false, false,
                                              {ModelId::Benchmark, cc.left, cc.right}, line++);
    lines.push_back(detail::run_line(
        std::string(to_string(c)), "max violation margin", n, opt.threads, [&](long i) {
          const Scenario s = gen.at(i);
          return detail::verdict_item(s, verify_equivalence(s, cc));
        }));
  }
  return lines;
}

// The eight single-step pairs through the generic comparator.
inline std::vector<CheckLine> run_pairs(const CheckOptions& opt) {
  const long n = opt.count > 0 ? opt.count : detail::kTheoremCount;
  struct Pair {
    ModelId poor;
    ModelId rich;
  };
  const Pair pairs[] = {{ModelId::M1, ModelId::M3}, {ModelId::M1, ModelId::M7},
                        {ModelId::M2, ModelId::M3}, {ModelId::M2, ModelId::M8},
                        {ModelId::M4, ModelId::M6}, {ModelId::M4, ModelId::M8},
                        {ModelId::M5, ModelId::M6}, {ModelId::M5, ModelId::M7}};
  std::vector<CheckLine> lines;
  std::uint64_t line = 208;
  for (const Pair& p : pairs) {
    const RiskLayout lr = layout(p.rich);
    const auto gen = detail::theorem_ensemble(opt, lr.period1, lr.period2, false, false,
                                              {p.poor, p.rich}, line++);
    const std::string name = "pair." + std::string(to_string(p.poor)) + ":" +
                             std::string(to_string(p.rich));
    lines.push_back(detail::run_line(name, "max violation margin", n, opt.threads, [&](long i) {
      const Scenario s = gen.at(i);
      return detail::verdict_item(s, compare_pair(s, p.poor, p.rich, opt.guard_band));
    }));
  }
  return lines;
}

// Scenarios meeting a sufficient-condition result's hypotheses: prudent
// utilities, zero-mean risks in the slots the result names.
inline ScenarioGenerator sufficient_ensemble(const CheckOptions& opt, ConditionId c) {
  const ComparisonCase cc = make_case(c, opt.guard_band);
  const RiskKind F = RiskKind::Fuzzy;
  const bool period1 = c == ConditionId::C5_2 || c == ConditionId::C6_4;
  RiskKind r1 = period1 ? F : RiskKind::None;
  RiskKind r2 = period1 ? RiskKind::None : F;
  if (c == ConditionId::C6_2 || c == ConditionId::C6_4) r1 = r2 = F;
  if (c == ConditionId::C6_6) {
    r1 = RiskKind::Random;
    r2 = F;
  }
  std::vector<ModelId> interior;
  if (c != ConditionId::L5_4) interior = {ModelId::Benchmark, cc.left, cc.right};
  std::uint64_t line = 216;
  for (ConditionId k : kSufficient) {
    if (k == c) break;
    ++line;
  }
  return detail::theorem_ensemble(opt, r1, r2, true, true, std::move(interior), line);
}

// Each sufficient-condition result checked exactly as stated.
inline std::vector<CheckLine> run_sufficient(const CheckOptions& opt) {
  const long n = opt.count > 0 ? opt.count : detail::kTheoremCount;
  std::vector<CheckLine> lines;
  for (ConditionId c : kSufficient) {
    const ComparisonCase cc = make_case(c, opt.guard_band);
    const auto gen = sufficient_ensemble(opt, c);
    const char* metric = c == ConditionId::L5_4 ? "max(-lemma gap)" : "max(e_left - e_right)";
    lines.push_back(detail::run_line(
        std::string(to_string(c)) + ".as_stated", metric, n, opt.threads,
        [&](long i) {
          const Scenario s = gen.at(i);
          const ComparisonVerdict v = verify_sufficient(s, cc);
          const double metric = c == ConditionId::L5_4 ? -v.margin : v.e_left - v.e_right;
          return Item{v.ordering_holds, metric, false, io::to_json(s)};
        }));
  }
  return lines;
}

// Prudence ratios >= 1 at e*, and witnesses of both orderings of e* and e_k*.
inline std::vector<CheckLine> run_remarks(const CheckOptions& opt) {
  const long n = opt.count > 0 ? opt.count : detail::kTheoremCount;
  std::vector<CheckLine> lines;
  std::uint64_t line = 222;
  for (ConditionId c : kRemarks) {
    const ModelId m = ambiguity_model(c);
    const RiskLayout lay = layout(m);
    const auto gen = detail::theorem_ensemble(opt, lay.period1, lay.period2, true, true,
                                              {ModelId::Benchmark, m}, line++);
    lines.push_back(detail::run_line(
        std::string(to_string(c)) + ".ratios", "max(1 - min ratio)", n, opt.threads, [&](long i) {
          const Scenario s = gen.at(i);
          const PrudenceRatios r = prudence_ratios(s, c);
          const double shortfall = 1.0 - std::min(r.period1, r.period2);
          if (std::isnan(shortfall)) return Item{true, 0.0, true, {}};
          return Item{shortfall <= 1e-10, shortfall, false, io::to_json(s)};
        }));
    CheckLine witness;
    witness.name = std::string(to_string(c)) + ".ambiguity";
    witness.metric_name = "scenarios examined";
    try {
      const AmbiguityWitnesses w = search_ambiguity(
          [&](long i) { return gen.at(i); }, c, detail::kWitnessBudget, opt.guard_band);
      witness.passed = 1;
      witness.worst = static_cast<double>(w.examined);
    } catch (const WitnessNotFoundError& e) {
      witness.failed = 1;
      witness.worst = static_cast<double>(detail::kWitnessBudget);
      witness.offending = io::json{{"error", e.what()}};
    }
    lines.push_back(std::move(witness));
  }
  return lines;
}

// Equivalence results, generic pairs, sufficient-condition results as
// stated, the lemma, prudence ratios and ambiguity witnesses.
inline SuiteReport run_theorems(const CheckOptions& opt) {
  const long n = opt.count > 0 ? opt.count : detail::kTheoremCount;
  SuiteReport report{"theorems", opt.seed, n, {}};
  for (auto part : {run_equivalences, run_pairs, run_sufficient, run_remarks}) {
    for (auto& l : part(opt)) report.lines.push_back(std::move(l));
  }
  return report;
}

}  // namespace possprev::checks
