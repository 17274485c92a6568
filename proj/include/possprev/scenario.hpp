#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include "possprev/error.hpp"
#include "possprev/fuzzy_number.hpp"
#include "possprev/preferences.hpp"
#include "possprev/random_variable.hpp"
#include "possprev/weighting.hpp"

namespace possprev {

using BackgroundRisk = std::variant<FuzzyNumber, DiscreteRandomVariable>;

// One instance of the two-period prevention problem.
struct Scenario {
  std::string id;
  double w1;    // period-1 sure wealth
  double w2;    // period-2 sure wealth
  double loss;  // l > 0
  UtilityFunction u;
  UtilityFunction v;
  LossProbability p;
  WeightingFunction f;
  std::optional<BackgroundRisk> risk1;
  std::optional<BackgroundRisk> risk2;
};

enum class ModelId { Benchmark, M1, M2, M3, M4, M5, M6, M7, M8 };

inline constexpr std::array<ModelId, 9> kAllModels = {
    ModelId::Benchmark, ModelId::M1, ModelId::M2, ModelId::M3, ModelId::M4,
    ModelId::M5,        ModelId::M6, ModelId::M7, ModelId::M8};

enum class RiskKind { None, Random, Fuzzy };

struct RiskLayout {
  RiskKind period1;
  RiskKind period2;
};

// Background-risk layout of each model.
constexpr RiskLayout layout(ModelId m) {
  switch (m) {
    case ModelId::Benchmark: return {RiskKind::None, RiskKind::None};
    case ModelId::M1: return {RiskKind::Random, RiskKind::None};
    case ModelId::M2: return {RiskKind::None, RiskKind::Random};
    case ModelId::M3: return {RiskKind::Random, RiskKind::Random};
    case ModelId::M4: return {RiskKind::Fuzzy, RiskKind::None};
    case ModelId::M5: return {RiskKind::None, RiskKind::Fuzzy};
    case ModelId::M6: return {RiskKind::Fuzzy, RiskKind::Fuzzy};
    case ModelId::M7: return {RiskKind::Random, RiskKind::Fuzzy};
    case ModelId::M8: return {RiskKind::Fuzzy, RiskKind::Random};
  }
  return {RiskKind::None, RiskKind::None};
}

inline std::string_view to_string(ModelId m) {
  switch (m) {
    case ModelId::Benchmark: return "benchmark";
    case ModelId::M1: return "m1";
    case ModelId::M2: return "m2";
    case ModelId::M3: return "m3";
    case ModelId::M4: return "m4";
    case ModelId::M5: return "m5";
    case ModelId::M6: return "m6";
    case ModelId::M7: return "m7";
    case ModelId::M8: return "m8";
  }
  return "?";
}

inline std::optional<ModelId> parse_model(std::string_view name) {
  for (ModelId m : kAllModels) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

inline RiskKind kind_of(const std::optional<BackgroundRisk>& risk) {
  if (!risk) return RiskKind::None;
  return std::holds_alternative<FuzzyNumber>(*risk) ? RiskKind::Fuzzy : RiskKind::Random;
}

// Smallest and largest value the risk can add to wealth.
inline LevelSet risk_range(const std::optional<BackgroundRisk>& risk) {
  if (!risk) return {0.0, 0.0};
  if (const auto* a = std::get_if<FuzzyNumber>(&*risk)) return a->support();
  const auto& x = std::get<DiscreteRandomVariable>(*risk);
  return {x.min_value(), x.max_value()};
}

namespace detail {

inline const char* kind_label(RiskKind k) {
  return k == RiskKind::Fuzzy ? "fuzzy" : "random";
}

inline void require_slot(const Scenario& s, ModelId m, int period, RiskKind need) {
  if (need == RiskKind::None) return;
  const auto& slot = period == 1 ? s.risk1 : s.risk2;
  if (kind_of(slot) != need) {
    std::ostringstream os;
    os << "model " << to_string(m) << " requires a period-" << period << ' '
       << kind_label(need) << " risk";
    if (slot) os << " but scenario provides a " << kind_label(kind_of(slot)) << " one";
    throw ModelMismatchError(os.str());
  }
}

}  // namespace detail

// Wealth margin kept between period-1 consumption and the consumption floor.
inline constexpr double kEffortMargin = 1e-6;

// Largest admissible effort: period-1 wealth at its worst background outcome
// stays kEffortMargin above max(0, lower end of u's domain).
inline double effort_upper_bound(const Scenario& s, ModelId m) {
  const RiskKind k1 = layout(m).period1;
  const double worst = k1 == RiskKind::None ? 0.0 : risk_range(s.risk1).lo;
  const double floor = std::max(0.0, s.u.domain().lo);
  return s.w1 + worst - floor - kEffortMargin;
}

// Checks that `m` can be evaluated on `s` for every e in [0, upper bound].
inline void validate(const Scenario& s, ModelId m) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("scenario '" + s.id + "': " + what);
  };
  if (!std::isfinite(s.w1) || !std::isfinite(s.w2)) fail("wealth must be finite");
  if (!(s.loss > 0.0) || !std::isfinite(s.loss)) fail("loss l must be > 0");
  const RiskLayout lay = layout(m);
  detail::require_slot(s, m, 1, lay.period1);
  detail::require_slot(s, m, 2, lay.period2);

  const LevelSet r2 = lay.period2 == RiskKind::None ? LevelSet{0.0, 0.0} : risk_range(s.risk2);
  const Interval vdom = s.v.domain();
  if (!vdom.contains(s.w2 - s.loss + r2.lo) || !vdom.contains(s.w2 + r2.hi)) {
    std::ostringstream os;
    os << "period-2 wealth range [" << s.w2 - s.loss + r2.lo << ", " << s.w2 + r2.hi
       << "] leaves the domain of v (" << s.v.name() << ") under model " << to_string(m);
    fail(os.str());
  }
  const LevelSet r1 = lay.period1 == RiskKind::None ? LevelSet{0.0, 0.0} : risk_range(s.risk1);
  if (!s.u.domain().contains(s.w1 + r1.hi)) {
    std::ostringstream os;
    os << "period-1 wealth " << s.w1 + r1.hi << " leaves the domain of u (" << s.u.name()
       << ") under model " << to_string(m);
    fail(os.str());
  }
  if (!(effort_upper_bound(s, m) > 0.0)) {
    std::ostringstream os;
    os << "no admissible effort under model " << to_string(m)
       << ": period-1 wealth cannot cover its worst background outcome";
    fail(os.str());
  }
}

}  // namespace possprev
