#include <cmath>

#include <gtest/gtest.h>

#include "possprev/models.hpp"
#include "possprev/oracle.hpp"

using namespace possprev;

namespace {

Scenario log_benchmark() {
  return Scenario{"log", 10.0, 10.0, 5.0, UtilityFunction::log(), UtilityFunction::log(),
                  LossProbability::exponential(0.5, 1.0), WeightingFunction::uniform(),
                  std::nullopt, std::nullopt};
}

Scenario with_risks(Scenario s, std::optional<BackgroundRisk> r1,
                    std::optional<BackgroundRisk> r2) {
  s.risk1 = std::move(r1);
  s.risk2 = std::move(r2);
  return s;
}

double fd_total(const Scenario& s, ModelId m, double e) {
  const double h = 1e-6;
  return (total_utility(s, m, e + h) - total_utility(s, m, e - h)) / (2 * h);
}

}  // namespace

TEST(Benchmark, TotalUtilityAtZero) {
  // ln 10 + 0.5 ln 5 + 0.5 ln 10
  const double expected = 1.5 * std::log(10.0) + 0.5 * std::log(5.0);
  EXPECT_NEAR(total_utility(log_benchmark(), ModelId::Benchmark, 0.0), expected, 1e-14);
  EXPECT_NEAR(expected, 4.258597, 1e-6);
}

TEST(Benchmark, MarginalUtilityAtZero) {
  const Scenario s = log_benchmark();
  const double expected = -0.1 - 0.5 * (std::log(5.0) - std::log(10.0));
  EXPECT_NEAR(marginal_utility(s, ModelId::Benchmark, 0.0), expected, 1e-14);
  EXPECT_NEAR(expected, 0.2466, 1e-4);
  EXPECT_NEAR(fd_total(s, ModelId::Benchmark, 0.5), marginal_utility(s, ModelId::Benchmark, 0.5),
              1e-8);
}

TEST(Benchmark, InteriorOptimum) {
  const SolveResult r = solve_optimal(log_benchmark(), ModelId::Benchmark);
  EXPECT_EQ(r.corner, Corner::Interior);
  EXPECT_GT(r.e_star, 1.0);
  EXPECT_LT(r.e_star, 1.2);
  EXPECT_LE(std::abs(r.foc_residual), 1e-10);
  // frozen from the grid oracle (step 1e-4): 1.1237
  EXPECT_NEAR(r.e_star, 1.1237, 1e-4);
}

TEST(Benchmark, CornerAtZero) {
  Scenario s = log_benchmark();
  s.p = LossProbability::exponential(0.01, 0.1);
  EXPECT_LT(marginal_utility(s, ModelId::Benchmark, 0.0), 0.0);
  const SolveResult r = solve_optimal(s, ModelId::Benchmark);
  EXPECT_EQ(r.corner, Corner::AtZero);
  EXPECT_EQ(r.e_star, 0.0);
  EXPECT_LT(r.v_prime_at_zero, 0.0);
}

TEST(Models, DegenerateRisksReduceToBenchmark) {
  const Scenario base = log_benchmark();
  const auto crisp = BackgroundRisk(FuzzyNumber::crisp(0.0));
  const auto point = BackgroundRisk(DiscreteRandomVariable::point_mass(0.0));
  const double e_bench = solve_optimal(base, ModelId::Benchmark).e_star;
  struct Case {
    ModelId m;
    std::optional<BackgroundRisk> r1, r2;
  };
  const Case cases[] = {{ModelId::M1, point, {}},   {ModelId::M2, {}, point},
                        {ModelId::M3, point, point}, {ModelId::M4, crisp, {}},
                        {ModelId::M5, {}, crisp},   {ModelId::M6, crisp, crisp},
                        {ModelId::M7, point, crisp}, {ModelId::M8, crisp, point}};
  for (const auto& c : cases) {
    const Scenario s = with_risks(base, c.r1, c.r2);
    for (double e : {0.0, 0.7, 3.0}) {
      EXPECT_NEAR(total_utility(s, c.m, e), total_utility(base, ModelId::Benchmark, e), 1e-13)
          << to_string(c.m);
      EXPECT_NEAR(marginal_utility(s, c.m, e), marginal_utility(base, ModelId::Benchmark, e),
                  1e-13)
          << to_string(c.m);
    }
    EXPECT_NEAR(solve_optimal(s, c.m).e_star, e_bench, 1e-9) << to_string(c.m);
  }
}

TEST(Models, MarginalUtilityIsDerivativeOfTotal) {
  Scenario s = log_benchmark();
  s.u = UtilityFunction::crra(2.0);
  s.f = WeightingFunction::power_law(1.0);
  const auto a = BackgroundRisk(FuzzyNumber::triangular(0.0, 1.0, 2.0));
  const auto b = BackgroundRisk(FuzzyNumber::trapezoidal(-0.5, 0.5, 1.0, 1.0));
  const auto x = BackgroundRisk(DiscreteRandomVariable({{-1.0, 0.3}, {0.5, 0.7}}));
  const auto y = BackgroundRisk(discretize_normal(0.0, 0.8, 5));
  const std::pair<ModelId, Scenario> cases[] = {
      {ModelId::M1, with_risks(s, x, {})}, {ModelId::M2, with_risks(s, {}, y)},
      {ModelId::M3, with_risks(s, x, y)},  {ModelId::M4, with_risks(s, a, {})},
      {ModelId::M5, with_risks(s, {}, b)}, {ModelId::M6, with_risks(s, a, b)},
      {ModelId::M7, with_risks(s, x, b)},  {ModelId::M8, with_risks(s, a, y)}};
  for (const auto& [m, sc] : cases) {
    for (double e : {0.2, 1.0, 2.5}) {
      EXPECT_NEAR(fd_total(sc, m, e), marginal_utility(sc, m, e), 1e-7) << to_string(m);
    }
    const SolveResult r = solve_optimal(sc, m);
    EXPECT_EQ(r.corner, Corner::Interior) << to_string(m);
    EXPECT_LE(PreparedModel(sc, m).foc_sides(r.e_star).relative_residual(), 1e-9);
    EXPECT_NEAR(r.e_star, oracle::argmax(sc, m), 1e-4) << to_string(m);
  }
}

TEST(Models, MissingRiskIsModelMismatch) {
  try {
    total_utility(log_benchmark(), ModelId::M4, 0.0);
    FAIL() << "expected ModelMismatchError";
  } catch (const ModelMismatchError& e) {
    EXPECT_NE(std::string(e.what()).find("model m4 requires a period-1 fuzzy risk"),
              std::string::npos);
  }
  const Scenario s = with_risks(log_benchmark(), DiscreteRandomVariable::point_mass(0.0), {});
  EXPECT_THROW(solve_optimal(s, ModelId::M4), ModelMismatchError);
}

TEST(Models, EffortOutsideRangeIsDomainError) {
  const Scenario s = log_benchmark();
  EXPECT_THROW(total_utility(s, ModelId::Benchmark, -0.1), DomainError);
  EXPECT_THROW(total_utility(s, ModelId::Benchmark, 10.0), DomainError);
  const auto a = BackgroundRisk(FuzzyNumber::triangular(0.0, 2.0, 1.0));
  EXPECT_NEAR(PreparedModel(with_risks(s, a, {}), ModelId::M4).upper_bound(), 8.0 - kEffortMargin,
              1e-12);
}

TEST(Models, WealthOutsideDomainIsRejected) {
  Scenario s = log_benchmark();
  s.risk2 = FuzzyNumber::triangular(0.0, 6.0, 1.0);  // w2 - l - 6 < 0
  EXPECT_THROW(solve_optimal(s, ModelId::M5), ValidationError);
}

TEST(Models, UpperCorner) {
  // a near-total loss that prevention cuts sharply, with little period-1 wealth
  Scenario s = log_benchmark();
  s.w1 = 0.2;
  s.loss = 9.9;
  s.u = UtilityFunction::cara(1.0);
  s.p = LossProbability::exponential(0.9, 5.0);
  const SolveResult r = solve_optimal(s, ModelId::Benchmark);
  EXPECT_EQ(r.corner, Corner::AtUpperBound);
  EXPECT_DOUBLE_EQ(r.e_star, r.upper_bound);
}
