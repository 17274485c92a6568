#include <gtest/gtest.h>

#include "possprev/generator.hpp"
#include "possprev/models.hpp"
#include "possprev/scenario_io.hpp"

using namespace possprev;
using io::json;

namespace {

json log_benchmark_json() {
  return json::parse(R"({
    "id": "log",
    "wealth": {"w1": 10, "w2": 10},
    "loss": 5,
    "utilities": {"u": {"log": {}}, "v": {"log": {}}},
    "loss_probability": {"exp_loss": {"p0": 0.5, "k": 1}},
    "weighting": {"uniform": {}}
  })");
}

std::string schema_error_where(const json& doc) {
  try {
    io::parse_document(doc);
  } catch (const io::SchemaError& e) {
    return e.where();
  }
  return "<no error>";
}

}  // namespace

TEST(ScenarioIo, ParsesSingleScenario) {
  const auto entries = io::parse_document(log_benchmark_json());
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].scenario.id, "log");
  EXPECT_EQ(entries[0].models, std::vector<ModelId>{ModelId::Benchmark});
  EXPECT_NEAR(solve_optimal(entries[0].scenario, ModelId::Benchmark).e_star, 1.1237, 1e-4);
}

TEST(ScenarioIo, DefaultModelsFollowRiskSlots) {
  json doc = log_benchmark_json();
  doc["risk1"] = {{"triangular", {0, 1, 1}}};
  doc["risk2"] = {{"discrete", {{-1, 0.5}, {1, 0.5}}}};
  const auto entries = io::parse_document(doc);
  EXPECT_EQ(entries[0].models,
            (std::vector<ModelId>{ModelId::Benchmark, ModelId::M2, ModelId::M4, ModelId::M8}));
  doc["models"] = "all";
  EXPECT_EQ(io::parse_document(doc)[0].models.size(), 9u);
}

TEST(ScenarioIo, RiskFamilies) {
  json doc = log_benchmark_json();
  doc["risk1"] = {{"sampled", {{0, -1, 1}, {0.5, -0.5, 0.5}, {1, 0, 0}}}, {"shift", 0.25}};
  doc["risk2"] = {{"normal", {{"mean", 0}, {"stdev", 1}, {"nodes", 5}}}};
  const Scenario s = io::parse_document(doc)[0].scenario;
  EXPECT_DOUBLE_EQ(std::get<FuzzyNumber>(*s.risk1).level_set(0.5).lo, -0.25);
  EXPECT_EQ(std::get<DiscreteRandomVariable>(*s.risk2).outcomes().size(), 5u);
}

TEST(ScenarioIo, FieldDiagnostics) {
  json doc = log_benchmark_json();
  doc["utilities"]["u"] = {{"crra", {{"eta", -1}}}};
  EXPECT_EQ(schema_error_where(doc), "utilities.u.crra.eta");

  doc = log_benchmark_json();
  doc["wealth"].erase("w2");
  EXPECT_EQ(schema_error_where(doc), "wealth.w2");

  doc = log_benchmark_json();
  doc["colour"] = "red";
  EXPECT_EQ(schema_error_where(doc), "colour");

  doc = log_benchmark_json();
  doc["loss"] = "five";
  EXPECT_EQ(schema_error_where(doc), "loss");

  doc = log_benchmark_json();
  doc["risk1"] = {{"discrete", {{0, 0.5}, {1, 0.4}}}};
  EXPECT_EQ(schema_error_where(doc), "risk1.discrete");

  doc = log_benchmark_json();
  doc["models"] = {"benchmark", "m9"};
  EXPECT_EQ(schema_error_where(doc), "models[1]");

  json batch = {{"scenarios", {log_benchmark_json(), log_benchmark_json()}}};
  batch["scenarios"][1]["weighting"] = {{"power", {{"k", -2}}}};
  EXPECT_EQ(schema_error_where(batch), "scenarios[1].weighting.power.k");
}

TEST(ScenarioIo, MalformedJsonReportsPosition) {
  try {
    io::parse_json_text("{\n  \"loss\": 5,,\n}");
    FAIL() << "expected SchemaError";
  } catch (const io::SchemaError& e) {
    EXPECT_EQ(e.where().rfind("line 2", 0), 0u) << e.where();
  }
}

TEST(ScenarioIo, RoundTripPreservesSolutions) {
  EnsembleOptions eo;
  eo.risk1 = RiskKind::Fuzzy;
  eo.risk2 = RiskKind::Random;
  eo.prudent_only = false;
  const ScenarioGenerator gen(5, eo);
  for (long i = 0; i < 20; ++i) {
    const Scenario s = gen.at(i);
    const std::string text = io::to_json(s).dump();
    const Scenario back = io::parse_document(io::parse_json_text(text))[0].scenario;
    EXPECT_EQ(io::to_json(back).dump(), text);
    for (ModelId m : {ModelId::Benchmark, ModelId::M4, ModelId::M8}) {
      EXPECT_EQ(solve_optimal(back, m).e_star, solve_optimal(s, m).e_star);
    }
  }
}

TEST(ScenarioIo, NumbersRoundTripAt17Digits) {
  for (double x : {0.1, 1.1237222011869679, -3.3e-17, 12345.678901234567}) {
    EXPECT_EQ(std::stod(io::format_number(x)), x);
  }
}
