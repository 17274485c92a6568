// Runs the possprev executable on the bundled scenario files.
#include <array>
#include <set>
#include <vector>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(POSSPREV_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) out += buf.data();
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string scenario(const std::string& name) {
  return std::string(POSSPREV_SCENARIOS) + "/" + name;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, SolveBenchmarkCsv) {
  const CliRun r = run("solve " + scenario("benchmark_log.json") + " --model benchmark --format csv");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "scenario_id,model,e_star,foc_residual,corner");
  EXPECT_EQ(rows[1].rfind("log-benchmark,benchmark,1.12372220118", 0), 0u) << rows[1];
  EXPECT_NE(rows[1].find(",interior"), std::string::npos);
}

TEST(Cli, SolveCrispBatchAllModelsCoincide) {
  const CliRun r = run("solve " + scenario("crisp_batch.json") + " --format csv");
  ASSERT_EQ(r.code, 0) << r.out;
  std::set<std::string> models;
  double first = -1.0;
  for (const auto& row : lines(r.out)) {
    if (row.rfind("scenario_id", 0) == 0) continue;
    std::stringstream ss(row);
    std::string id, model, e;
    std::getline(ss, id, ',');
    std::getline(ss, model, ',');
    std::getline(ss, e, ',');
    models.insert(model);
    if (first < 0) first = std::stod(e);
    EXPECT_NEAR(std::stod(e), first, 1e-9) << row;
  }
  EXPECT_EQ(models.size(), 9u);
}

TEST(Cli, MissingRiskExitsThree) {
  const CliRun r = run("solve " + scenario("benchmark_log.json") + " --model m4");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("model m4 requires a period-1 fuzzy risk"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("log-benchmark"), std::string::npos);
}

TEST(Cli, SchemaErrorsExitTwo) {
  const std::string bad = write_temp("bad_eta.json", R"({"wealth": {"w1": 10, "w2": 10}, "loss": 5,
    "utilities": {"u": {"crra": {"eta": -2}}, "v": {"log": {}}},
    "loss_probability": {"exp_loss": {"p0": 0.5, "k": 1}}, "weighting": {"uniform": {}}})");
  CliRun r = run("solve " + bad);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("utilities.u.crra.eta"), std::string::npos) << r.out;

  r = run("solve " + write_temp("bad_syntax.json", "{\n \"loss\": 5,,\n}"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("line 2"), std::string::npos) << r.out;

  r = run("solve /nonexistent/file.json");
  EXPECT_EQ(r.code, 2);
  r = run("solve " + scenario("benchmark_log.json") + " --format xml");
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, CompareCrispTieIsUndefined) {
  const std::string path = write_temp("crisp_ff.json", R"({"id": "ff", "wealth": {"w1": 10, "w2": 10},
    "loss": 5, "utilities": {"u": {"log": {}}, "v": {"log": {}}},
    "loss_probability": {"exp_loss": {"p0": 0.5, "k": 1}}, "weighting": {"uniform": {}},
    "risk1": {"triangular": [0, 1, 1]}, "risk2": {"crisp": 0}})");
  const CliRun r = run("compare " + path + " --pair m4:m6 --format csv");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("undefined(tie)"), std::string::npos) << r.out;
}

TEST(Cli, ComparePrudentZeroMean) {
  const std::string path = write_temp("sym.json", R"({"id": "sym", "wealth": {"w1": 10, "w2": 10},
    "loss": 5, "utilities": {"u": {"log": {}}, "v": {"log": {}}},
    "loss_probability": {"exp_loss": {"p0": 0.5, "k": 1}}, "weighting": {"uniform": {}},
    "risk1": {"triangular": [0, 1, 1]}})");
  const CliRun r = run("compare " + path + " --pair benchmark:m4 --format csv");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("sym,P5_1,m4,benchmark,"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("e_m4<=e_benchmark,true,"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find(",true,respected"), std::string::npos) << r.out;
}

TEST(Cli, CompareNotComparableExitsThree) {
  const CliRun r = run("compare " + scenario("benchmark_log.json") + " --pair m1:m2");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("not comparable"), std::string::npos);
}

TEST(Cli, CheckJensenPasses) {
  const CliRun r = run("check --suite jensen --count 500 --seed 3");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("pass=500 fail=0"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("seed=3"), std::string::npos);
}

TEST(Cli, CheckIsDeterministic) {
  const CliRun a = run("check --suite oracle --seed 9 --count 40");
  const CliRun b = run("check --suite oracle --seed 9 --count 40 --threads 1");
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SweepRows) {
  const std::string file = scenario("mixed_risks.json");
  CliRun r = run("sweep " + file + " --param risk2.spread --from 0 --to 2 --steps 20 --models benchmark,m5");
  ASSERT_EQ(r.code, 0) << r.out;
  auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 22u);
  EXPECT_EQ(rows[0], "risk2.spread,e_star_benchmark,e_star_m5");
  double prev = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double e5 = std::stod(rows[i].substr(rows[i].rfind(',') + 1));
    EXPECT_GE(e5, prev - 1e-12) << rows[i];
    prev = e5;
  }

  r = run("sweep " + file + " --param loss --from 1 --to 8 --steps 1");
  ASSERT_EQ(r.code, 0) << r.out;
  rows = lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].rfind("1,", 0), 0u);
  EXPECT_EQ(rows[2].rfind("8,", 0), 0u);

  r = run("sweep " + file + " --param utilities.u.nope --from 1 --to 2");
  EXPECT_EQ(r.code, 2);
}
