// Acceptance suite: one pass/fail line per criterion, tolerances pinned here.
//
//   acceptance                 run every criterion
//   acceptance --criterion 6   run one
//
// Exit status is 0 only if every selected criterion passes.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <CLI11.hpp>

#include "possprev/checks.hpp"

using namespace possprev;

namespace {

constexpr std::uint64_t kSeed = 42;

constexpr double kQuadratureTolerance = 1e-6;
constexpr double kIdentityTolerance = 1e-12;
constexpr double kCoreRuntimeSeconds = 60.0;
constexpr long kCoreCount = 200;
constexpr long kJensenCount = 500;
constexpr long kFocCount = 100;
constexpr long kDegeneracyCount = 200;
constexpr double kDegeneracyTolerance = 1e-9;
constexpr long kTheoremCount = 1000;
constexpr double kGuardBand = 1e-7;
constexpr double kBoundaryTolerance = 1e-8;
constexpr long kBoundaryCount = 200;
constexpr double kGridStep = 1e-4;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

bool report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::cout << "criterion " << id << " [" << (pass ? "PASS" : "FAIL") << "] " << title << ": "
            << detail << std::endl;
  return pass;
}

void sub_line(const std::string& tag, bool pass, const checks::CheckLine& l) {
  std::cout << "    " << tag << ' ' << (pass ? "PASS" : "FAIL") << ' ' << l.name
            << "  pass=" << l.passed << " fail=" << l.failed << " tie=" << l.skipped
            << "  worst " << l.metric_name << " = " << num(l.worst) << std::endl;
}

checks::CheckOptions options(long count) {
  checks::CheckOptions opt;
  opt.seed = kSeed;
  opt.count = count;
  opt.guard_band = kGuardBand;
  return opt;
}

const checks::CheckLine& find(const std::vector<checks::CheckLine>& lines, const std::string& name) {
  for (const auto& l : lines) {
    if (l.name == name) return l;
  }
  throw InternalError("no check line " + name);
}

bool criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = checks::run_oracle(options(kCoreCount));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& quad = find(r.lines, "quadrature_vs_midpoint");
  const auto& ident = find(r.lines, "identity_reduction");
  const bool pass = quad.failed == 0 && quad.passed >= kCoreCount &&
                    quad.worst <= kQuadratureTolerance && ident.failed == 0 &&
                    ident.worst <= kIdentityTolerance && seconds < kCoreRuntimeSeconds;
  return report(1, pass, "possibilistic core vs midpoint oracle",
                std::to_string(quad.passed) + " triples, max gap " + num(quad.worst) +
                    " (<= 1e-6), identity reduction " + num(ident.worst) +
                    " (<= 1e-12), runtime " + num(seconds) + " s (< 60 s)");
}

bool criterion2() {
  const auto r = checks::run_jensen(options(kJensenCount));
  const auto& jensen = find(r.lines, "jensen_inequality");
  const auto& linear = find(r.lines, "linearity");
  const bool pass = jensen.failed == 0 && jensen.passed == kJensenCount && linear.failed == 0 &&
                    linear.passed == kJensenCount;
  return report(2, pass, "Jensen and linearity",
                std::to_string(jensen.passed) + "/500 Jensen (max excess " + num(jensen.worst) +
                    " <= 1e-10), " + std::to_string(linear.passed) +
                    "/500 linearity (max residual " + num(linear.worst) + " <= 1e-9)");
}

bool criterion3() {
  const auto r = checks::run_focs(options(kFocCount));
  long failures = 0;
  double foc = 0.0;
  double grid = 0.0;
  for (const auto& l : r.lines) {
    failures += l.failed;
    if (l.name.ends_with(".foc")) foc = std::max(foc, l.worst);
    if (l.name.ends_with(".oracle_argmax")) grid = std::max(grid, l.worst);
  }
  const bool pass = failures == 0 && r.lines.size() == 27;
  for (const auto& l : r.lines) {
    if (l.failed != 0) sub_line("3", false, l);
  }
  return report(3, pass, "first-order conditions, nine models x 100 scenarios",
                std::to_string(failures) + " failures; max relative FOC residual " + num(foc) +
                    " (<= 1e-9), V' strictly decreasing, max |e* - grid argmax| " + num(grid) +
                    " (<= 1e-4)");
}

bool criterion4() {
  EnsembleOptions eo;
  eo.prudent_only = false;
  const ScenarioGenerator gen(kSeed, eo);
  const BackgroundRisk crisp = FuzzyNumber::crisp(0.0);
  const BackgroundRisk point = DiscreteRandomVariable::point_mass(0.0);
  double worst = 0.0;
  long scenarios = 0;
  for (long i = 0; i < kDegeneracyCount; ++i) {
    const Scenario base = gen.at(i);
    const double e_bench = solve_optimal(base, ModelId::Benchmark).e_star;
    for (ModelId m : kAllModels) {
      Scenario s = base;
      const RiskLayout lay = layout(m);
      if (lay.period1 != RiskKind::None) s.risk1 = lay.period1 == RiskKind::Fuzzy ? crisp : point;
      if (lay.period2 != RiskKind::None) s.risk2 = lay.period2 == RiskKind::Fuzzy ? crisp : point;
      worst = std::max(worst, std::abs(solve_optimal(s, m).e_star - e_bench));
    }
    ++scenarios;
  }
  return report(4, worst <= kDegeneracyTolerance, "degeneracy (crisp and point-mass risks)",
                std::to_string(scenarios) + " scenarios, max spread of the nine optima " +
                    num(worst) + " (<= 1e-9)");
}

bool criterion5() {
  const auto lines = checks::run_equivalences(options(kTheoremCount));
  bool pass = true;
  long decided = 0;
  long ties = 0;
  for (const auto& l : lines) {
    const bool ok = l.failed == 0 && l.passed + l.skipped == kTheoremCount;
    pass = pass && ok;
    decided += l.passed;
    ties += l.skipped;
    sub_line("5", ok, l);
  }
  for (const auto& l : checks::run_pairs(options(kTheoremCount))) {
    sub_line("5 (info)", l.failed == 0, l);
  }
  return report(5, pass, "equivalence results, 1000 scenarios each",
                std::to_string(decided) + " decided, " + std::to_string(ties) +
                    " ties inside the 1e-7 band, violations: " +
                    std::string(pass ? "0" : "see above"));
}

bool criterion6() {
  const auto opt = options(kTheoremCount);
  const auto lines = checks::run_sufficient(opt);
  bool pass = true;
  std::vector<std::string> failed;
  for (const auto& l : lines) {
    const bool ok = l.failed == 0;
    if (!ok) failed.push_back(l.name);
    pass = pass && ok;
    sub_line("6", ok, l);
  }

  // The stated ordering for C6_2 and C6_6 is reversed; show that the
  // reversed ordering holds on the same scenarios.
  for (ConditionId c : {ConditionId::C6_2, ConditionId::C6_6}) {
    const ComparisonCase cc = make_case(c, kGuardBand);
    const auto gen = checks::sufficient_ensemble(opt, c);
    checks::CheckLine l;
    l.name = std::string(to_string(c)) + ".reversed";
    l.metric_name = "max(e_right - e_left)";
    for (long i = 0; i < kTheoremCount; ++i) {
      const ComparisonVerdict v = verify_sufficient(gen.at(i), cc);
      l.add(checks::Item{v.e_right <= v.e_left + kCorollaryTolerance, v.e_right - v.e_left,
                         false, std::nullopt});
    }
    sub_line("6 (info)", l.failed == 0, l);
  }

  // Quadratic u: condition (ii) of the period-1 result holds with equality.
  EnsembleOptions eo;
  eo.risk1 = RiskKind::Fuzzy;
  eo.zero_mean = true;
  eo.prudent_only = false;
  const ScenarioGenerator gen(kSeed * 1000 + 230, eo);
  double worst = 0.0;
  long quadratic = 0;
  for (long i = 0; quadratic < kBoundaryCount; ++i) {
    Scenario s = gen.at(i);
    if (s.u.prudent()) continue;
    ++quadratic;
    worst = std::max(worst, std::abs(condition_value(s, make_case(ConditionId::P5_1))));
  }
  const bool boundary = worst <= kBoundaryTolerance;
  std::cout << "    6 " << (boundary ? "PASS" : "FAIL") << " C5_2.quadratic_boundary  "
            << quadratic << " scenarios, max |condition| = " << num(worst) << " (<= 1e-8)"
            << std::endl;
  pass = pass && boundary;

  std::string detail = "as stated on prudent zero-mean scenarios";
  if (!failed.empty()) {
    detail += "; violated:";
    for (const auto& f : failed) detail += " " + f;
    detail += " (the reversed ordering holds, see info lines)";
  }
  return report(6, pass, "sufficient-condition results", detail);
}

bool criterion7() {
  const auto lines = checks::run_remarks(options(kTheoremCount));
  bool pass = true;
  std::string detail;
  for (const auto& l : lines) {
    if (l.name.ends_with(".ambiguity")) {
      pass = pass && l.failed == 0;
      detail += (detail.empty() ? "" : ", ") + l.name.substr(0, l.name.find('.')) + " " +
                (l.failed == 0 ? "found after " + num(l.worst) + " scenarios" : "not found");
      sub_line("7", l.failed == 0, l);
    } else {
      sub_line("7 (info)", l.failed == 0, l);
    }
  }
  return report(7, pass, "ambiguity witnesses within 1e4 scenarios", detail);
}

bool criterion8() {
  const Scenario s{"log", 10.0, 10.0, 5.0, UtilityFunction::log(), UtilityFunction::log(),
                   LossProbability::exponential(0.5, 1.0), WeightingFunction::uniform(),
                   std::nullopt, std::nullopt};
  const SolveResult r = solve_optimal(s, ModelId::Benchmark);
  const double grid = oracle::argmax(s, ModelId::Benchmark);
  const bool pass = r.corner == Corner::Interior && r.e_star > 1.0 && r.e_star < 1.2 &&
                    std::abs(r.e_star - grid) <= kGridStep;
  return report(8, pass, "worked benchmark instance",
                "e* = " + io::format_number(r.e_star) + " in (1.0, 1.2), grid argmax " +
                    num(grid) + ", |diff| " + num(std::abs(r.e_star - grid)) + " (<= 1e-4)");
}

struct CliRun {
  int code;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(POSSPREV_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) out += buf.data();
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

bool criterion9() {
  const std::string path = "acceptance_invalid_scenario.json";
  std::ofstream(path) << R"({"wealth": {"w1": 10, "w2": 10}, "loss": 5,
    "utilities": {"u": {"log": {}}, "v": {"cara": {"alpha": -1}}},
    "loss_probability": {"exp_loss": {"p0": 0.5, "k": 1}}, "weighting": {"uniform": {}}})";
  const CliRun bad = run_cli("solve " + path);
  std::remove(path.c_str());
  const bool schema = bad.code == 2 && bad.out.find("utilities.v.cara.alpha") != std::string::npos;

  const CliRun first = run_cli("check --suite all --seed 42");
  const CliRun second = run_cli("check --suite all --seed 42");
  const bool deterministic = first.out == second.out && first.code == second.code &&
                             first.out.find("result:") != std::string::npos;
  return report(9, schema && deterministic, "CLI contract",
                "invalid input exit " + std::to_string(bad.code) + " naming " +
                    (schema ? "utilities.v.cara.alpha" : "no field") +
                    "; check --suite all --seed 42 twice: " +
                    (deterministic ? "identical" : "different") + " output (exit " +
                    std::to_string(first.code) + ")");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run one criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  bool (*const criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                criterion6, criterion7, criterion8, criterion9};
  bool all = true;
  for (int i = 1; i <= 9; ++i) {
    if (only != 0 && only != i) continue;
    try {
      all = criteria[i - 1]() && all;
    } catch (const std::exception& e) {
      all = report(i, false, "error", e.what()) && all;
    }
  }
  return all ? 0 : 1;
}
