// possprev: optimal prevention under possibilistic and mixed background risk.
//
//   possprev solve   <file> [--model <id|all>] [--format table|csv]
//   possprev compare <file> [--pair <left:right|paper-set>] [--band <eps>] [--format table|csv]
//   possprev check   [--suite jensen|focs|theorems|oracle|all] [--seed n] [--count n]
//   possprev sweep   <file> --param <path> --from a --to b --steps n [--models m,...]
//
// Exit codes: 0 success, 1 check violation, 2 invalid input, 3 domain/solve error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "possprev/checks.hpp"
#include "possprev/comparison.hpp"
#include "possprev/models.hpp"
#include "possprev/scenario_io.hpp"

namespace {

using namespace possprev;
using io::format_number;

constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolve = 3;

// Solve/model failure tied to a scenario.
struct ScenarioFailure {
  std::string scenario;
  std::string message;
};

void print_metadata(std::ostream& out, const std::string& extra) {
  out << "# possprev " << POSSPREV_VERSION << "  solver: bisection bracket 1e-12, |V'| <= 1e-10"
      << "  quadrature: 64-pt Gauss-Legendre" << extra << '\n';
}

// Short form for settings echoed in report headers.
std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

// ---- solve ---------------------------------------------------------------

int cmd_solve(const std::string& file, const std::string& model, const std::string& format) {
  const auto entries = io::load_file(file);
  std::optional<ModelId> only;
  if (model != "all") {
    only = parse_model(model);
    if (!only) {
      std::cerr << "error: --model: unknown model '" << model << "'\n";
      return kExitInput;
    }
  }
  std::vector<std::pair<std::string, SolveResult>> rows;
  for (const auto& entry : entries) {
    std::vector<ModelId> models = only ? std::vector<ModelId>{*only} : entry.models;
    for (ModelId m : models) {
      try {
        rows.emplace_back(entry.scenario.id, solve_optimal(entry.scenario, m));
      } catch (const Error& e) {
        throw ScenarioFailure{entry.scenario.id, e.what()};
      }
    }
  }
  if (format == "csv") {
    std::cout << "scenario_id,model,e_star,foc_residual,corner\n";
    for (const auto& [id, r] : rows) {
      std::cout << id << ',' << to_string(r.model) << ',' << format_number(r.e_star) << ','
                << format_number(r.foc_residual) << ',' << to_string(r.corner) << '\n';
    }
  } else {
    print_metadata(std::cout, "");
    std::cout << pad("scenario", 24) << pad("model", 11) << pad("e_star", 26)
              << pad("foc_residual", 26) << "corner\n";
    for (const auto& [id, r] : rows) {
      std::cout << pad(id, 24) << pad(std::string(to_string(r.model)), 11)
                << pad(format_number(r.e_star), 26) << pad(format_number(r.foc_residual), 26)
                << to_string(r.corner) << '\n';
    }
  }
  return 0;
}

// ---- compare -------------------------------------------------------------

std::optional<ConditionId> named_condition(ModelId a, ModelId b) {
  using M = ModelId;
  auto is = [&](M x, M y) { return (a == x && b == y) || (a == y && b == x); };
  if (is(M::Benchmark, M::M4)) return ConditionId::P5_1;
  if (is(M::Benchmark, M::M5)) return ConditionId::P5_3;
  if (is(M::Benchmark, M::M6)) return ConditionId::P5_6;
  if (is(M::Benchmark, M::M7)) return ConditionId::P5_8;
  if (is(M::Benchmark, M::M8)) return ConditionId::P5_10;
  if (is(M::M4, M::M6)) return ConditionId::P6_1;
  if (is(M::M5, M::M6)) return ConditionId::P6_3;
  if (is(M::M1, M::M7)) return ConditionId::P6_5;
  return std::nullopt;
}

ComparisonVerdict compare_models(const Scenario& s, ModelId a, ModelId b, double band) {
  if (auto c = named_condition(a, b)) return verify_equivalence(s, make_case(*c, band));
  return compare_pair(s, a, b, band);
}

bool supports(const Scenario& s, ModelId m) {
  const RiskLayout lay = layout(m);
  return (lay.period1 == RiskKind::None || lay.period1 == kind_of(s.risk1)) &&
         (lay.period2 == RiskKind::None || lay.period2 == kind_of(s.risk2));
}

int cmd_compare(const std::string& file, const std::string& pair, double band,
                const std::string& format) {
  const auto entries = io::load_file(file);
  using M = ModelId;
  std::vector<std::pair<M, M>> pairs;
  const bool paper_set = pair == "paper-set";
  if (paper_set) {
    pairs = {{M::Benchmark, M::M4}, {M::Benchmark, M::M5}, {M::Benchmark, M::M6},
             {M::Benchmark, M::M7}, {M::Benchmark, M::M8}, {M::M1, M::M3},
             {M::M1, M::M7},        {M::M2, M::M3},        {M::M2, M::M8},
             {M::M4, M::M6},        {M::M4, M::M8},        {M::M5, M::M6},
             {M::M5, M::M7}};
  } else {
    const auto colon = pair.find(':');
    const auto left = colon == std::string::npos ? std::nullopt : parse_model(pair.substr(0, colon));
    const auto right = colon == std::string::npos ? std::nullopt : parse_model(pair.substr(colon + 1));
    if (!left || !right) {
      std::cerr << "error: --pair: expected <model>:<model> or paper-set, got '" << pair << "'\n";
      return kExitInput;
    }
    pairs = {{*left, *right}};
  }

  struct Row {
    std::string id;
    ComparisonVerdict v;
  };
  std::vector<Row> rows;
  std::vector<std::string> skipped;
  for (const auto& entry : entries) {
    for (const auto& [a, b] : pairs) {
      if (paper_set && !(supports(entry.scenario, a) && supports(entry.scenario, b))) {
        skipped.push_back(entry.scenario.id + "/" + std::string(to_string(a)) + ":" +
                          std::string(to_string(b)));
        continue;
      }
      try {
        rows.push_back({entry.scenario.id, compare_models(entry.scenario, a, b, band)});
      } catch (const Error& e) {
        throw ScenarioFailure{entry.scenario.id, e.what()};
      }
    }
  }
  auto equivalence = [](const ComparisonVerdict& v) -> std::string {
    if (!v.equivalence_respected) return std::isnan(v.margin) ? "undefined(condition)" : "undefined(tie)";
    return *v.equivalence_respected ? "respected" : "violated";
  };
  auto claim = [](const ComparisonVerdict& v) {
    return "e_" + std::string(to_string(v.left)) + "<=e_" + std::string(to_string(v.right));
  };
  auto result = [](const ComparisonVerdict& v) -> std::string {
    return v.condition == ConditionId::GenericPair ? "pair" : std::string(to_string(v.condition));
  };
  if (format == "csv") {
    std::cout << "scenario_id,result,left,right,e_left,e_right,ordering,ordering_holds,"
                 "condition_value,condition_holds,equivalence\n";
    for (const auto& [id, v] : rows) {
      std::cout << id << ',' << result(v) << ',' << to_string(v.left) << ',' << to_string(v.right)
                << ',' << format_number(v.e_left) << ',' << format_number(v.e_right) << ','
                << claim(v) << ',' << (v.ordering_holds ? "true" : "false") << ','
                << format_number(v.margin) << ',' << (v.condition_holds ? "true" : "false")
                << ',' << equivalence(v) << '\n';
    }
  } else {
    print_metadata(std::cout, "  guard band: " + short_number(band));
    std::cout << pad("scenario", 20) << pad("result", 8) << pad("ordering", 22)
              << pad("e_left", 24) << pad("e_right", 24) << pad("holds", 7)
              << pad("condition", 24) << pad("holds", 7) << "equivalence\n";
    for (const auto& [id, v] : rows) {
      std::cout << pad(id, 20) << pad(result(v), 8) << pad(claim(v), 22)
                << pad(format_number(v.e_left), 24) << pad(format_number(v.e_right), 24)
                << pad(v.ordering_holds ? "yes" : "no", 7) << pad(format_number(v.margin), 24)
                << pad(v.condition_holds ? "yes" : "no", 7) << equivalence(v) << '\n';
    }
    if (!skipped.empty()) {
      std::cout << "# " << skipped.size() << " pair(s) skipped, scenario lacks a risk:";
      for (const auto& s : skipped) std::cout << ' ' << s;
      std::cout << '\n';
    }
  }
  return 0;
}

// ---- check ---------------------------------------------------------------

int cmd_check(const std::string& suite, const checks::CheckOptions& opt) {
  std::vector<std::string> suites;
  if (suite == "all") suites = {"jensen", "oracle", "focs", "theorems"};
  else suites = {suite};

  std::cout << "possprev check  version=" << POSSPREV_VERSION << "  seed=" << opt.seed
            << "  guard_band=" << short_number(opt.guard_band) << '\n';
  bool ok = true;
  std::vector<std::pair<std::string, io::json>> offenders;
  for (const auto& name : suites) {
    checks::SuiteReport report = name == "jensen"   ? checks::run_jensen(opt)
                                 : name == "oracle" ? checks::run_oracle(opt)
                                 : name == "focs"   ? checks::run_focs(opt)
                                                    : checks::run_theorems(opt);
    std::cout << '[' << report.suite << "] count=" << report.count << '\n';
    for (const auto& line : report.lines) {
      std::cout << "  " << pad(line.name, 28) << (line.failed == 0 ? "PASS " : "FAIL ")
                << "pass=" << line.passed << " fail=" << line.failed << " tie=" << line.skipped
                << "  worst " << line.metric_name << " = " << format_number(line.worst) << '\n';
      if (line.offending) offenders.emplace_back(report.suite + "/" + line.name, *line.offending);
    }
    ok = ok && report.ok();
  }
  for (const auto& [where, replay] : offenders) {
    std::cout << "# first violation in " << where << " (replay input):\n" << replay.dump() << '\n';
  }
  std::cout << "result: " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? 0 : kExitViolation;
}

// ---- sweep ---------------------------------------------------------------

// Numeric leaves addressed by a dotted path; "<risk>.spread" addresses both
// spreads of a triangular or trapezoidal risk.
std::vector<io::json*> resolve_path(io::json& root, const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  if (parts.empty()) throw io::SchemaError("--param", "empty parameter path");

  if (parts.size() == 2 && parts[1] == "spread" && root.contains(parts[0])) {
    io::json& risk = root[parts[0]];
    if (risk.contains("triangular")) return {&risk["triangular"][1], &risk["triangular"][2]};
    if (risk.contains("trapezoidal")) return {&risk["trapezoidal"][2], &risk["trapezoidal"][3]};
    throw io::SchemaError("--param " + path, "spread needs a triangular or trapezoidal risk");
  }
  io::json* node = &root;
  for (const auto& part : parts) {
    if (node->is_object() && node->contains(part)) {
      node = &(*node)[part];
    } else if (node->is_array() && !part.empty() &&
               part.find_first_not_of("0123456789") == std::string::npos &&
               std::stoul(part) < node->size()) {
      node = &(*node)[std::stoul(part)];
    } else {
      throw io::SchemaError("--param " + path, "no such field '" + part + "'");
    }
  }
  if (!node->is_number()) throw io::SchemaError("--param " + path, "field is not numeric");
  return {node};
}

int cmd_sweep(const std::string& file, const std::string& param, double from, double to,
              int steps, const std::vector<std::string>& model_names,
              const std::string& scenario_id) {
  if (steps < 1) throw io::SchemaError("--steps", "must be >= 1");
  const auto entries = io::load_file(file);
  const io::ScenarioEntry* entry = &entries.front();
  if (!scenario_id.empty()) {
    entry = nullptr;
    for (const auto& e : entries) {
      if (e.scenario.id == scenario_id) entry = &e;
    }
    if (!entry) throw io::SchemaError("--scenario", "no scenario with id '" + scenario_id + "'");
  }
  std::vector<ModelId> models;
  for (const auto& name : model_names) {
    auto m = parse_model(name);
    if (!m) throw io::SchemaError("--models", "unknown model '" + name + "'");
    models.push_back(*m);
  }
  io::json probe = entry->source;
  resolve_path(probe, param);

  std::cout << param;
  for (ModelId m : models) std::cout << ",e_star_" << to_string(m);
  std::cout << '\n';
  for (int k = 0; k <= steps; ++k) {
    const double value = k == steps ? to : from + (to - from) * k / steps;
    io::json doc = entry->source;
    for (io::json* leaf : resolve_path(doc, param)) *leaf = value;
    std::cout << format_number(value);
    std::optional<io::ScenarioEntry> point;
    try {
      point = io::parse_scenario(doc, "", entry->scenario.id);
    } catch (const io::SchemaError& e) {
      std::cerr << "warning: " << param << "=" << format_number(value) << ": " << e.what() << '\n';
    }
    for (ModelId m : models) {
      std::cout << ',';
      if (!point) {
        std::cout << "nan";
        continue;
      }
      try {
        std::cout << format_number(solve_optimal(point->scenario, m).e_star);
      } catch (const Error& e) {
        std::cerr << "warning: " << param << "=" << format_number(value) << ", model "
                  << to_string(m) << ": " << e.what() << '\n';
        std::cout << "nan";
      }
    }
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal prevention under possibilistic and mixed background risk"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = possprev::default_thread_count();
  app.add_option("--threads", threads, "Worker threads (default: $POSSPREV_THREADS or cores)");

  std::string file;
  std::string format = "table";

  auto* solve = app.add_subcommand("solve", "Solve the optimal prevention level");
  std::string model = "all";
  solve->add_option("file", file, "Scenario file (JSON)")->required();
  solve->add_option("--model", model, "Model id (benchmark, m1..m8) or all");
  solve->add_option("--format", format)->check(CLI::IsMember({"table", "csv"}));

  auto* compare = app.add_subcommand("compare", "Compare optimal prevention levels");
  std::string pair = "paper-set";
  double band = possprev::kDefaultGuardBand;
  compare->add_option("file", file, "Scenario file (JSON)")->required();
  compare->add_option("--pair", pair, "left:right or paper-set");
  compare->add_option("--band", band, "Guard band for ties")->check(CLI::PositiveNumber);
  compare->add_option("--format", format)->check(CLI::IsMember({"table", "csv"}));

  auto* check = app.add_subcommand("check", "Run randomized verification suites");
  std::string suite = "all";
  possprev::checks::CheckOptions copt;
  check->add_option("--suite", suite)->check(CLI::IsMember({"jensen", "focs", "theorems", "oracle", "all"}));
  check->add_option("--seed", copt.seed);
  check->add_option("--count", copt.count, "Items per check (default per suite)")->check(CLI::PositiveNumber);
  check->add_option("--band", copt.guard_band, "Guard band for ties")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Sweep one scenario parameter");
  std::string param;
  std::string scenario_id;
  double from = 0.0;
  double to = 0.0;
  int steps = 10;
  std::vector<std::string> models{"benchmark"};
  sweep->add_option("file", file, "Scenario file (JSON)")->required();
  sweep->add_option("--param", param, "Dotted path, e.g. loss, wealth.w1, risk2.spread")->required();
  sweep->add_option("--from", from)->required();
  sweep->add_option("--to", to)->required();
  sweep->add_option("--steps", steps);
  sweep->add_option("--models", models)->delimiter(',');
  sweep->add_option("--scenario", scenario_id, "Scenario id (default: first)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  copt.threads = threads;

  try {
    if (*solve) return cmd_solve(file, model, format);
    if (*compare) return cmd_compare(file, pair, band, format);
    if (*check) return cmd_check(suite, copt);
    if (*sweep) return cmd_sweep(file, param, from, to, steps, models, scenario_id);
  } catch (const possprev::io::SchemaError& e) {
    std::cerr << "error: invalid input: " << e.what() << '\n';
    return kExitInput;
  } catch (const ScenarioFailure& f) {
    std::cerr << "error: scenario '" << f.scenario << "': " << f.message << '\n';
    return kExitSolve;
  } catch (const possprev::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolve;
  }
  return 0;
}
