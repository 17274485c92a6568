#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "possprev/error.hpp"
#include "possprev/scenario.hpp"

// JSON scenario documents.
//
//   { "scenarios": [ <scenario>, ... ] }     or a single <scenario> object
//
//   <scenario> = {
//     "id": "name",                                  (optional)
//     "wealth": {"w1": 10, "w2": 10},
//     "loss": 5,
//     "utilities": {"u": <utility>, "v": <utility>},
//     "loss_probability": {"exp_loss": {"p0": 0.5, "k": 1}} | {"rational_loss": {...}},
//     "weighting": {"uniform": {}} | {"power": {"k": 1}} | {"tabulated": [[g, f], ...]},
//     "risk1": <risk>, "risk2": <risk>,               (optional)
//     "models": ["benchmark", "m4"] | "all"           (optional, default all applicable)
//   }
//   <utility> = {"log": {}} | {"crra": {"eta": 2}} | {"cara": {"alpha": 1}} | {"quadratic": {"b": 0.05}}
//   <risk>    = {"triangular": [c, l, r]} | {"trapezoidal": [cl, cr, l, r]}
//             | {"sampled": [[g, a1, a2], ...]} | {"crisp": c}     (fuzzy, optional "shift")
//             | {"discrete": [[x, p], ...]} | {"normal": {"mean": 0, "stdev": 1, "nodes": 5}}
namespace possprev::io {

using json = nlohmann::ordered_json;

// Malformed or invalid input document. `where` is a field path or a
// line:column position.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& where, const std::string& what)
      : Error(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

struct ScenarioEntry {
  Scenario scenario;
  std::vector<ModelId> models;
  json source;  // the scenario object as read, for sweeps and replay
};

namespace detail {

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}
inline std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
}

inline void allow_keys(const json& j, const std::string& path,
                       std::initializer_list<std::string_view> keys) {
  require_object(j, path);
  for (const auto& [k, _] : j.items()) {
    bool known = false;
    for (auto allowed : keys) known = known || k == allowed;
    if (!known) throw SchemaError(join(path, k), "unknown key");
  }
}

inline const json& field(const json& j, const std::string& path, const std::string& key) {
  require_object(j, path);
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(join(path, key), "missing required field");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

inline double number_field(const json& j, const std::string& path, const std::string& key) {
  return number(field(j, path, key), join(path, key));
}

inline std::vector<double> number_array(const json& j, const std::string& path,
                                        std::size_t expected) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of numbers");
  if (expected != 0 && j.size() != expected) {
    throw SchemaError(path, "expected " + std::to_string(expected) + " numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], index(path, i)));
  return out;
}

inline std::vector<std::vector<double>> rows(const json& j, const std::string& path,
                                             std::size_t width) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of rows");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_array(j[i], index(path, i), width));
  return out;
}

// The single family key of a tagged object such as {"log": {}}.
inline std::pair<std::string, const json*> tag(const json& j, const std::string& path,
                                               std::initializer_list<std::string_view> extra = {}) {
  require_object(j, path);
  const json* body = nullptr;
  std::string name;
  for (const auto& [k, v] : j.items()) {
    bool is_extra = false;
    for (auto e : extra) is_extra = is_extra || k == e;
    if (is_extra) continue;
    if (body) throw SchemaError(join(path, k), "only one family key is allowed");
    name = k;
    body = &v;
  }
  if (!body) throw SchemaError(path, "missing family key");
  return {name, body};
}

// Runs a value constructor and reports its ValidationError against `path`.
template <class F>
auto construct(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const ValidationError& e) {
    throw SchemaError(path, e.what());
  }
}

inline UtilityFunction parse_utility(const json& j, const std::string& path) {
  auto [name, body] = tag(j, path);
  const std::string p = join(path, name);
  if (name == "log") {
    allow_keys(*body, p, {});
    return UtilityFunction::log();
  }
  if (name == "crra") {
    allow_keys(*body, p, {"eta"});
    const double eta = number_field(*body, p, "eta");
    return construct(join(p, "eta"), [&] { return UtilityFunction::crra(eta); });
  }
  if (name == "cara") {
    allow_keys(*body, p, {"alpha"});
    const double alpha = number_field(*body, p, "alpha");
    return construct(join(p, "alpha"), [&] { return UtilityFunction::cara(alpha); });
  }
  if (name == "quadratic") {
    allow_keys(*body, p, {"b"});
    const double b = number_field(*body, p, "b");
    return construct(join(p, "b"), [&] { return UtilityFunction::quadratic(b); });
  }
  throw SchemaError(p, "unknown utility family (log, crra, cara, quadratic)");
}

inline LossProbability parse_loss(const json& j, const std::string& path) {
  auto [name, body] = tag(j, path);
  const std::string p = join(path, name);
  if (name != "exp_loss" && name != "rational_loss") {
    throw SchemaError(p, "unknown loss probability family (exp_loss, rational_loss)");
  }
  allow_keys(*body, p, {"p0", "k"});
  const double p0 = number_field(*body, p, "p0");
  const double k = number_field(*body, p, "k");
  return construct(p, [&] {
    return name == "exp_loss" ? LossProbability::exponential(p0, k)
                              : LossProbability::rational(p0, k);
  });
}

inline WeightingFunction parse_weighting(const json& j, const std::string& path) {
  auto [name, body] = tag(j, path);
  const std::string p = join(path, name);
  if (name == "uniform") {
    allow_keys(*body, p, {});
    return WeightingFunction::uniform();
  }
  if (name == "power") {
    allow_keys(*body, p, {"k"});
    const double k = number_field(*body, p, "k");
    return construct(join(p, "k"), [&] { return WeightingFunction::power_law(k); });
  }
  if (name == "tabulated") {
    std::vector<std::pair<double, double>> table;
    for (const auto& r : rows(*body, p, 2)) table.emplace_back(r[0], r[1]);
    return construct(p, [&] { return WeightingFunction::tabulated(std::move(table)); });
  }
  throw SchemaError(p, "unknown weighting family (uniform, power, tabulated)");
}

inline BackgroundRisk parse_risk(const json& j, const std::string& path) {
  auto [name, body] = tag(j, path, {"shift"});
  const std::string p = join(path, name);
  double shift = 0.0;
  if (j.contains("shift")) {
    if (name == "discrete" || name == "normal") {
      throw SchemaError(join(path, "shift"), "shift applies to fuzzy risks only");
    }
    shift = number(j.at("shift"), join(path, "shift"));
  }
  if (name == "triangular") {
    const auto v = number_array(*body, p, 3);
    return construct(p, [&] { return BackgroundRisk(FuzzyNumber::triangular(v[0], v[1], v[2], shift)); });
  }
  if (name == "trapezoidal") {
    const auto v = number_array(*body, p, 4);
    return construct(p, [&] {
      return BackgroundRisk(FuzzyNumber::trapezoidal(v[0], v[1], v[2], v[3], shift));
    });
  }
  if (name == "crisp") {
    const double c = number(*body, p);
    return BackgroundRisk(FuzzyNumber::crisp(c).shifted(shift));
  }
  if (name == "sampled") {
    std::vector<std::array<double, 3>> table;
    for (const auto& r : rows(*body, p, 3)) table.push_back({r[0], r[1], r[2]});
    return construct(p, [&] { return BackgroundRisk(FuzzyNumber::sampled(table, shift)); });
  }
  if (name == "discrete") {
    std::vector<Outcome> outcomes;
    for (const auto& r : rows(*body, p, 2)) outcomes.push_back({r[0], r[1]});
    return construct(p, [&] { return BackgroundRisk(DiscreteRandomVariable(std::move(outcomes))); });
  }
  if (name == "normal") {
    allow_keys(*body, p, {"mean", "stdev", "nodes"});
    const double mean = number_field(*body, p, "mean");
    const double stdev = number_field(*body, p, "stdev");
    const json& nodes = field(*body, p, "nodes");
    if (!nodes.is_number_integer()) throw SchemaError(join(p, "nodes"), "expected an integer");
    return construct(p, [&] {
      return BackgroundRisk(discretize_normal(mean, stdev, nodes.get<int>()));
    });
  }
  throw SchemaError(p, "unknown risk family (triangular, trapezoidal, sampled, crisp, discrete, normal)");
}

inline std::vector<ModelId> parse_models(const json& j, const std::string& path) {
  std::vector<ModelId> out;
  if (j.is_string() && j.get<std::string>() == "all") {
    for (ModelId m : kAllModels) out.push_back(m);
    return out;
  }
  if (!j.is_array()) throw SchemaError(path, "expected \"all\" or an array of model names");
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) throw SchemaError(index(path, i), "expected a model name");
    auto m = parse_model(j[i].get<std::string>());
    if (!m) throw SchemaError(index(path, i), "unknown model '" + j[i].get<std::string>() + "'");
    out.push_back(*m);
  }
  return out;
}

// Models whose risk slots the scenario fills.
inline std::vector<ModelId> applicable_models(const Scenario& s) {
  std::vector<ModelId> out;
  for (ModelId m : kAllModels) {
    const RiskLayout lay = layout(m);
    if ((lay.period1 == RiskKind::None || lay.period1 == kind_of(s.risk1)) &&
        (lay.period2 == RiskKind::None || lay.period2 == kind_of(s.risk2))) {
      out.push_back(m);
    }
  }
  return out;
}

}  // namespace detail

inline ScenarioEntry parse_scenario(const json& j, const std::string& path,
                                    const std::string& default_id) {
  using namespace detail;
  allow_keys(j, path, {"id", "wealth", "loss", "utilities", "loss_probability", "weighting",
                       "risk1", "risk2", "models"});
  std::string id = default_id;
  if (j.contains("id")) {
    if (!j["id"].is_string()) throw SchemaError(join(path, "id"), "expected a string");
    id = j["id"].get<std::string>();
  }
  const json& wealth = field(j, path, "wealth");
  const std::string wp = join(path, "wealth");
  allow_keys(wealth, wp, {"w1", "w2"});
  const double w1 = number_field(wealth, wp, "w1");
  const double w2 = number_field(wealth, wp, "w2");
  const double loss = number_field(j, path, "loss");
  if (!(loss > 0.0)) throw SchemaError(join(path, "loss"), "loss must be > 0");

  const json& utilities = field(j, path, "utilities");
  const std::string up = join(path, "utilities");
  allow_keys(utilities, up, {"u", "v"});
  UtilityFunction u = parse_utility(field(utilities, up, "u"), join(up, "u"));
  UtilityFunction v = parse_utility(field(utilities, up, "v"), join(up, "v"));
  LossProbability p = parse_loss(field(j, path, "loss_probability"), join(path, "loss_probability"));
  WeightingFunction f = parse_weighting(field(j, path, "weighting"), join(path, "weighting"));

  std::optional<BackgroundRisk> risk1;
  std::optional<BackgroundRisk> risk2;
  if (j.contains("risk1")) risk1 = parse_risk(j["risk1"], join(path, "risk1"));
  if (j.contains("risk2")) risk2 = parse_risk(j["risk2"], join(path, "risk2"));

  Scenario s{id, w1, w2, loss, u, v, p, f, risk1, risk2};
  std::vector<ModelId> models = j.contains("models")
                                    ? parse_models(j["models"], join(path, "models"))
                                    : applicable_models(s);
  return {std::move(s), std::move(models), j};
}

inline std::vector<ScenarioEntry> parse_document(const json& doc) {
  std::vector<ScenarioEntry> out;
  if (doc.is_object() && doc.contains("scenarios")) {
    detail::allow_keys(doc, "", {"scenarios"});
    const json& list = doc["scenarios"];
    if (!list.is_array() || list.empty()) {
      throw SchemaError("scenarios", "expected a non-empty array of scenarios");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.push_back(parse_scenario(list[i], detail::index("scenarios", i),
                                   "scenario-" + std::to_string(i)));
    }
  } else {
    out.push_back(parse_scenario(doc, "", "scenario-0"));
  }
  return out;
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset -> line:column.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SchemaError("line " + std::to_string(line) + ", column " + std::to_string(col),
                      "malformed JSON");
  }
}

inline std::vector<ScenarioEntry> load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_document(parse_json_text(buffer.str()));
}

// --- serialization -------------------------------------------------------

inline json to_json(const UtilityFunction& u) {
  return std::visit(
      [](const auto& fam) -> json {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, UtilityFunction::Crra>) return {{"crra", {{"eta", fam.eta}}}};
        else if constexpr (std::is_same_v<T, UtilityFunction::Log>) return {{"log", json::object()}};
        else if constexpr (std::is_same_v<T, UtilityFunction::Cara>) return {{"cara", {{"alpha", fam.alpha}}}};
        else return {{"quadratic", {{"b", fam.b}}}};
      },
      u.family());
}

inline json to_json(const LossProbability& p) {
  return std::visit(
      [&](const auto& fam) -> json { return {{p.name(), {{"p0", fam.p0}, {"k", fam.k}}}}; },
      p.family());
}

inline json to_json(const WeightingFunction& f) {
  return std::visit(
      [](const auto& fam) -> json {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, WeightingFunction::Uniform>) {
          return {{"uniform", json::object()}};
        } else if constexpr (std::is_same_v<T, WeightingFunction::PowerLaw>) {
          return {{"power", {{"k", fam.exponent}}}};
        } else {
          json table = json::array();
          for (std::size_t i = 0; i < fam.gamma.size(); ++i) table.push_back({fam.gamma[i], fam.value[i]});
          return {{"tabulated", table}};
        }
      },
      f.family());
}

inline json to_json(const BackgroundRisk& r) {
  if (const auto* a = std::get_if<FuzzyNumber>(&r)) {
    json out = std::visit(
        [](const auto& fam) -> json {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, FuzzyNumber::Triangular>) {
            return {{"triangular", {fam.center, fam.left_spread, fam.right_spread}}};
          } else if constexpr (std::is_same_v<T, FuzzyNumber::Trapezoidal>) {
            return {{"trapezoidal", {fam.core_left, fam.core_right, fam.left_spread, fam.right_spread}}};
          } else {
            json table = json::array();
            for (std::size_t i = 0; i < fam.gamma.size(); ++i) {
              table.push_back({fam.gamma[i], fam.lo[i], fam.hi[i]});
            }
            return {{"sampled", table}};
          }
        },
        a->family());
    if (a->shift() != 0.0) out["shift"] = a->shift();
    return out;
  }
  json table = json::array();
  for (const auto& o : std::get<DiscreteRandomVariable>(r).outcomes()) {
    table.push_back({o.value, o.probability});
  }
  return {{"discrete", table}};
}

inline json to_json(const Scenario& s) {
  json out;
  out["id"] = s.id;
  out["wealth"] = {{"w1", s.w1}, {"w2", s.w2}};
  out["loss"] = s.loss;
  out["utilities"] = {{"u", to_json(s.u)}, {"v", to_json(s.v)}};
  out["loss_probability"] = to_json(s.p);
  out["weighting"] = to_json(s.f);
  if (s.risk1) out["risk1"] = to_json(*s.risk1);
  if (s.risk2) out["risk2"] = to_json(*s.risk2);
  return out;
}

// 17 significant digits: reads back as the same double.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace possprev::io
