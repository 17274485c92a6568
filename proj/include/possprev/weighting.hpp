#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <utility>
#include <variant>
#include <vector>

#include "possprev/error.hpp"
#include "possprev/quadrature.hpp"

namespace possprev {

// Weighting function f on [0,1]: non-negative, non-decreasing, unit mass.
class WeightingFunction {
 public:
  struct Uniform {};
  struct PowerLaw {
    double exponent;
  };
  struct Tabulated {
    std::vector<double> gamma;
    std::vector<double> value;
  };
  using Family = std::variant<Uniform, PowerLaw, Tabulated>;

  static constexpr double kNormalityTolerance = 1e-8;
  static constexpr double kRenormalizeTolerance = 1e-4;

  static WeightingFunction uniform() { return WeightingFunction(Uniform{}); }

  // f(γ) = (k+1) γ^k
  static WeightingFunction power_law(double k) {
    if (!std::isfinite(k) || k < 0.0) {
      throw ValidationError("power-law weighting exponent must be >= 0");
    }
    return WeightingFunction(PowerLaw{k});
  }

  // Piecewise-linear f through (γ_i, f_i). The table must span [0,1].
  // A mass within 1e-4 of one is renormalized, anything further is rejected.
  static WeightingFunction tabulated(std::vector<std::pair<double, double>> rows) {
    if (rows.size() < 2) {
      throw ValidationError("tabulated weighting needs at least 2 rows");
    }
    Tabulated t;
    for (const auto& [g, v] : rows) {
      t.gamma.push_back(g);
      t.value.push_back(v);
    }
    if (t.gamma.front() != 0.0 || t.gamma.back() != 1.0) {
      throw ValidationError("tabulated weighting grid must start at 0 and end at 1");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!std::isfinite(t.gamma[i]) || !std::isfinite(t.value[i])) {
        throw ValidationError("tabulated weighting contains non-finite values");
      }
      if (t.value[i] < 0.0) {
        throw ValidationError("weighting function must be non-negative");
      }
      if (i > 0 && t.gamma[i] <= t.gamma[i - 1]) {
        throw ValidationError("tabulated weighting grid must be strictly increasing");
      }
      if (i > 0 && t.value[i] < t.value[i - 1]) {
        throw ValidationError("weighting function must be non-decreasing");
      }
    }
    double mass = quadrature::integrate_trapezoid(
        t.gamma, [&](double g) { return interpolate(t, g); });
    if (std::abs(mass - 1.0) > kRenormalizeTolerance) {
      std::ostringstream os;
      os << "tabulated weighting integrates to " << mass << ", expected 1";
      throw ValidationError(os.str());
    }
    if (std::abs(mass - 1.0) > 0.0) {
      for (double& v : t.value) v /= mass;
    }
    return WeightingFunction(std::move(t));
  }

  double operator()(double gamma) const {
    return std::visit(
        [gamma](const auto& fam) -> double {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Uniform>) {
            return 1.0;
          } else if constexpr (std::is_same_v<T, PowerLaw>) {
            return (fam.exponent + 1.0) * std::pow(gamma, fam.exponent);
          } else {
            return interpolate(fam, gamma);
          }
        },
        family_);
  }

  const Family& family() const noexcept { return family_; }
  bool is_tabulated() const noexcept {
    return std::holds_alternative<Tabulated>(family_);
  }
  // Native grid for tabulated weights, empty otherwise.
  std::vector<double> breakpoints() const {
    if (const auto* t = std::get_if<Tabulated>(&family_)) return t->gamma;
    return {};
  }

  // ∫₀¹ g(γ) f(γ) dγ. `extra_grid` carries breakpoints of a piecewise-linear
  // integrand (sampled level sets); any breakpoints switch to a panelwise
  // Gauss rule on the merged grid, so kinks only ever sit on panel edges.
  template <class G>
  double integrate(G&& g, std::span<const double> extra_grid = {}) const {
    auto weighted = [&](double gamma) { return g(gamma) * (*this)(gamma); };
    // γ^k with fractional k is not smooth at 0: grade the panels toward 0.
    const auto* pl = std::get_if<PowerLaw>(&family_);
    const bool singular = pl != nullptr && pl->exponent != std::floor(pl->exponent);
    if (is_tabulated() || !extra_grid.empty()) {
      std::vector<double> grid = breakpoints();
      grid.insert(grid.end(), extra_grid.begin(), extra_grid.end());
      grid.push_back(0.0);
      grid.push_back(1.0);
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
      return quadrature::integrate_panels(grid, weighted, singular);
    }
    if (singular) return quadrature::integrate_graded(weighted);
    return quadrature::integrate_gauss(weighted);
  }

  double mass() const {
    return integrate([](double) { return 1.0; });
  }

 private:
  explicit WeightingFunction(Family fam) : family_(std::move(fam)) {}

  static double interpolate(const Tabulated& t, double gamma) {
    auto it = std::upper_bound(t.gamma.begin(), t.gamma.end(), gamma);
    if (it == t.gamma.begin()) return t.value.front();
    if (it == t.gamma.end()) return t.value.back();
    const auto hi = static_cast<std::size_t>(it - t.gamma.begin());
    const auto lo = hi - 1;
    const double s = (gamma - t.gamma[lo]) / (t.gamma[hi] - t.gamma[lo]);
    return t.value[lo] + s * (t.value[hi] - t.value[lo]);
  }

  Family family_;
};

}  // namespace possprev
