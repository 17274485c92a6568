#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <variant>

#include "possprev/error.hpp"
#include "possprev/scalar_function.hpp"

namespace possprev {

// Increasing, strictly concave utility with closed-form derivatives up to
// third order.
class UtilityFunction {
 public:
  // x^{1-η}/(1-η), η > 0, η ≠ 1
  struct Crra {
    double eta;
  };
  struct Log {};
  // -e^{-αx}/α
  struct Cara {
    double alpha;
  };
  // x - b x², valid for x < 1/(2b)
  struct Quadratic {
    double b;
  };
  using Family = std::variant<Crra, Log, Cara, Quadratic>;

  static UtilityFunction crra(double eta) {
    if (!std::isfinite(eta) || eta <= 0.0 || eta == 1.0) {
      throw ValidationError("crra utility needs eta > 0 and eta != 1 (use log)");
    }
    return UtilityFunction(Crra{eta});
  }
  static UtilityFunction log() { return UtilityFunction(Log{}); }
  static UtilityFunction cara(double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0) {
      throw ValidationError("cara utility needs alpha > 0");
    }
    return UtilityFunction(Cara{alpha});
  }
  static UtilityFunction quadratic(double b) {
    if (!std::isfinite(b) || b <= 0.0) {
      throw ValidationError("quadratic utility needs b > 0");
    }
    return UtilityFunction(Quadratic{b});
  }

  Interval domain() const {
    return std::visit(
        [](const auto& fam) -> Interval {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Crra> || std::is_same_v<T, Log>) {
            return {0.0, Interval::real_line().hi};
          } else if constexpr (std::is_same_v<T, Cara>) {
            return Interval::real_line();
          } else {
            return {Interval::real_line().lo, 1.0 / (2.0 * fam.b)};
          }
        },
        family_);
  }

  // u^{(order)}(x), order in 0..3.
  double eval(int order, double x) const {
    if (order < 0 || order > 3) throw ValidationError("utility derivative order must be 0..3");
    const Interval dom = domain();
    if (!std::isfinite(x) || !dom.contains(x)) {
      std::ostringstream os;
      os << name() << " utility evaluated at " << x << " outside its domain ("
         << dom.lo << ", " << dom.hi << ")";
      throw DomainError(os.str(), x);
    }
    return std::visit(
        [order, x](const auto& fam) -> double {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Crra>) {
            const double eta = fam.eta;
            switch (order) {
              case 0: return std::pow(x, 1.0 - eta) / (1.0 - eta);
              case 1: return std::pow(x, -eta);
              case 2: return -eta * std::pow(x, -eta - 1.0);
              default: return eta * (eta + 1.0) * std::pow(x, -eta - 2.0);
            }
          } else if constexpr (std::is_same_v<T, Log>) {
            switch (order) {
              case 0: return std::log(x);
              case 1: return 1.0 / x;
              case 2: return -1.0 / (x * x);
              default: return 2.0 / (x * x * x);
            }
          } else if constexpr (std::is_same_v<T, Cara>) {
            const double a = fam.alpha;
            const double ex = std::exp(-a * x);
            switch (order) {
              case 0: return -ex / a;
              case 1: return ex;
              case 2: return -a * ex;
              default: return a * a * ex;
            }
          } else {
            switch (order) {
              case 0: return x - fam.b * x * x;
              case 1: return 1.0 - 2.0 * fam.b * x;
              case 2: return -2.0 * fam.b;
              default: return 0.0;
            }
          }
        },
        family_);
  }

  double operator()(double x) const { return eval(0, x); }
  double d1(double x) const { return eval(1, x); }
  double d2(double x) const { return eval(2, x); }
  double d3(double x) const { return eval(3, x); }

  ScalarFunction derivative(int order) const {
    UtilityFunction self = *this;
    std::string label = name();
    if (order > 0) label += std::string(static_cast<std::size_t>(order), '\'');
    return ScalarFunction([self, order](double x) { return self.eval(order, x); },
                          domain(), label);
  }

  // u‴ > 0 everywhere on the domain.
  bool prudent() const { return !std::holds_alternative<Quadratic>(family_); }

  std::string name() const {
    return std::visit(
        [](const auto& fam) -> std::string {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Crra>) return "crra";
          else if constexpr (std::is_same_v<T, Log>) return "log";
          else if constexpr (std::is_same_v<T, Cara>) return "cara";
          else return "quadratic";
        },
        family_);
  }

  const Family& family() const noexcept { return family_; }

 private:
  explicit UtilityFunction(Family fam) : family_(fam) { check_shape(); }

  // u' > 0 and u'' < 0 on a probe grid inside the domain.
  void check_shape() const {
    const Interval dom = domain();
    const double lo = std::isfinite(dom.lo) ? dom.lo : (std::isfinite(dom.hi) ? dom.hi - 100.0 : -10.0);
    const double hi = std::isfinite(dom.hi) ? dom.hi : lo + 100.0;
    for (int i = 1; i < 64; ++i) {
      const double x = lo + (hi - lo) * i / 64.0;
      if (!(eval(1, x) > 0.0) || !(eval(2, x) < 0.0)) {
        throw ValidationError(name() + " utility violates u' > 0, u'' < 0 on its domain");
      }
    }
  }

  Family family_;
};

// p(e): probability of the loss at prevention effort e ≥ 0, with
// 0 < p < 1, p' < 0, p'' > 0.
class LossProbability {
 public:
  // p0 e^{-ke}
  struct Exponential {
    double p0;
    double k;
  };
  // p0 / (1+e)^k
  struct Rational {
    double p0;
    double k;
  };
  using Family = std::variant<Exponential, Rational>;

  static LossProbability exponential(double p0, double k) {
    check(p0, k);
    return LossProbability(Exponential{p0, k});
  }
  static LossProbability rational(double p0, double k) {
    check(p0, k);
    return LossProbability(Rational{p0, k});
  }

  // p^{(order)}(e), order in 0..2.
  double eval(int order, double e) const {
    if (order < 0 || order > 2) throw ValidationError("loss probability order must be 0..2");
    if (!(e >= 0.0) || !std::isfinite(e)) {
      std::ostringstream os;
      os << "loss probability evaluated at negative effort e=" << e;
      throw DomainError(os.str(), e);
    }
    return std::visit(
        [order, e](const auto& fam) -> double {
          using T = std::decay_t<decltype(fam)>;
          if constexpr (std::is_same_v<T, Exponential>) {
            const double base = fam.p0 * std::exp(-fam.k * e);
            switch (order) {
              case 0: return base;
              case 1: return -fam.k * base;
              default: return fam.k * fam.k * base;
            }
          } else {
            const double q = 1.0 + e;
            switch (order) {
              case 0: return fam.p0 * std::pow(q, -fam.k);
              case 1: return -fam.p0 * fam.k * std::pow(q, -fam.k - 1.0);
              default: return fam.p0 * fam.k * (fam.k + 1.0) * std::pow(q, -fam.k - 2.0);
            }
          }
        },
        family_);
  }

  double operator()(double e) const { return eval(0, e); }
  double d1(double e) const { return eval(1, e); }
  double d2(double e) const { return eval(2, e); }

  std::string name() const {
    return std::holds_alternative<Exponential>(family_) ? "exp_loss" : "rational_loss";
  }
  const Family& family() const noexcept { return family_; }

 private:
  explicit LossProbability(Family fam) : family_(fam) {}

  static void check(double p0, double k) {
    if (!(p0 > 0.0 && p0 < 1.0)) throw ValidationError("loss probability needs p0 in (0,1)");
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("loss probability needs k > 0");
  }

  Family family_;
};

}  // namespace possprev
