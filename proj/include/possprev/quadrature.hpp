#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>

namespace possprev::quadrature {

// Gauss-Legendre rule mapped to [0, 1].
template <std::size_t N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};
};

namespace detail {

template <std::size_t N>
GaussLegendre<N> build_gauss_legendre() {
  GaussLegendre<N> rule;
  const std::size_t half = (N + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_N.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(N) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= N; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(N) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] -> [0, 1].
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[N - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[N - 1 - i] = 0.5 * w;
  }
  return rule;
}

}  // namespace detail

template <std::size_t N = 64>
const GaussLegendre<N>& gauss_legendre() {
  static const GaussLegendre<N> rule = detail::build_gauss_legendre<N>();
  return rule;
}

// Integral over [0,1] of a smooth integrand.
template <class F>
double integrate_gauss(F&& f) {
  const auto& rule = gauss_legendre<64>();
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(rule.nodes[i]);
  }
  return sum;
}

// Integral over [0,b] for integrands with an algebraic singularity at 0:
// 16-point Gauss-Legendre on dyadic panels [b 2^-(j+1), b 2^-j] plus [0, b 2^-40].
template <class F>
double integrate_graded(F&& f, double b = 1.0) {
  const auto& rule = gauss_legendre<16>();
  double sum = 0.0;
  double hi = b;
  for (int j = 0; j <= 40; ++j) {
    const double lo = (j == 40) ? 0.0 : 0.5 * hi;
    const double width = hi - lo;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += width * rule.weights[i] * f(lo + width * rule.nodes[i]);
    }
    hi = lo;
  }
  return sum;
}

// 16-point Gauss-Legendre on each panel of an increasing grid. With
// `graded_first` the first panel (which must start at 0) is graded instead.
template <class F>
double integrate_panels(std::span<const double> grid, F&& f, bool graded_first = false) {
  const auto& rule = gauss_legendre<16>();
  double sum = 0.0;
  std::size_t first = 1;
  if (graded_first && grid.size() > 1) {
    sum += integrate_graded([&](double x) { return f(grid[0] + x); }, grid[1] - grid[0]);
    first = 2;
  }
  for (std::size_t j = first; j < grid.size(); ++j) {
    const double lo = grid[j - 1];
    const double width = grid[j] - lo;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += width * rule.weights[i] * f(lo + width * rule.nodes[i]);
    }
  }
  return sum;
}

// Composite trapezoid on an increasing grid.
template <class F>
double integrate_trapezoid(std::span<const double> grid, F&& f) {
  double sum = 0.0;
  double prev_x = grid[0];
  double prev_y = f(prev_x);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double y = f(grid[i]);
    sum += 0.5 * (grid[i] - prev_x) * (y + prev_y);
    prev_x = grid[i];
    prev_y = y;
  }
  return sum;
}

}  // namespace possprev::quadrature
