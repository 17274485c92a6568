#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "possprev/error.hpp"

namespace possprev {

struct Outcome {
  double value;
  double probability;
};

// Finite-support random variable.
class DiscreteRandomVariable {
 public:
  static constexpr double kMassTolerance = 1e-10;

  explicit DiscreteRandomVariable(std::vector<Outcome> outcomes)
      : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) {
      throw ValidationError("random variable needs at least one outcome");
    }
    double mass = 0.0;
    for (const auto& o : outcomes_) {
      if (!std::isfinite(o.value) || !std::isfinite(o.probability)) {
        throw ValidationError("random variable outcome is not finite");
      }
      if (!(o.probability > 0.0 && o.probability <= 1.0)) {
        std::ostringstream os;
        os << "outcome probability " << o.probability << " not in (0,1]";
        throw ValidationError(os.str());
      }
      mass += o.probability;
    }
    if (std::abs(mass - 1.0) > kMassTolerance) {
      std::ostringstream os;
      os << "outcome probabilities sum to " << mass << ", expected 1";
      throw ValidationError(os.str());
    }
  }

  static DiscreteRandomVariable point_mass(double value) {
    return DiscreteRandomVariable({{value, 1.0}});
  }

  const std::vector<Outcome>& outcomes() const noexcept { return outcomes_; }

  double min_value() const {
    return std::min_element(outcomes_.begin(), outcomes_.end(),
                            [](const Outcome& a, const Outcome& b) { return a.value < b.value; })
        ->value;
  }
  double max_value() const {
    return std::max_element(outcomes_.begin(), outcomes_.end(),
                            [](const Outcome& a, const Outcome& b) { return a.value < b.value; })
        ->value;
  }

  bool is_degenerate() const { return min_value() == max_value(); }

  DiscreteRandomVariable shifted(double offset) const {
    auto copy = outcomes_;
    for (auto& o : copy) o.value += offset;
    return DiscreteRandomVariable(std::move(copy));
  }

 private:
  std::vector<Outcome> outcomes_;
};

// M(u(X)) = Σ pᵢ u(xᵢ)
template <class U>
double probabilistic_expected_utility(const DiscreteRandomVariable& x, U&& u) {
  double sum = 0.0;
  for (const auto& o : x.outcomes()) sum += o.probability * u(o.value);
  return sum;
}

// M(X)
inline double expected_value(const DiscreteRandomVariable& x) {
  return probabilistic_expected_utility(x, [](double v) { return v; });
}

// n-point Gauss-Hermite discretization of N(mean, stdev²). Nodes and weights
// come from the eigen-decomposition of the Jacobi matrix of the probabilists'
// Hermite polynomials, so moments up to order 2n-1 are matched.
inline DiscreteRandomVariable discretize_normal(double mean, double stdev, int nodes) {
  if (!std::isfinite(mean) || !std::isfinite(stdev) || !(stdev > 0.0)) {
    throw ValidationError("normal discretization needs finite mean and stdev > 0");
  }
  if (nodes < 3) {
    throw ValidationError("normal discretization needs at least 3 nodes");
  }
  const auto n = static_cast<Eigen::Index>(nodes);
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  std::vector<Outcome> out;
  out.reserve(static_cast<std::size_t>(nodes));
  double mass = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = eig.eigenvectors()(0, i) * eig.eigenvectors()(0, i);
    out.push_back({eig.eigenvalues()(i), w});
    mass += w;
  }
  // Symmetrize around 0 and renormalize so the mean is exact.
  std::sort(out.begin(), out.end(),
            [](const Outcome& a, const Outcome& b) { return a.value < b.value; });
  for (std::size_t i = 0, j = out.size() - 1; i < j; ++i, --j) {
    const double x = 0.5 * (out[j].value - out[i].value);
    const double w = 0.5 * (out[i].probability + out[j].probability);
    out[i] = {-x, w};
    out[j] = {x, w};
  }
  if (out.size() % 2 == 1) out[out.size() / 2].value = 0.0;
  for (auto& o : out) {
    o.probability /= mass;
    o.value = mean + stdev * o.value;
  }
  return DiscreteRandomVariable(std::move(out));
}

}  // namespace possprev
