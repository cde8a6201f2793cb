#include "cqc/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cqc {
namespace {

// Orthonormal Hermite functions psi_k(t) = h_k(t) exp(-t^2/2) at t, returning
// (psi_{n}, psi_{n-1}). The Gaussian factor keeps the recurrence in range.
std::pair<double, double> hermite_functions(int n, double t) {
  double p_prev = 0.0;
  double p = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * t * t);
  for (int k = 1; k <= n; ++k) {
    const double next = t * std::sqrt(2.0 / k) * p - std::sqrt((k - 1.0) / k) * p_prev;
    p_prev = p;
    p = next;
  }
  return {p, p_prev};
}

GaussHermiteRule compute_rule(int n) {
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  rule.scaled_weights.assign(n, 0.0);

  // Nodes are eigenvalues of the Jacobi matrix, polished by Newton; weights
  // come from the Hermite functions, which stay accurate in the tails.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = eig.eigenvalues()(n - 1 - i);
    for (int it = 0; it < 20; ++it) {
      const auto [psi, prev] = hermite_functions(n, z);
      // psi_n / psi_n' at a root equals h_n / h_n'; h_n' = sqrt(2n) h_{n-1}.
      const double dz = psi / (std::sqrt(2.0 * n) * prev);
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    const double psi_prev = hermite_functions(n, z).second;
    const double scaled = 1.0 / (n * psi_prev * psi_prev);
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.scaled_weights[i] = rule.scaled_weights[n - 1 - i] = scaled;
    rule.weights[i] = rule.weights[n - 1 - i] = scaled * std::exp(-z * z);
  }
  // Store ascending.
  std::vector<double> nodes(rule.nodes.rbegin(), rule.nodes.rend());
  std::vector<double> weights(rule.weights.rbegin(), rule.weights.rend());
  std::vector<double> scaled(rule.scaled_weights.rbegin(), rule.scaled_weights.rend());
  rule.nodes = std::move(nodes);
  rule.weights = std::move(weights);
  rule.scaled_weights = std::move(scaled);
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int order) {
  if (order < 1 || order > kMaxGaussHermiteOrder) {
    throw std::out_of_range("Gauss-Hermite order out of range: " + std::to_string(order));
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussHermiteRule>(compute_rule(order));
  return *slot;
}

GaussianRule gaussian_rule(int order, double mean, double sigma) {
  const auto& gh = gauss_hermite(order);
  GaussianRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = mean + std::numbers::sqrt2 * sigma * gh.nodes[i];
    rule.weights[i] = gh.weights[i] * inv_sqrt_pi;
  }
  return rule;
}

}  // namespace cqc
