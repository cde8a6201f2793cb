#pragma once

#include <vector>

namespace cqc {

// Gauss–Hermite rule for the weight exp(-t^2) on the real line.
//
// `scaled_weights` hold w_i * exp(t_i^2); they stay O(1) for large orders
// where the plain weights underflow, and are what the Fock-space
// quadratures use (the Gaussian factor is folded into the coherent
// amplitudes instead).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> scaled_weights;

  int order() const { return static_cast<int>(nodes.size()); }
};

inline constexpr int kMaxGaussHermiteOrder = 600;

// Rules are computed once per order and cached; safe under concurrent use.
const GaussHermiteRule& gauss_hermite(int order);

// Nodes/weights for E[f(X)], X ~ N(mean, sigma^2): sum weight_i f(node_i).
struct GaussianRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussianRule gaussian_rule(int order, double mean, double sigma);

}  // namespace cqc
