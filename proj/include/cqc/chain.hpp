#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "cqc/classical.hpp"
#include "cqc/fock.hpp"

namespace cqc {

// Quadratic form of the cyclic overlap product
//   <a_0|a_1><a_1|a_2>...<a_{n-1}|a_0> = exp(-u^T V u / hbar)
// over u = (x_0, p_0, ..., x_{n-1}, p_{n-1}): identity diagonal blocks, B on
// the block superdiagonal, B^T on the subdiagonal, both wrapping cyclically,
// with B = -1/2 [[1, i], [-i, 1]].
class ChainMatrix {
 public:
  explicit ChainMatrix(int n);

  int n() const { return n_; }
  const Eigen::MatrixXcd& matrix() const { return v_; }
  // u^T V u for a real u of length 2n.
  Complex quadratic_form(const Eigen::VectorXd& u) const;
  // Block over the free points 1..n-1 (base point removed).
  Eigen::MatrixXcd free_block() const;

  static Eigen::Matrix2cd coupling_block();

 private:
  int n_;
  Eigen::MatrixXcd v_;
};

struct ChainEigenpair {
  int k;  // 1 or 2
  int j;  // 0..n-1
  Complex value;
  Eigen::VectorXcd vector;
};

// Closed-form eigensystem. For spinor s_1 = (-1, i) the eigenvalue is
// 1 - w_j, for s_2 = (1, i) it is 1 - conj(w_j), with w_j = exp(2 pi i j / n).
struct ChainSpectrum {
  int n = 0;
  std::vector<ChainEigenpair> pairs;  // ordered (k, j) with k outer
  Eigen::MatrixXcd unitary;           // columns = eigenvectors in `pairs` order
  Eigen::MatrixXcd reduced;           // unitary without the two j = 0 columns

  int zero_count(double tol = 1e-12) const;
  Complex nonzero_product(double tol = 1e-12) const;
  double max_residual(const ChainMatrix& v) const;
  double orthonormality_defect() const;
};

ChainSpectrum chain_spectrum(int n);
// Cached per n; safe under concurrent first access.
const ChainSpectrum& cached_chain_spectrum(int n);

// Solves U_r^dagger u = 0 for the free coordinates given the base point: the
// support of the hbar -> 0 delta limit. Returns (x_1, p_1, ..., x_{n-1}, p_{n-1}).
Eigen::VectorXcd chain_delta_support(int n, const PhasePoint& base);

struct ChainKernelSample {
  PhasePoint base;
  std::vector<PhasePoint> free;  // n - 1 points
  double hbar = 1.0;

  int n() const { return static_cast<int>(free.size()) + 1; }
  Eigen::VectorXd coordinates() const;
};

// exp(-u^T V u / hbar) / (hbar pi)^(n-1).
Complex chain_kernel(const ChainKernelSample& s);

struct AnalyticMomentOptions {
  // Per-axis Gauss–Hermite order; 0 picks the exact order for the degree.
  int order = 0;
};

// Integral of prod_i A(x_i, p_i) over the n-1 free points against the chain
// kernel (imaginary exponent retained). Equals <alpha_0| A_hat^(n-1) |alpha_0>.
double analytic_moment(const Polynomial& a, const PhasePoint& pt, double hbar, int n,
                       const AnalyticMomentOptions& opts = {});
// Same, returning the complex value before the imaginary part is checked.
Complex analytic_moment_complex(const Polynomial& a, const PhasePoint& pt, double hbar, int n,
                                const AnalyticMomentOptions& opts = {});
// General product of n-1 (possibly different) polynomials, one per free point.
Complex analytic_chain_integral(const std::vector<Polynomial>& factors, const PhasePoint& pt,
                                double hbar, const AnalyticMomentOptions& opts = {});

// Coupling matrix for the d/dhbar = 1/4 grad^T M grad identity of the n = 3
// kernel. kStated is [[1, -B^T], [-B, 1]], kSignFlipped is [[1, B^T], [B, 1]],
// kFreeBlockInverse is the inverse of the free block of V, [[1, -B], [-B^T, 1]].
enum class HeatCoupling { kStated, kSignFlipped, kFreeBlockInverse };

Eigen::Matrix4cd heat_coupling_matrix(HeatCoupling variant);

struct HeatKernelOptions {
  HeatCoupling coupling = HeatCoupling::kFreeBlockInverse;
  // Multiplies both default steps (1e-5 relative in hbar, 1e-4 sqrt(hbar) in
  // the coordinates).
  double step_scale = 1.0;
  // Evaluate the kernel of conj(V) instead of V.
  bool conjugate_kernel = false;
};

// |dG/dhbar - 1/4 grad^T M grad G| for the n = 3 kernel, by central differences.
double heat_kernel_residual(const ChainKernelSample& s, const HeatKernelOptions& opts = {});

}  // namespace cqc
