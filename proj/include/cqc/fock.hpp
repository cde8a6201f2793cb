#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cqc/classical.hpp"

namespace cqc {

using Complex = std::complex<double>;

// alpha = q + i k with (q, k) = (lambda x, p / lambda) / sqrt(hbar).
struct CoherentAmplitude {
  double q = 0.0;
  double k = 0.0;
  double hbar = 1.0;
  double lambda = 1.0;

  static CoherentAmplitude from_point(const PhasePoint& pt, double hbar, double lambda = 1.0);
  Complex alpha() const { return {q, k}; }
  double norm2() const { return q * q + k * k; }
  PhasePoint point() const;
};

struct TruncationPolicy {
  double epsilon = 1e-12;
  std::size_t dim_cap = 512;
  // Diagonal (rotationally symmetric) states are stored as a vector and
  // can afford far larger cutoffs than dense matrices.
  std::size_t diagonal_dim_cap = std::size_t{1} << 18;

  void validate() const;
};

// P(n >= dim) for a Poisson photon-number law with the given mean.
double poisson_tail(double mean, std::size_t dim);

struct CoherentDim {
  std::size_t dim;
  double tail;
  bool capped;
};

// Smallest N whose Poisson tail beyond N is below policy.epsilon, clamped to
// the dense cap.
CoherentDim coherent_dim(double mean_photons, const TruncationPolicy& policy);

class FockVector {
 public:
  FockVector() = default;
  explicit FockVector(Eigen::VectorXcd amplitudes, double tail_mass = 0.0, bool capped = false);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Complex operator[](std::size_t n) const { return amps_(static_cast<Eigen::Index>(n)); }
  // 1 - sum |c_n|^2 for truncated coherent states (exact Poisson tail).
  double tail_mass() const { return tail_; }
  // True when the dimension cap stopped growth before the tail target.
  bool truncation_warning() const { return capped_; }
  double norm2() const { return amps_.squaredNorm(); }

 private:
  Eigen::VectorXcd amps_;
  double tail_ = 0.0;
  bool capped_ = false;
};

// Dense N x N complex matrix, or a real diagonal for states/operators that
// are diagonal in the number basis.
class FockOperator {
 public:
  FockOperator() = default;

  // Throws NotHermitian when `hermitian` is set but the matrix is not.
  static FockOperator dense(Eigen::MatrixXcd m, bool hermitian);
  static FockOperator diagonal(Eigen::VectorXd d);
  static FockOperator identity(std::size_t dim);
  static FockOperator number(std::size_t dim);
  static FockOperator projector(const FockVector& v);

  std::size_t dim() const;
  bool hermitian() const { return hermitian_; }
  bool is_diagonal() const { return diagonal_; }

  // Dense view; materialized for diagonal operators.
  Eigen::MatrixXcd to_dense() const;
  const Eigen::MatrixXcd& matrix() const;
  const Eigen::VectorXd& diagonal_values() const;
  Complex operator()(std::size_t i, std::size_t j) const;
  double max_abs() const;
  double hermiticity_defect() const;

  FockOperator operator+(const FockOperator& o) const;
  FockOperator operator-(const FockOperator& o) const;
  FockOperator operator*(const FockOperator& o) const;
  FockOperator operator*(double s) const;
  // Leading dim x dim block.
  FockOperator block(std::size_t dim) const;

 private:
  Eigen::MatrixXcd dense_;
  Eigen::VectorXd diag_;
  bool diagonal_ = false;
  bool hermitian_ = false;
};

FockVector coherent_vector(const CoherentAmplitude& alpha, const TruncationPolicy& policy = {});
// Fixed-dimension variant; tail metadata still reported.
FockVector coherent_vector(Complex alpha, std::size_t dim);

// <v1|v2>, conjugate-linear in the first argument.
Complex overlap(const FockVector& v1, const FockVector& v2);

// Closed form <alpha|beta> = exp(-|alpha-beta|^2/2 + i Im(conj(alpha) beta)).
Complex coherent_overlap(Complex alpha, Complex beta);

struct HermitianEigen {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns

  FockVector eigenvector(std::size_t i) const;
};

HermitianEigen hermitian_eig(const FockOperator& op);

inline constexpr double kDefaultLogFloor = 1e-300;

// log via eigendecomposition; eigenvalues below `floor` are clipped.
// Throws NotAState for eigenvalues below -1e-10.
FockOperator operator_log(const FockOperator& op, double floor = kDefaultLogFloor);

Complex trace_product(std::span<const FockOperator> ops);
Complex trace_product(std::initializer_list<FockOperator> ops);

}  // namespace cqc
