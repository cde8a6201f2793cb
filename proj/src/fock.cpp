#include "cqc/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "cqc/errors.hpp"

namespace cqc {

CoherentAmplitude CoherentAmplitude::from_point(const PhasePoint& pt, double hbar, double lambda) {
  if (!(hbar > 0.0) || !(lambda > 0.0)) throw Error("hbar and lambda must be positive");
  const double s = std::sqrt(hbar);
  return {lambda * pt.x / s, pt.p / (lambda * s), hbar, lambda};
}

PhasePoint CoherentAmplitude::point() const {
  const double s = std::sqrt(hbar);
  return {q * s / lambda, k * s * lambda};
}

void TruncationPolicy::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("truncation epsilon must lie in (0, 1)");
  if (dim_cap == 0) throw Error("dim_cap must be positive");
}

double poisson_tail(double mean, std::size_t dim) {
  if (dim == 0) return 1.0;
  if (mean <= 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(dim), mean);
}

CoherentDim coherent_dim(double mean_photons, const TruncationPolicy& policy) {
  policy.validate();
  const std::size_t cap = policy.dim_cap;
  if (poisson_tail(mean_photons, cap) >= policy.epsilon) {
    return {cap, poisson_tail(mean_photons, cap), true};
  }
  std::size_t lo = 1, hi = cap;  // tail(hi) < eps
  if (poisson_tail(mean_photons, lo) < policy.epsilon) hi = lo;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (poisson_tail(mean_photons, mid) < policy.epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, poisson_tail(mean_photons, hi), false};
}

// ---------------------------------------------------------------------------
// FockVector / FockOperator

FockVector::FockVector(Eigen::VectorXcd amplitudes, double tail_mass, bool capped)
    : amps_(std::move(amplitudes)), tail_(tail_mass), capped_(capped) {
  if (!amps_.allFinite()) throw NumericsError("non-finite Fock amplitudes");
}

FockOperator FockOperator::dense(Eigen::MatrixXcd m, bool hermitian) {
  if (m.rows() != m.cols()) throw DimensionMismatch(m.rows(), m.cols());
  FockOperator op;
  op.dense_ = std::move(m);
  op.hermitian_ = hermitian;
  if (hermitian) {
    const double scale = op.dense_.cwiseAbs().maxCoeff();
    if (op.hermiticity_defect() > 1e-12 * scale) {
      throw NotHermitian("operator flagged Hermitian is not Hermitian");
    }
  }
  return op;
}

FockOperator FockOperator::diagonal(Eigen::VectorXd d) {
  FockOperator op;
  op.diag_ = std::move(d);
  op.diagonal_ = true;
  op.hermitian_ = true;
  return op;
}

FockOperator FockOperator::identity(std::size_t dim) {
  return diagonal(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim)));
}

FockOperator FockOperator::number(std::size_t dim) {
  return diagonal(Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(dim), 0.0,
                                             static_cast<double>(dim) - 1.0));
}

FockOperator FockOperator::projector(const FockVector& v) {
  const auto& a = v.amplitudes();
  Eigen::MatrixXcd m = a * a.adjoint();
  return dense(std::move(m), true);
}

std::size_t FockOperator::dim() const {
  return static_cast<std::size_t>(diagonal_ ? diag_.size() : dense_.rows());
}

Eigen::MatrixXcd FockOperator::to_dense() const {
  if (!diagonal_) return dense_;
  return diag_.cast<Complex>().asDiagonal();
}

const Eigen::MatrixXcd& FockOperator::matrix() const {
  if (diagonal_) throw Error("matrix() on a diagonal operator; use to_dense()");
  return dense_;
}

const Eigen::VectorXd& FockOperator::diagonal_values() const {
  if (!diagonal_) throw Error("diagonal_values() on a dense operator");
  return diag_;
}

Complex FockOperator::operator()(std::size_t i, std::size_t j) const {
  const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
  if (diagonal_) return i == j ? Complex(diag_(ii)) : Complex(0.0);
  return dense_(ii, jj);
}

double FockOperator::max_abs() const {
  if (dim() == 0) return 0.0;
  return diagonal_ ? diag_.cwiseAbs().maxCoeff() : dense_.cwiseAbs().maxCoeff();
}

double FockOperator::hermiticity_defect() const {
  if (diagonal_ || dim() == 0) return 0.0;
  return (dense_ - dense_.adjoint()).cwiseAbs().maxCoeff();
}

FockOperator FockOperator::operator+(const FockOperator& o) const {
  if (dim() != o.dim()) throw DimensionMismatch(dim(), o.dim());
  if (diagonal_ && o.diagonal_) return diagonal(diag_ + o.diag_);
  FockOperator out;
  out.dense_ = to_dense() + o.to_dense();
  out.hermitian_ = hermitian_ && o.hermitian_;
  return out;
}

FockOperator FockOperator::operator-(const FockOperator& o) const { return *this + o * -1.0; }

FockOperator FockOperator::operator*(const FockOperator& o) const {
  if (dim() != o.dim()) throw DimensionMismatch(dim(), o.dim());
  if (diagonal_ && o.diagonal_) return diagonal(diag_.cwiseProduct(o.diag_));
  FockOperator out;
  if (diagonal_) {
    out.dense_ = diag_.cast<Complex>().asDiagonal() * o.dense_;
  } else if (o.diagonal_) {
    out.dense_ = dense_ * o.diag_.cast<Complex>().asDiagonal();
  } else {
    out.dense_ = dense_ * o.dense_;
  }
  return out;
}

FockOperator FockOperator::operator*(double s) const {
  if (diagonal_) return diagonal(diag_ * s);
  FockOperator out;
  out.dense_ = dense_ * s;
  out.hermitian_ = hermitian_;
  return out;
}

FockOperator FockOperator::block(std::size_t n) const {
  if (n > dim()) throw DimensionMismatch(n, dim());
  const auto nn = static_cast<Eigen::Index>(n);
  if (diagonal_) return diagonal(diag_.head(nn));
  FockOperator out;
  out.dense_ = dense_.topLeftCorner(nn, nn);
  out.hermitian_ = hermitian_;
  return out;
}

// ---------------------------------------------------------------------------
// Coherent states

FockVector coherent_vector(Complex alpha, std::size_t dim) {
  if (dim == 0) throw Error("Fock dimension must be positive");
  const double mean = std::norm(alpha);
  if (!std::isfinite(mean)) throw Error("non-finite coherent amplitude");
  Eigen::VectorXcd c(static_cast<Eigen::Index>(dim));
  c(0) = std::exp(-0.5 * mean);
  for (Eigen::Index n = 0; n + 1 < c.size(); ++n) {
    c(n + 1) = c(n) * alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return FockVector(std::move(c), poisson_tail(mean, dim), false);
}

FockVector coherent_vector(const CoherentAmplitude& alpha, const TruncationPolicy& policy) {
  const auto d = coherent_dim(alpha.norm2(), policy);
  auto v = coherent_vector(alpha.alpha(), d.dim);
  return FockVector(v.amplitudes(), v.tail_mass(), d.capped);
}

Complex overlap(const FockVector& v1, const FockVector& v2) {
  if (v1.dim() != v2.dim()) throw DimensionMismatch(v1.dim(), v2.dim());
  return v1.amplitudes().dot(v2.amplitudes());  // conjugates the first argument
}

Complex coherent_overlap(Complex alpha, Complex beta) {
  return std::exp(Complex(-0.5 * std::norm(alpha - beta), (std::conj(alpha) * beta).imag()));
}

// ---------------------------------------------------------------------------
// Spectral functions

FockVector HermitianEigen::eigenvector(std::size_t i) const {
  return FockVector(vectors.col(static_cast<Eigen::Index>(i)));
}

HermitianEigen hermitian_eig(const FockOperator& op) {
  if (!op.hermitian()) throw NotHermitian("hermitian_eig requires a Hermitian operator");
  HermitianEigen out;
  if (op.is_diagonal()) {
    const auto& d = op.diagonal_values();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(d.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return d(a) < d(b); });
    out.values.resize(d.size());
    out.vectors = Eigen::MatrixXcd::Zero(d.size(), d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      out.values(i) = d(idx[static_cast<std::size_t>(i)]);
      out.vectors(idx[static_cast<std::size_t>(i)], i) = 1.0;
    }
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.matrix());
  if (solver.info() != Eigen::Success) throw NumericsError("Hermitian eigensolver failed");
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

FockOperator operator_log(const FockOperator& op, double floor) {
  const auto safe_log = [floor](double v) {
    if (v < -1e-10) throw NotAState("negative eigenvalue " + std::to_string(v));
    return std::log(std::max(v, floor));
  };
  if (op.is_diagonal()) {
    return FockOperator::diagonal(op.diagonal_values().unaryExpr(safe_log));
  }
  const auto eig = hermitian_eig(op);
  const Eigen::VectorXd logs = eig.values.unaryExpr(safe_log);
  Eigen::MatrixXcd m = eig.vectors * logs.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  m = 0.5 * (m + m.adjoint()).eval();
  return FockOperator::dense(std::move(m), true);
}

Complex trace_product(std::span<const FockOperator> ops) {
  if (ops.empty()) throw Error("trace_product of an empty list");
  const std::size_t n = ops.front().dim();
  for (const auto& o : ops) {
    if (o.dim() != n) throw DimensionMismatch(n, o.dim());
  }
  FockOperator acc = ops.front();
  for (std::size_t i = 1; i + 1 < ops.size(); ++i) acc = acc * ops[i];
  if (ops.size() == 1) {
    return acc.is_diagonal() ? Complex(acc.diagonal_values().sum()) : acc.matrix().trace();
  }
  const auto& last = ops.back();
  if (acc.is_diagonal() && last.is_diagonal()) {
    return acc.diagonal_values().dot(last.diagonal_values());
  }
  if (acc.is_diagonal()) {
    return (acc.diagonal_values().cast<Complex>().array() * last.matrix().diagonal().array()).sum();
  }
  if (last.is_diagonal()) {
    return (acc.matrix().diagonal().array() * last.diagonal_values().cast<Complex>().array()).sum();
  }
  // Tr[AB] = sum_ij A_ij B_ji
  return acc.matrix().cwiseProduct(last.matrix().transpose()).sum();
}

Complex trace_product(std::initializer_list<FockOperator> ops) {
  return trace_product(std::span<const FockOperator>(ops.begin(), ops.size()));
}

}  // namespace cqc
