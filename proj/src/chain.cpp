#include "cqc/chain.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "cqc/errors.hpp"
#include "cqc/quadrature.hpp"

namespace cqc {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex root_of_unity(int j, int n) {
  const double t = 2.0 * std::numbers::pi * j / n;
  return {std::cos(t), std::sin(t)};
}

}  // namespace

Eigen::Matrix2cd ChainMatrix::coupling_block() {
  Eigen::Matrix2cd b;
  b << 1.0, kI, -kI, 1.0;
  return -0.5 * b;
}

ChainMatrix::ChainMatrix(int n) : n_(n) {
  if (n < 2) throw Error("chain length must be >= 2");
  const Eigen::Matrix2cd b = coupling_block();
  v_ = Eigen::MatrixXcd::Identity(2 * n, 2 * n);
  // For n = 2 both wraps land on the same off-diagonal block (B + B^T).
  for (int m = 0; m < n; ++m) {
    const int next = (m + 1) % n;
    v_.block<2, 2>(2 * m, 2 * next) += b;
    v_.block<2, 2>(2 * next, 2 * m) += b.transpose();
  }
}

Complex ChainMatrix::quadratic_form(const Eigen::VectorXd& u) const {
  if (u.size() != v_.rows()) throw DimensionMismatch(u.size(), v_.rows());
  const Eigen::VectorXcd uc = u.cast<Complex>();
  return (uc.transpose() * v_ * uc)(0, 0);
}

Eigen::MatrixXcd ChainMatrix::free_block() const {
  return v_.bottomRightCorner(2 * n_ - 2, 2 * n_ - 2);
}

// ---------------------------------------------------------------------------
// Spectrum

int ChainSpectrum::zero_count(double tol) const {
  int count = 0;
  for (const auto& p : pairs) count += std::abs(p.value) < tol;
  return count;
}

Complex ChainSpectrum::nonzero_product(double tol) const {
  Complex prod = 1.0;
  for (const auto& p : pairs) {
    if (std::abs(p.value) >= tol) prod *= p.value;
  }
  return prod;
}

double ChainSpectrum::max_residual(const ChainMatrix& v) const {
  double worst = 0.0;
  for (const auto& p : pairs) {
    worst = std::max(worst, (v.matrix() * p.vector - p.value * p.vector).norm());
  }
  return worst;
}

double ChainSpectrum::orthonormality_defect() const {
  const auto n = unitary.cols();
  return (unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

ChainSpectrum chain_spectrum(int n) {
  if (n < 2) throw Error("chain length must be >= 2");
  ChainSpectrum out;
  out.n = n;
  const double norm = 1.0 / std::sqrt(2.0 * n);
  const std::array<Eigen::Vector2cd, 2> spinors = {Eigen::Vector2cd(-1.0, kI), Eigen::Vector2cd(1.0, kI)};
  out.unitary.resize(2 * n, 2 * n);
  out.reduced.resize(2 * n, 2 * n - 2);
  int col = 0, rcol = 0;
  for (int k = 1; k <= 2; ++k) {
    for (int j = 0; j < n; ++j) {
      const Complex w = root_of_unity(j, n);
      ChainEigenpair pair{k, j, k == 1 ? 1.0 - w : 1.0 - std::conj(w), Eigen::VectorXcd(2 * n)};
      for (int m = 0; m < n; ++m) {
        const Complex phase = root_of_unity(j * m % n, n);
        pair.vector.segment<2>(2 * m) = norm * phase * spinors[k - 1];
      }
      out.unitary.col(col++) = pair.vector;
      if (j != 0) out.reduced.col(rcol++) = pair.vector;
      out.pairs.push_back(std::move(pair));
    }
  }
  return out;
}

const ChainSpectrum& cached_chain_spectrum(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<ChainSpectrum>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<ChainSpectrum>(chain_spectrum(n));
  return *slot;
}

Eigen::VectorXcd chain_delta_support(int n, const PhasePoint& base) {
  const auto& spec = cached_chain_spectrum(n);
  const Eigen::MatrixXcd ur_adj = spec.reduced.adjoint();  // (2n-2) x 2n
  const Eigen::MatrixXcd u0_adj = ur_adj.leftCols(2);
  const Eigen::MatrixXcd ui_adj = ur_adj.rightCols(2 * n - 2);
  const Eigen::Vector2cd u0(base.x, base.p);
  return -ui_adj.partialPivLu().solve(u0_adj * u0);
}

// ---------------------------------------------------------------------------
// Kernel

Eigen::VectorXd ChainKernelSample::coordinates() const {
  Eigen::VectorXd u(2 * n());
  u(0) = base.x;
  u(1) = base.p;
  for (std::size_t i = 0; i < free.size(); ++i) {
    u(2 * i + 2) = free[i].x;
    u(2 * i + 3) = free[i].p;
  }
  return u;
}

namespace {

Complex kernel_at(const ChainMatrix& v, const Eigen::VectorXd& u, double hbar, bool conjugate) {
  Complex phi = v.quadratic_form(u);
  if (conjugate) phi = std::conj(phi);
  const int n = v.n();
  return std::exp(-phi / hbar) / std::pow(hbar * std::numbers::pi, n - 1);
}

}  // namespace

Complex chain_kernel(const ChainKernelSample& s) {
  if (!(s.hbar > 0.0)) throw Error("hbar must be positive");
  const ChainMatrix v(s.n());
  return kernel_at(v, s.coordinates(), s.hbar, false);
}

// ---------------------------------------------------------------------------
// Analytic chain integrals

namespace {

Complex eval_complex(const Polynomial& a, Complex x, Complex p) {
  Complex sum = 0.0;
  for (const auto& [e, c] : a.terms()) {
    Complex term = c;
    for (int i = 0; i < e.first; ++i) term *= x;
    for (int j = 0; j < e.second; ++j) term *= p;
    sum += term;
  }
  return sum;
}

// W = L L^T for complex symmetric W with positive-definite real part.
Eigen::MatrixXcd complex_symmetric_cholesky(const Eigen::MatrixXcd& w) {
  const auto d = w.rows();
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    Complex diag = w(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (std::abs(diag) < 1e-14) throw NumericsError("singular chain block");
    l(j, j) = std::sqrt(diag);
    for (Eigen::Index i = j + 1; i < d; ++i) {
      Complex s = w(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// det(W)^(-1/2) on the branch continuous from real positive-definite W:
// every eigenvalue lies in the right half-plane, take principal roots.
Complex inverse_sqrt_det(const Eigen::MatrixXcd& w) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(w);
  Complex out = 1.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) out /= std::sqrt(solver.eigenvalues()(i));
  return out;
}

}  // namespace

Complex analytic_chain_integral(const std::vector<Polynomial>& factors, const PhasePoint& pt,
                                double hbar, const AnalyticMomentOptions& opts) {
  if (!(hbar > 0.0)) throw Error("hbar must be positive");
  const int n = static_cast<int>(factors.size()) + 1;
  if (n < 2 || n > 4) throw Error("analytic chain integrals support n in {2, 3, 4}");
  const int d = 2 * (n - 1);

  // The exponent is invariant under a common translation of all points, so
  // with y_i = u_i - u_0 it reduces to y^T W y with W the free block.
  const ChainMatrix v(n);
  const Eigen::MatrixXcd w = v.free_block();
  const Eigen::MatrixXcd l = complex_symmetric_cholesky(w);
  // y = sqrt(hbar) L^{-T} z turns the exponent into -|z|^2; for polynomial
  // integrands the contour shift is exact.
  const Eigen::MatrixXcd t =
      std::sqrt(hbar) * l.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXcd::Identity(d, d));
  const Complex det_factor = inverse_sqrt_det(w);

  int total_degree = 0;
  for (const auto& f : factors) total_degree += f.degree();
  const int order = opts.order > 0 ? opts.order : total_degree / 2 + 1;
  const double points = std::pow(static_cast<double>(order), d);
  if (points > 5e7) throw AccuracyError("chain quadrature grid too large", points);

  const auto& gh = gauss_hermite(order);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Eigen::VectorXcd z(d);
  Complex sum = 0.0;
  while (true) {
    double weight = 1.0;
    for (int a = 0; a < d; ++a) {
      z(a) = gh.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
      weight *= gh.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])] * inv_sqrt_pi;
    }
    const Eigen::VectorXcd y = t * z;
    Complex value = 1.0;
    for (int i = 0; i < n - 1; ++i) {
      value *= eval_complex(factors[static_cast<std::size_t>(i)], pt.x + y(2 * i), pt.p + y(2 * i + 1));
    }
    sum += weight * value;
    int a = 0;
    while (a < d && ++idx[static_cast<std::size_t>(a)] == order) idx[static_cast<std::size_t>(a++)] = 0;
    if (a == d) break;
  }
  return det_factor * sum;
}

Complex analytic_moment_complex(const Polynomial& a, const PhasePoint& pt, double hbar, int n,
                                const AnalyticMomentOptions& opts) {
  return analytic_chain_integral(std::vector<Polynomial>(static_cast<std::size_t>(std::max(0, n - 1)), a),
                                 pt, hbar, opts);
}

double analytic_moment(const Polynomial& a, const PhasePoint& pt, double hbar, int n,
                       const AnalyticMomentOptions& opts) {
  const Complex v = analytic_moment_complex(a, pt, hbar, n, opts);
  if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real()))) {
    throw NumericsError("chain moment has imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

// ---------------------------------------------------------------------------
// Heat-kernel identity

Eigen::Matrix4cd heat_coupling_matrix(HeatCoupling variant) {
  const Eigen::Matrix2cd b = ChainMatrix::coupling_block();
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix4cd m;
  switch (variant) {
    case HeatCoupling::kStated:
      m << id, -b.transpose(), -b, id;
      break;
    case HeatCoupling::kSignFlipped:
      m << id, b.transpose(), b, id;
      break;
    case HeatCoupling::kFreeBlockInverse:
      m << id, -b, -b.transpose(), id;
      break;
  }
  return m;
}

double heat_kernel_residual(const ChainKernelSample& s, const HeatKernelOptions& opts) {
  if (s.n() != 3) throw Error("heat-kernel identity is defined for n = 3");
  const ChainMatrix v(3);
  const Eigen::VectorXd u = s.coordinates();
  const double hbar = s.hbar;
  const auto g = [&](const Eigen::VectorXd& uu, double h) { return kernel_at(v, uu, h, opts.conjugate_kernel); };

  const double dh = 1e-5 * hbar * opts.step_scale;
  const Complex dg_dhbar = (g(u, hbar + dh) - g(u, hbar - dh)) / (2.0 * dh);

  const double h = 1e-4 * std::sqrt(hbar) * opts.step_scale;
  const Eigen::Matrix4cd m = heat_coupling_matrix(opts.coupling);
  const Eigen::Matrix4cd msym = 0.5 * (m + m.transpose());
  const Complex g0 = g(u, hbar);
  Complex laplacian = 0.0;
  const auto shifted = [&](int a, double da, int b, double db) {
    Eigen::VectorXd uu = u;
    uu(2 + a) += da;
    uu(2 + b) += db;
    return g(uu, hbar);
  };
  for (int a = 0; a < 4; ++a) {
    const Complex d2 = (shifted(a, h, a, 0.0) - 2.0 * g0 + shifted(a, -h, a, 0.0)) / (h * h);
    laplacian += msym(a, a) * d2;
    for (int b = a + 1; b < 4; ++b) {
      const Complex dab =
          (shifted(a, h, b, h) - shifted(a, h, b, -h) - shifted(a, -h, b, h) + shifted(a, -h, b, -h)) /
          (4.0 * h * h);
      laplacian += 2.0 * msym(a, b) * dab;
    }
  }
  return std::abs(dg_dhbar - 0.25 * laplacian);
}

}  // namespace cqc
