#include "cqc/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cqc/errors.hpp"
#include "cqc/quadrature.hpp"

namespace cqc {

void LiftConfig::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw Error("hbar must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("lambda must be positive");
  if (quad_order < 0 || quad_order > kMaxGaussHermiteOrder) throw Error("quad_order out of range");
  policy.validate();
}

// ---------------------------------------------------------------------------
// States

DensityOperator lift_point(const PhasePoint& pt, const LiftConfig& cfg) {
  cfg.validate();
  const auto amp = cfg.amplitude(pt);
  FockVector v;
  if (cfg.dim > 0) {
    v = coherent_vector(amp.alpha(), cfg.dim);
  } else {
    v = coherent_vector(amp, cfg.policy);
  }
  DensityOperator rho;
  rho.op = FockOperator::projector(v);
  rho.trace_defect = v.tail_mass();
  rho.truncation_warning = v.truncation_warning();
  return rho;
}

namespace {

bool is_symmetric_ensemble(const ClassicalDistribution& dist, const LiftConfig& cfg) {
  if (!cfg.allow_diagonal || cfg.lambda != 1.0) return false;
  return std::all_of(dist.components().begin(), dist.components().end(),
                     [](const GaussianComponent& c) { return c.mean.x == 0.0 && c.mean.p == 0.0; });
}

// Mean photon number of a centred isotropic Gaussian with per-axis std
// sigma: the P-function has |alpha|^2 variance 2 sigma^2 / hbar.
double thermal_occupation(double sigma, double hbar) { return 2.0 * sigma * sigma / hbar; }

double thermal_tail(const ClassicalDistribution& dist, double hbar, std::size_t dim) {
  double tail = 0.0;
  for (const auto& c : dist.components()) {
    const double nbar = thermal_occupation(c.sigma, hbar);
    const double r = nbar / (1.0 + nbar);
    tail += c.weight * (r == 0.0 ? (dim == 0 ? 1.0 : 0.0) : std::pow(r, static_cast<double>(dim)));
  }
  return tail;
}

// P-averaged Poisson tail beyond `dim` for a general mixture.
double mixture_tail(const ClassicalDistribution& dist, const LiftConfig& cfg, std::size_t dim) {
  double tail = 0.0;
  for (const auto& c : dist.components()) {
    const auto amp = cfg.amplitude(c.mean);
    if (c.sigma == 0.0) {
      tail += c.weight * poisson_tail(amp.norm2(), dim);
      continue;
    }
    const double sq = cfg.lambda * c.sigma / std::sqrt(cfg.hbar);
    const double sk = c.sigma / (cfg.lambda * std::sqrt(cfg.hbar));
    constexpr int kOrder = 24;
    const auto rq = gaussian_rule(kOrder, amp.q, sq);
    const auto rk = gaussian_rule(kOrder, amp.k, sk);
    double t = 0.0;
    for (int i = 0; i < kOrder; ++i) {
      for (int j = 0; j < kOrder; ++j) {
        const double m = rq.nodes[i] * rq.nodes[i] + rk.nodes[j] * rk.nodes[j];
        t += rq.weights[i] * rk.weights[j] * poisson_tail(m, dim);
      }
    }
    tail += c.weight * t;
  }
  return tail;
}

template <typename TailFn>
std::size_t smallest_dim(TailFn tail, double eps, std::size_t cap) {
  if (tail(cap) >= eps) {
    // Report how far beyond the cap we would have to go.
    std::size_t need = cap;
    while (tail(need) >= eps && need < (std::size_t{1} << 26)) need *= 2;
    throw TruncationError(need, cap);
  }
  std::size_t lo = 0, hi = cap;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (tail(mid) < eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

DensityOperator lift_symmetric(const ClassicalDistribution& dist, const LiftConfig& cfg) {
  const std::size_t dim =
      cfg.dim > 0 ? cfg.dim
                  : smallest_dim([&](std::size_t n) { return thermal_tail(dist, cfg.hbar, n); },
                                 cfg.policy.epsilon, cfg.policy.diagonal_dim_cap);
  // The angular integral of |c_n(alpha)|^2 against an isotropic Gaussian
  // leaves int_0^inf dt exp(-t/nbar) t^n exp(-t) / (nbar n!), a geometric law.
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& c : dist.components()) {
    const double nbar = thermal_occupation(c.sigma, cfg.hbar);
    const double r = nbar / (1.0 + nbar);
    double term = c.weight / (1.0 + nbar);
    for (Eigen::Index n = 0; n < d.size(); ++n) {
      d(n) += term;
      term *= r;
    }
  }
  DensityOperator rho;
  rho.op = FockOperator::diagonal(std::move(d));
  rho.trace_defect = thermal_tail(dist, cfg.hbar, dim);
  return rho;
}

// Coherent amplitudes c_n(alpha) for every node of a tensor grid, laid out
// as columns, for one row of q nodes.
void fill_coherent_columns(Eigen::MatrixXcd& cols, double q, std::span<const double> ks) {
  const Eigen::Index dim = cols.rows();
  for (std::size_t j = 0; j < ks.size(); ++j) {
    const Complex alpha(q, ks[j]);
    const auto col = static_cast<Eigen::Index>(j);
    cols(0, col) = std::exp(-0.5 * std::norm(alpha));
    for (Eigen::Index n = 0; n + 1 < dim; ++n) {
      cols(n + 1, col) = cols(n, col) * alpha / std::sqrt(static_cast<double>(n + 1));
    }
  }
}

DensityOperator lift_dense_mixture(const ClassicalDistribution& dist, const LiftConfig& cfg) {
  const std::size_t dim =
      cfg.dim > 0 ? cfg.dim
                  : smallest_dim([&](std::size_t n) { return mixture_tail(dist, cfg, n); },
                                 cfg.policy.epsilon, cfg.policy.dim_cap);
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& c : dist.components()) {
    const auto amp = cfg.amplitude(c.mean);
    if (c.sigma == 0.0) {
      const auto v = coherent_vector(amp.alpha(), dim);
      rho += c.weight * v.amplitudes() * v.amplitudes().adjoint();
      continue;
    }
    // Per axis: N(t; mean, s^2) exp(-t^2) = z N(t; m, v) with 1/v = 1/s^2 + 2.
    // With alpha = q + ik under the product of those Gaussians, entry (m, n) is
    // z_q z_k E[alpha^m conj(alpha)^n] / sqrt(m! n!), computed by recursion.
    const auto axis = [](double mean, double s, double& m, double& v) {
      v = 1.0 / (1.0 / (s * s) + 2.0);
      m = mean * v / (s * s);
      return 0.5 * std::log(v / (s * s)) - mean * mean / (2.0 * s * s) + m * m / (2.0 * v);
    };
    double mq, vq, mk, vk;
    const double log_z = axis(amp.q, cfg.lambda * c.sigma / std::sqrt(cfg.hbar), mq, vq) +
                         axis(amp.k, c.sigma / (cfg.lambda * std::sqrt(cfg.hbar)), mk, vk);
    const Complex mu(mq, mk);
    const double cc = vq - vk;  // E[da da]
    const double dd = vq + vk;  // E[da conj(da)]
    Eigen::MatrixXcd t(n, n);
    // T(m+1, n) sqrt(m+1) = mu T(m, n) + cc sqrt(m) T(m-1, n) + dd sqrt(n) T(m, n-1)
    for (Eigen::Index col = 0; col < n; ++col) {
      t(0, col) = col == 0 ? Complex(1.0) : std::conj(t(col, 0));
      for (Eigen::Index m = 0; m + 1 < n; ++m) {
        Complex next = mu * t(m, col);
        if (m > 0) next += cc * std::sqrt(static_cast<double>(m)) * t(m - 1, col);
        if (col > 0) next += dd * std::sqrt(static_cast<double>(col)) * t(m, col - 1);
        t(m + 1, col) = next / std::sqrt(static_cast<double>(m + 1));
      }
    }
    rho += (c.weight * std::exp(log_z)) * t;
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  DensityOperator out;
  out.trace_defect = std::abs(1.0 - rho.trace().real());
  out.op = FockOperator::dense(std::move(rho), true);
  return out;
}

}  // namespace

std::size_t distribution_dim(const ClassicalDistribution& dist, const LiftConfig& cfg) {
  cfg.validate();
  if (cfg.dim > 0) return cfg.dim;
  if (is_symmetric_ensemble(dist, cfg)) {
    return smallest_dim([&](std::size_t n) { return thermal_tail(dist, cfg.hbar, n); },
                        cfg.policy.epsilon, cfg.policy.diagonal_dim_cap);
  }
  return smallest_dim([&](std::size_t n) { return mixture_tail(dist, cfg, n); }, cfg.policy.epsilon,
                      cfg.policy.dim_cap);
}

DensityOperator lift_distribution(const ClassicalDistribution& dist, const LiftConfig& cfg) {
  cfg.validate();
  if (is_symmetric_ensemble(dist, cfg)) return lift_symmetric(dist, cfg);
  return lift_dense_mixture(dist, cfg);
}

// ---------------------------------------------------------------------------
// Observables

int exact_lift_order(int degree, std::size_t dim) {
  // Entry (m, n) has per-axis polynomial degree <= degree + m + n <= degree + 2(dim - 1);
  // an order-g rule is exact through degree 2g - 1.
  const int top = std::max(0, degree) + 2 * (static_cast<int>(dim) - 1);
  return std::max(1, top / 2 + 1);
}

namespace {

Eigen::MatrixXcd lift_with_order(const ClassicalObservable& a, const LiftConfig& cfg, int order) {
  const auto n = static_cast<Eigen::Index>(cfg.dim);
  const auto& gh = gauss_hermite(order);
  const double s = std::sqrt(cfg.hbar);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd cols(n, order);
  Eigen::VectorXd w(order);
  for (int i = 0; i < order; ++i) {
    const double q = gh.nodes[i];
    fill_coherent_columns(cols, q, gh.nodes);
    for (int j = 0; j < order; ++j) {
      const double k = gh.nodes[j];
      w(j) = gh.scaled_weights[i] * gh.scaled_weights[j] * a(s * q / cfg.lambda, cfg.lambda * s * k) /
             std::numbers::pi;
    }
    out.noalias() += cols * w.cast<Complex>().asDiagonal() * cols.adjoint();
  }
  return 0.5 * (out + out.adjoint());
}

}  // namespace

FockOperator lift_observable(const ClassicalObservable& a, const LiftConfig& cfg) {
  cfg.validate();
  if (cfg.dim == 0) throw Error("lift_observable needs an explicit Fock dimension");
  if (a.has_polynomial()) {
    const int order = cfg.quad_order > 0 ? cfg.quad_order : exact_lift_order(a.degree(), cfg.dim);
    if (order > kMaxGaussHermiteOrder) {
      throw TruncationError(cfg.dim, static_cast<std::size_t>(kMaxGaussHermiteOrder / 2));
    }
    return FockOperator::dense(lift_with_order(a, cfg, order), true);
  }
  // Black box: double the order until successive lifts agree.
  int order = cfg.quad_order > 0 ? cfg.quad_order : std::max(16, exact_lift_order(4, cfg.dim));
  Eigen::MatrixXcd prev = lift_with_order(a, cfg, order);
  while (true) {
    const int next_order = std::min(2 * order, kMaxGaussHermiteOrder);
    Eigen::MatrixXcd next = lift_with_order(a, cfg, next_order);
    const double scale = std::max(next.cwiseAbs().maxCoeff(), 1e-300);
    const double diff = (next - prev).cwiseAbs().maxCoeff();
    if (diff <= 1e-10 * scale) return FockOperator::dense(std::move(next), true);
    if (next_order == kMaxGaussHermiteOrder || next_order == order) {
      throw AccuracyError("black-box lift did not converge", diff / scale);
    }
    order = next_order;
    prev = std::move(next);
  }
}

std::size_t experiment_dim(std::span<const PhasePoint> points, int degree, int power,
                           const LiftConfig& cfg) {
  cfg.validate();
  std::size_t base = 1;
  for (const auto& pt : points) {
    const auto d = coherent_dim(cfg.amplitude(pt).norm2(), cfg.policy);
    base = std::max(base, d.dim);
  }
  const std::size_t dim = base + static_cast<std::size_t>(std::max(0, degree) * std::max(1, power));
  if (dim > cfg.policy.dim_cap) throw TruncationError(dim, cfg.policy.dim_cap);
  return dim;
}

// ---------------------------------------------------------------------------
// Expectations

namespace {

void require_same_dim(const DensityOperator& rho, const FockOperator& op) {
  if (rho.dim() != op.dim()) throw DimensionMismatch(rho.dim(), op.dim());
}

double real_part_checked(Complex v, const char* what) {
  if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real()))) {
    throw NumericsError(std::string(what) + " has imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

}  // namespace

double quantum_expectation(const DensityOperator& rho, const FockOperator& op) {
  require_same_dim(rho, op);
  return real_part_checked(trace_product({rho.op, op}), "expectation");
}

double quantum_moment(const DensityOperator& rho, const FockOperator& op, int n) {
  if (n < 1) throw Error("moment order must be positive");
  require_same_dim(rho, op);
  FockOperator power = op;
  for (int k = 1; k < n; ++k) power = power * op;
  return real_part_checked(trace_product({rho.op, power}), "moment");
}

Complex commutator_expectation(const DensityOperator& rho, const FockOperator& o1,
                               const FockOperator& o2) {
  require_same_dim(rho, o1);
  require_same_dim(rho, o2);
  const Complex v = trace_product({rho.op, o1, o2}) - trace_product({rho.op, o2, o1});
  if (o1.hermitian() && o2.hermitian() && rho.op.hermitian() &&
      std::abs(v.real()) > 1e-10 * std::max(1.0, std::abs(v.imag()))) {
    throw NumericsError("commutator expectation has real part " + std::to_string(v.real()));
  }
  return v;
}

}  // namespace cqc
