#include "cqc/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "cqc/errors.hpp"

namespace cqc {

namespace {

constexpr double kNegativeTolerance = 1e-10;

double clip(double v) {
  if (v < -kNegativeTolerance) throw NotAState("negative eigenvalue " + std::to_string(v));
  return std::max(v, 0.0);
}

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

double log_floor(double v) { return std::log(std::max(v, kDefaultLogFloor)); }

void check_support(double mu, double mass, double threshold) {
  if (mu < threshold && mass > kSupportMassTolerance) {
    throw DivergenceError("relative entropy is infinite: weight " + std::to_string(mass) +
                          " outside the support of the reference state");
  }
}

}  // namespace

double relative_entropy(const DensityOperator& rho1, const DensityOperator& rho2) {
  if (rho1.dim() != rho2.dim()) throw DimensionMismatch(rho1.dim(), rho2.dim());
  if (rho1.op.is_diagonal() && rho2.op.is_diagonal()) {
    const auto& a = rho1.op.diagonal_values();
    const auto& b = rho2.op.diagonal_values();
    double s = 0.0;
    for (Eigen::Index n = 0; n < a.size(); ++n) {
      const double l = clip(a(n));
      const double mu = clip(b(n));
      check_support(mu, l, kDefaultLogFloor);
      if (l > 0.0) s += xlogx(l) - l * log_floor(mu);
    }
    return s;
  }
  const auto e1 = hermitian_eig(rho1.op);
  const auto e2 = hermitian_eig(rho2.op);
  // |<u_i|v_j>|^2 weighted by the eigenvalues of rho1 gives the weight of
  // rho1 on each eigenvector of rho2.
  const Eigen::MatrixXd overlaps = (e1.vectors.adjoint() * e2.vectors).cwiseAbs2();
  Eigen::VectorXd lambda(e1.values.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = clip(e1.values(i));
  const Eigen::VectorXd mass = overlaps.transpose() * lambda;
  double s = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) s += xlogx(lambda(i));
  for (Eigen::Index j = 0; j < mass.size(); ++j) {
    const double mu = clip(e2.values(j));
    check_support(mu, mass(j), kSupportThreshold);
    s -= mass(j) * log_floor(mu);
  }
  return s;
}

double von_neumann_entropy(const DensityOperator& rho) {
  double s = 0.0;
  if (rho.op.is_diagonal()) {
    const auto& d = rho.op.diagonal_values();
    for (Eigen::Index n = 0; n < d.size(); ++n) s -= xlogx(clip(d(n)));
    return s;
  }
  const auto e = hermitian_eig(rho.op);
  for (Eigen::Index n = 0; n < e.values.size(); ++n) s -= xlogx(clip(e.values(n)));
  return s;
}

bool EntropySweep::gaps_decreasing() const {
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (!(reports[i].gap < reports[i - 1].gap)) return false;
  }
  return true;
}

EntropySweep entropy_limit_sweep(const ClassicalDistribution& p1, const ClassicalDistribution& p2,
                                 const std::vector<double>& schedule, const TruncationPolicy& policy,
                                 double lambda) {
  if (p1.has_point_mass() || p2.has_point_mass()) {
    throw ConfigError("entropy sweeps need positive-sigma distributions");
  }
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] < schedule[i - 1]))) {
      throw ConfigError("hbar schedule must be positive and strictly decreasing");
    }
  }
  const double kl = kl_divergence(p1, p2);
  EntropySweep out;
  for (double h : schedule) {
    LiftConfig cfg;
    cfg.hbar = h;
    cfg.lambda = lambda;
    cfg.policy = policy;
    try {
      cfg.dim = std::max(distribution_dim(p1, cfg), distribution_dim(p2, cfg));
    } catch (const TruncationError& e) {
      out.truncated = true;
      out.warning = "schedule stopped at hbar = " + std::to_string(h) + ": " + e.what();
      break;
    }
    const auto r1 = lift_distribution(p1, cfg);
    const auto r2 = lift_distribution(p2, cfg);
    EntropyReport rep;
    rep.hbar = h;
    try {
      rep.s_quantum = relative_entropy(r1, r2);
    } catch (Error& e) {
      e.add_context("at hbar = " + std::to_string(h));
      throw;
    }
    rep.kl_classical = kl;
    rep.gap = std::abs(rep.s_quantum - kl);
    rep.dims_used = cfg.dim;
    rep.tail = std::max(r1.trace_defect, r2.trace_defect);
    rep.flagged = rep.tail >= 1e-10;
    out.reports.push_back(rep);
  }
  return out;
}

}  // namespace cqc
