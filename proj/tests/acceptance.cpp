// Prints one PASS/FAIL line per acceptance criterion. Exits non-zero if any
// criterion fails, except those listed with --expect-red (still printed as FAIL).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>
#include <random>
#include <string>
#include <vector>

#include "cqc/chain.hpp"
#include "cqc/classical.hpp"
#include "cqc/entropy.hpp"
#include "cqc/mapping.hpp"
#include "cqc/sweep.hpp"
#include "oracles.hpp"

using namespace cqc;

namespace {

int failures = 0;
int unexpected = 0;
std::set<int> expected_red;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("criterion %2d %s  %s | %s\n", id, ok ? "PASS" : "FAIL", title, detail.c_str());
  std::fflush(stdout);
  if (!ok) {
    ++failures;
    if (!expected_red.count(id)) ++unexpected;
  }
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Polynomial mono(int i, int j, double c = 1.0) { return Polynomial::monomial(i, j, c); }

Polynomial random_poly(std::mt19937& rng, int degree) {
  std::uniform_real_distribution<double> c(-1, 1);
  Polynomial a;
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; i + j <= degree; ++j) a = a + mono(i, j, c(rng));
  }
  return a;
}

void identity_resolution() {
  double worst = 0.0;
  for (double hbar : {1.0, 0.25, 0.05}) {
    LiftConfig cfg;
    cfg.hbar = hbar;
    const PhasePoint probe[] = {{0.7, -0.3}};
    cfg.dim = experiment_dim(probe, 0, 1, cfg);
    const auto one = lift_observable(Polynomial::constant(1.0), cfg).to_dense();
    const auto n = static_cast<Eigen::Index>(cfg.dim);
    worst = std::max(worst, (one - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
  }
  report(1, "resolution of identity", worst <= 1e-8, fmt("max |1_hat - I| = %.3e (tol 1e-8)", worst));
}

void expectation_limit() {
  const auto s = sweep_expectation(mono(2, 0), PhasePoint{0.7, -0.3});
  const double dl = std::abs(s.limit0.real() - 0.49);
  const double ds = std::abs(s.slope0.real() - 0.5) / 0.5;
  const double dord = s.order_defined ? std::abs(s.order - 1.0) : 1.0;
  report(2, "expectation limit", dl <= 1e-6 && ds <= 0.05 && dord <= 0.05,
         fmt("limit %.12f (|d| %.1e), slope %.9f, order %.6f", s.limit0.real(), dl, s.slope0.real(), s.order));
}

void moment_factorization() {
  const auto s2 = sweep_moment(mono(1, 0), PhasePoint{1.0, 0.0}, 2);
  double worst = 0.0;
  for (const auto& p : s2.points) worst = std::max(worst, std::abs(p.value.real() - (1 + p.hbar / 4)));
  const auto s3 = sweep_moment(mono(1, 0) + mono(0, 1), PhasePoint{1.0, 1.0}, 3);
  const double d3 = std::abs(s3.limit0.real() - 8.0);
  report(3, "moment factorization", worst <= 1e-8 && d3 <= 1e-5,
         fmt("max |<x^2> - (1 + hbar/4)| = %.2e; (x+p)^3 limit %.10f (|d| %.1e)", worst, s3.limit0.real(), d3));
}

void chain_spectrum_check() {
  bool ok = true;
  double worst_prod = 0.0, worst_res = 0.0;
  for (int n = 2; n <= 12; ++n) {
    const auto s = chain_spectrum(n);
    const double rel = std::abs(s.nonzero_product() - Complex(n * n)) / (n * n);
    const double res = s.max_residual(ChainMatrix(n));
    worst_prod = std::max(worst_prod, rel);
    worst_res = std::max(worst_res, res);
    ok = ok && s.zero_count() == 2 && rel <= 1e-9 && res <= 1e-12;
  }
  report(4, "chain spectrum", ok,
         fmt("n = 2..12: two zeros each, max rel |prod - n^2| %.2e, max eigvec residual %.2e", worst_prod, worst_res));
}

void kernel_normalization() {
  double worst = 0.0, worst_ratio = 0.0;
  const auto one = [](const std::vector<double>&) { return 1.0; };
  for (int n : {2, 3}) {
    const int order = n == 2 ? 60 : 30;
    for (double hbar : {0.5, 0.1}) {
      worst = std::max(worst, std::abs(oracle::chain_integral(n, 0.4, -0.7, hbar, one, order) - 1.0));
    }
    // Second moment of the first free point about the base point.
    const auto second = [&](double hbar) {
      return oracle::chain_integral(
                 n, 0.4, -0.7, hbar,
                 [](const std::vector<double>& u) {
                   return (u[2] - u[0]) * (u[2] - u[0]) + (u[3] - u[1]) * (u[3] - u[1]);
                 },
                 order)
          .real();
    };
    worst_ratio = std::max(worst_ratio, std::abs(second(0.2) / second(0.1) - 2.0));
  }
  report(5, "kernel normalization / delta limit", worst <= 1e-8 && worst_ratio <= 1e-6,
         fmt("max |int G - 1| = %.2e; max |M2(h)/M2(h/2) - 2| = %.2e", worst, worst_ratio));
}

void path_equivalence() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0.0;
  int cases = 0;
  for (int degree = 0; degree <= 3; ++degree) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto a = random_poly(rng, degree);
      const PhasePoint pt{u(rng), u(rng)};
      for (double hbar : {0.05, 0.2, 0.5, 1.0}) {
        for (int n : {2, 3}) {
          const double analytic = analytic_moment(a, pt, hbar, n);
          LiftConfig cfg;
          cfg.hbar = hbar;
          const PhasePoint probe[] = {pt};
          cfg.dim = experiment_dim(probe, a.degree(), n - 1, cfg);
          const double fock = quantum_moment(lift_point(pt, cfg), lift_observable(a, cfg), n - 1);
          worst = std::max(worst, std::abs(analytic - fock) / std::max(1.0, std::abs(fock)));
          ++cases;
        }
      }
    }
  }
  report(6, "path equivalence", worst <= 1e-8,
         fmt("%.0f cases, max rel |analytic - Fock| = %.2e (tol 1e-8)", cases, worst));
}

void commutator_vanishing() {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> deg(1, 3);
  double worst_limit = 0.0, worst_re = 0.0, min_order = 1e9;
  bool all_defined = true;
  std::string orders = " fitted orders", local = "; finest-pair local orders";
  for (int pair = 0; pair < 5; ++pair) {
    const auto a1 = random_poly(rng, deg(rng));
    const auto a2 = random_poly(rng, deg(rng));
    const PhasePoint pt{u(rng), u(rng)};
    const auto c = sweep_commutator(a1, a2, pt);
    worst_limit = std::max(worst_limit, std::abs(c.zero_check.limit0));
    worst_re = std::max(worst_re, c.max_real_part);
    all_defined = all_defined && c.zero_check.order_defined;
    if (c.zero_check.order_defined) min_order = std::min(min_order, c.zero_check.order);
    orders += c.zero_check.order_defined ? fmt(" %.4f", c.zero_check.order) : std::string(" undefined");
    local += fmt(" %.4f", c.zero_check.local_order);
  }
  // Order tolerance borrowed from the expectation-limit criterion.
  const bool ok = worst_limit <= 1e-8 && worst_re <= 1e-10 && all_defined && min_order >= 1.0 - 0.05;
  report(7, "commutator vanishing", ok,
         fmt("max |limit| %.2e, max |Re| %.2e;", worst_limit, worst_re) + orders + local);
}

double measured_kappa = 0.0;

void bracket_proportionality() {
  const std::vector<std::pair<Polynomial, Polynomial>> pairs = {
      {mono(1, 0), mono(0, 1)},
      {mono(2, 0), mono(0, 1)},
      {mono(1, 0), mono(0, 2)},
      {mono(1, 1), mono(1, 0) + mono(0, 1)},
  };
  std::vector<double> kappas;
  for (const PhasePoint pt : {PhasePoint{0.7, -0.3}, PhasePoint{1.3, 0.9}}) {
    for (const auto& [a1, a2] : pairs) {
      const auto c = sweep_commutator(a1, a2, pt);
      if (c.kappa) kappas.push_back(*c.kappa);
    }
  }
  double lo = 1e9, hi = -1e9;
  for (double k : kappas) {
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  measured_kappa = kappas.empty() ? 0.0 : kappas.front();
  const double spread = (hi - lo) / std::abs(measured_kappa);
  const bool ok = kappas.size() == 8 && spread <= 1e-6;
  report(8, "Poisson-bracket proportionality", ok,
         fmt("kappa = %.12f over 8 cases (rel spread %.1e); stated value 1, |measured - stated| = %.6f", measured_kappa,
             spread, std::abs(measured_kappa - 1.0)));
}

void heat_kernel() {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1, 1), h(0.2, 1.0);
  double worst = 0.0, worst_stated = 0.0, min_decay = 1e9, max_decay = 0.0;
  for (int t = 0; t < 20; ++t) {
    ChainKernelSample s;
    s.hbar = h(rng);
    s.base = {u(rng), u(rng)};
    for (int i = 0; i < 2; ++i) {
      s.free.push_back({s.base.x + 0.5 * std::sqrt(s.hbar) * u(rng), s.base.p + 0.5 * std::sqrt(s.hbar) * u(rng)});
    }
    const double g = std::abs(chain_kernel(s));
    worst = std::max(worst, heat_kernel_residual(s) / g);
    HeatKernelOptions stated;
    stated.coupling = HeatCoupling::kStated;
    worst_stated = std::max(worst_stated, heat_kernel_residual(s, stated) / g);
    // Steps large enough for truncation error to dominate round-off.
    HeatKernelOptions coarse, fine;
    coarse.step_scale = 100;
    fine.step_scale = 50;
    const double ratio = heat_kernel_residual(s, coarse) / heat_kernel_residual(s, fine);
    min_decay = std::min(min_decay, ratio);
    max_decay = std::max(max_decay, ratio);
  }
  const bool ok = worst <= 1e-5 && min_decay >= 3.0 && max_decay <= 5.0;
  report(9, "heat-kernel identity", ok,
         fmt("max residual/|G| %.2e; step-halving ratio in [%.3f, %.3f]; stated coupling residual/|G| %.2e", worst,
             min_decay, max_decay, worst_stated));
}

void entropy_limit() {
  const auto p1 = ClassicalDistribution::gaussian({0, 0}, 1.0);
  const auto p2 = ClassicalDistribution::gaussian({0, 0}, 2.0);
  const auto sweep = entropy_limit_sweep(p1, p2, {0.1, 0.05, 0.02, 0.01});
  const bool have = sweep.reports.size() == 4;
  const double kl = have ? sweep.reports.back().kl_classical : 0.0;
  const double gap = have ? sweep.reports.back().gap : 1.0;
  const bool ok = have && std::abs(kl - 0.636294) <= 1e-6 && gap <= 0.02 && sweep.gaps_decreasing();
  std::string gaps;
  for (const auto& r : sweep.reports) gaps += fmt(" %.3e", r.gap);
  report(10, "entropy limit", ok,
         fmt("KL %.6f, S(hbar=0.01) %.6f, gap %.2e; gaps", kl, have ? sweep.reports.back().s_quantum : 0.0, gap) +
             gaps);
}

void eom_correspondence() {
  const auto e = eom_check(mono(1, 0), mono(2, 0, 0.5) + mono(0, 2, 0.5), PhasePoint{1.0, 2.0});
  const double k = e.kappa.value_or(0.0);
  const double rel = std::abs(k - measured_kappa) / std::abs(measured_kappa);
  const bool ok = std::abs(e.classical_rhs - 2.0) <= 1e-12 && rel <= 1e-6;
  report(11, "EOM correspondence", ok,
         fmt("classical RHS %.6f, quantum limit %.12f, ratio %.12f (criterion-8 kappa %.12f)", e.classical_rhs,
             e.quantum_rhs.limit0.real(), k, measured_kappa));
}

void mixed_state_limit() {
  const ClassicalDistribution mix({{0.35, {0.6, -0.4}, 0.5}, {0.65, {-0.3, 0.8}, 0.8}});
  const auto a = mono(2, 0) + mono(0, 1);
  const auto s = sweep_expectation(a, mix);
  const double ref = classical_expectation(a, mix);
  const double d = std::abs(s.limit0.real() - ref);
  report(12, "mixed-state limit", d <= 1e-5, fmt("limit %.12f, classical %.12f, |d| %.2e", s.limit0.real(), ref, d));
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--expect-red") == 0) expected_red.insert(std::atoi(argv[++i]));
  }
  identity_resolution();
  expectation_limit();
  moment_factorization();
  chain_spectrum_check();
  kernel_normalization();
  path_equivalence();
  commutator_vanishing();
  bracket_proportionality();
  heat_kernel();
  entropy_limit();
  eom_correspondence();
  mixed_state_limit();
  std::printf("%d of 12 criteria passed", 12 - failures);
  if (failures > unexpected) std::printf(" (%d known red, see README)", failures - unexpected);
  std::printf("\n");
  return unexpected == 0 ? 0 : 1;
}
