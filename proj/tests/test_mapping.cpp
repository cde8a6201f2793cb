#include <doctest.h>

#include <cmath>
#include <random>

#include "cqc/errors.hpp"
#include "cqc/mapping.hpp"
#include "oracles.hpp"

using namespace cqc;

namespace {

LiftConfig config(double hbar, std::size_t dim = 0) {
  LiftConfig c;
  c.hbar = hbar;
  c.dim = dim;
  return c;
}

struct RandomPoly {
  Polynomial poly;
  std::vector<std::tuple<int, int, double>> terms;
};

RandomPoly random_poly(std::mt19937& rng, int max_degree) {
  std::uniform_real_distribution<double> c(-2, 2);
  std::uniform_int_distribution<int> e(0, max_degree);
  RandomPoly out;
  for (int t = 0; t < 4; ++t) {
    const int i = e(rng);
    const int j = std::uniform_int_distribution<int>(0, max_degree - i)(rng);
    const double v = c(rng);
    out.poly = out.poly + Polynomial::monomial(i, j, v);
    out.terms.emplace_back(i, j, v);
  }
  return out;
}

}  // namespace

TEST_CASE("lifted identity resolves the identity") {
  for (double hbar : {1.0, 0.25, 0.05}) {
    auto cfg = config(hbar);
    const PhasePoint probe[] = {{0.7, -0.3}};
    cfg.dim = experiment_dim(probe, 0, 1, cfg);
    const auto one = lift_observable(Polynomial::constant(1.0), cfg).to_dense();
    const auto dim = static_cast<Eigen::Index>(cfg.dim);
    CHECK((one - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("lift of x has the ladder structure") {
  const double hbar = 0.3;
  const auto x = lift_observable(Polynomial::monomial(1, 0), config(hbar, 10));
  for (std::size_t m = 0; m + 1 < 10; ++m) {
    CHECK(std::abs(x(m, m + 1) - std::sqrt(hbar) * std::sqrt(m + 1.0) / 2.0) < 1e-13);
    CHECK(std::abs(x(m, m)) < 1e-13);
  }
}

TEST_CASE("lifts match anti-normal operator algebra") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rp = random_poly(rng, 4);
    const double hbar = 0.2 + 0.2 * trial;
    const int dim = 12;
    const auto lifted = lift_observable(rp.poly, config(hbar, dim)).to_dense();
    const auto ref = oracle::antinormal_lift(rp.terms, hbar, dim, 8);
    CHECK((lifted - ref).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("commutator of x and p is i hbar / 2") {
  const double hbar = 0.4;
  const auto cfg = config(hbar, 16);
  const auto x = lift_observable(Polynomial::monomial(1, 0), cfg).to_dense();
  const auto p = lift_observable(Polynomial::monomial(0, 1), cfg).to_dense();
  const Eigen::MatrixXcd c = x * p - p * x;
  // The last row/column see the truncation edge.
  const Eigen::MatrixXcd trusted = c.topLeftCorner(15, 15);
  CHECK((trusted - Complex(0, hbar / 2) * Eigen::MatrixXcd::Identity(15, 15)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("coherent expectations match the Husimi oracle") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rp = random_poly(rng, 4);
    const PhasePoint pt{u(rng), u(rng)};
    const double hbar = 0.05 + 0.1 * trial;
    auto cfg = config(hbar);
    const PhasePoint probe[] = {pt};
    cfg.dim = experiment_dim(probe, rp.poly.degree(), 1, cfg);
    const double v = quantum_expectation(lift_point(pt, cfg), lift_observable(rp.poly, cfg));
    const double ref = oracle::coherent_expectation([&](double x, double p) { return rp.poly(x, p); }, pt.x, pt.p,
                                                    hbar, 20);
    CHECK(v == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
  }
  // <lift x^2> = x0^2 + hbar/2 at a coherent state.
  auto cfg = config(0.1);
  const PhasePoint probe[] = {{0.7, -0.3}};
  cfg.dim = experiment_dim(probe, 2, 1, cfg);
  const double v = quantum_expectation(lift_point({0.7, -0.3}, cfg), lift_observable(Polynomial::monomial(2, 0), cfg));
  CHECK(v == doctest::Approx(0.49 + 0.05).epsilon(1e-11));
}

TEST_CASE("black-box lift converges to the polynomial lift") {
  const auto cfg = config(0.5, 10);
  const auto poly = Polynomial::monomial(2, 1, 1.5) + Polynomial::monomial(0, 2);
  const ClassicalObservable bb([&](double x, double p) { return poly(x, p); });
  const auto a = lift_observable(poly, cfg).to_dense();
  const auto b = lift_observable(bb, cfg).to_dense();
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("centred Gaussian lifts to the thermal law") {
  const double s = 0.5;
  // The second value needs a few hundred Fock states.
  for (double hbar : {0.25, 0.04}) {
  const double nbar = 2 * s * s / hbar;
  const auto dist = ClassicalDistribution::gaussian({0, 0}, s);
  const auto diag = lift_distribution(dist, config(hbar));
  REQUIRE(diag.op.is_diagonal());
  const auto& d = diag.op.diagonal_values();
  for (Eigen::Index n = 0; n < d.size(); ++n) {
    CHECK(d(n) == doctest::Approx(std::pow(nbar / (1 + nbar), n) / (1 + nbar)).epsilon(1e-6).scale(1e-300));
  }
  // Dense path agrees.
  auto dense_cfg = config(hbar);
  dense_cfg.allow_diagonal = false;
  dense_cfg.dim = diag.dim();
  const auto dense = lift_distribution(dist, dense_cfg);
  REQUIRE_FALSE(dense.op.is_diagonal());
  const Eigen::MatrixXcd dd = dense.op.to_dense();
  for (Eigen::Index n = 0; n < d.size(); ++n) {
    CHECK(std::abs(dd(n, n) - d(n)) < 1e-10);
  }
  CHECK((dd - Eigen::MatrixXcd(d.cast<Complex>().asDiagonal())).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(diag.trace_defect < 1e-12);
  }
}

TEST_CASE("mixture lift reproduces smeared expectations") {
  const double hbar = 0.3;
  const ClassicalDistribution mix({{0.4, {0.5, -0.2}, 0.3}, {0.6, {-0.3, 0.4}, 0.0}});
  auto cfg = config(hbar);
  const auto rho = lift_distribution(mix, cfg);
  cfg.dim = rho.dim();
  const auto a = Polynomial::monomial(2, 0) + Polynomial::monomial(0, 1) + Polynomial::monomial(1, 1, 0.5);
  const double v = quantum_expectation(rho, lift_observable(a, cfg));
  // P smeared by the Husimi width hbar/2 per axis.
  double ref = 0.0;
  for (const auto& c : mix.components()) {
    ref += c.weight * oracle::gaussian_average([&](double x, double p) { return a(x, p); }, c.mean.x, c.mean.p,
                                               std::sqrt(c.sigma * c.sigma + hbar / 2), 10);
  }
  CHECK(v == doctest::Approx(ref).epsilon(1e-9));
  const auto dense = rho.op.to_dense();
  CHECK(dense.trace().real() == doctest::Approx(1.0 - rho.trace_defect).epsilon(1e-12));
  CHECK(hermitian_eig(rho.op).values.minCoeff() > -1e-12);
}

TEST_CASE("truncation errors and preconditions") {
  LiftConfig cfg = config(0.01);
  cfg.policy.dim_cap = 16;
  cfg.allow_diagonal = false;
  CHECK_THROWS_AS(lift_distribution(ClassicalDistribution::gaussian({1, 1}, 0.5), cfg), TruncationError);
  const PhasePoint far[] = {{3, 3}};
  CHECK_THROWS_AS(experiment_dim(far, 2, 1, cfg), TruncationError);
  CHECK_THROWS(lift_observable(Polynomial::monomial(1, 0), config(0.5, 0)));
  CHECK(exact_lift_order(2, 10) * 2 - 1 >= 2 + 2 * 9);
}
