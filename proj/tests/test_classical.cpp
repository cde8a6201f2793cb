#include <doctest.h>

#include <cmath>
#include <random>

#include "cqc/classical.hpp"
#include "cqc/errors.hpp"
#include "oracles.hpp"

using namespace cqc;

namespace {

Polynomial poly(std::initializer_list<std::tuple<int, int, double>> terms) {
  Polynomial out;
  for (const auto& [i, j, c] : terms) out = out + Polynomial::monomial(i, j, c);
  return out;
}

}  // namespace

TEST_CASE("polynomial arithmetic and evaluation") {
  const auto a = poly({{2, 0, 1.0}, {0, 1, 2.0}});
  CHECK(a(0.7, -0.3) == doctest::Approx(-0.11));
  CHECK(a.degree() == 2);
  CHECK(a.degree_x() == 2);
  CHECK(a.degree_p() == 1);
  CHECK((a - a).is_zero());
  const auto sq = a * a;
  CHECK(sq(1.3, 0.4) == doctest::Approx(a(1.3, 0.4) * a(1.3, 0.4)));
  CHECK(a.pow(3)(0.5, 0.5) == doctest::Approx(std::pow(a(0.5, 0.5), 3)));
  CHECK(Polynomial::monomial(1, 1, 0.0).is_zero());
}

TEST_CASE("translation and derivatives") {
  const auto a = poly({{3, 1, 2.0}, {0, 2, -1.0}, {1, 0, 0.5}});
  const auto t = a.translated(0.4, -1.1);
  for (double x : {-1.0, 0.2, 2.0}) {
    for (double p : {-0.5, 0.9}) {
      CHECK(t(x, p) == doctest::Approx(a(x + 0.4, p - 1.1)).epsilon(1e-13));
    }
  }
  CHECK(a.d_dx() == poly({{2, 1, 6.0}, {0, 0, 0.5}}));
  CHECK(a.d_dp() == poly({{3, 0, 2.0}, {0, 1, -2.0}}));
}

TEST_CASE("poisson bracket") {
  const ClassicalObservable x = Polynomial::monomial(1, 0);
  const ClassicalObservable p = Polynomial::monomial(0, 1);
  CHECK(poisson_bracket(x, p, {0.3, 0.1}) == doctest::Approx(1.0));
  CHECK(poisson_bracket(p, x, {0.3, 0.1}) == doctest::Approx(-1.0));
  // {xp, x + p} = p - x
  const ClassicalObservable xp = Polynomial::monomial(1, 1);
  const ClassicalObservable s = poly({{1, 0, 1.0}, {0, 1, 1.0}});
  CHECK(poisson_bracket(xp, s, {0.3, 1.2}) == doctest::Approx(0.9));
  // Black-box path by finite differences.
  // {x^2 p, p} = 2 x p
  const ClassicalObservable bb([](double x, double p) { return x * x * p; });
  CHECK(poisson_bracket(bb, p, {0.7, 0.2}) == doctest::Approx(0.28).epsilon(1e-7));
  CHECK(poisson_bracket(Polynomial::monomial(2, 0), Polynomial::monomial(0, 1)) == Polynomial::monomial(1, 0, 2.0));
}

TEST_CASE("combined observable must agree with its polynomial") {
  CHECK_NOTHROW(ClassicalObservable(Polynomial::monomial(2, 0), [](double x, double) { return x * x; }));
  CHECK_THROWS_AS(ClassicalObservable(Polynomial::monomial(2, 0), [](double x, double) { return x; }),
                  MalformedObservable);
}

TEST_CASE("distribution validation") {
  CHECK_THROWS(ClassicalDistribution({{0.5, {0, 0}, 1.0}}));
  CHECK_THROWS(ClassicalDistribution({{1.0, {0, 0}, -1.0}}));
  CHECK_NOTHROW(ClassicalDistribution({{0.25, {0, 0}, 1.0}, {0.75, {1, 1}, 0.0}}));
}

TEST_CASE("classical expectations against a Golub-Welsch oracle") {
  const ClassicalDistribution mix({{0.3, {0.5, -1.0}, 0.7}, {0.7, {-0.2, 0.4}, 1.3}});
  const auto a = poly({{2, 0, 1.0}, {0, 1, 1.0}, {3, 2, 0.2}});
  double ref = 0.0;
  for (const auto& c : mix.components()) {
    ref += c.weight * oracle::gaussian_average([&](double x, double p) { return a(x, p); }, c.mean.x, c.mean.p,
                                               c.sigma, 20);
  }
  CHECK(classical_expectation(a, mix) == doctest::Approx(ref).epsilon(1e-12));
  // Black box uses the doubling rule.
  const ClassicalObservable bb([](double x, double p) { return std::cos(x) * std::exp(-p * p); });
  double ref_bb = 0.0;
  for (const auto& c : mix.components()) {
    ref_bb += c.weight * oracle::gaussian_average([](double x, double p) { return std::cos(x) * std::exp(-p * p); },
                                                  c.mean.x, c.mean.p, c.sigma, 60);
  }
  CHECK(classical_expectation(bb, mix) == doctest::Approx(ref_bb).epsilon(1e-9));
  CHECK(classical_expectation(a, ClassicalDistribution::point({0.7, -0.3})) == doctest::Approx(a(0.7, -0.3)));
}

TEST_CASE("kl divergence") {
  const auto p1 = ClassicalDistribution::gaussian({0, 0}, 1.0);
  const auto p2 = ClassicalDistribution::gaussian({0, 0}, 2.0);
  CHECK(kl_divergence(p1, p2) == doctest::Approx(0.636294).epsilon(1e-6));
  CHECK(kl_divergence(p1, p2) == doctest::Approx(oracle::gaussian_kl(1.0, 2.0)).epsilon(1e-14));
  CHECK(kl_divergence(p1, p1) == doctest::Approx(0.0).scale(1.0));
  // Quadrature path agrees with the closed form.
  CHECK(kl_divergence_quadrature(p1, p2) == doctest::Approx(oracle::gaussian_kl(1.0, 2.0)).epsilon(1e-9));
  const auto shifted = ClassicalDistribution::gaussian({1.0, -0.5}, 1.5);
  CHECK(kl_divergence(p1, shifted) == doctest::Approx(oracle::gaussian_kl(1.0, 1.5, 1.25)).epsilon(1e-12));
  CHECK(kl_divergence_quadrature(p1, shifted) == doctest::Approx(oracle::gaussian_kl(1.0, 1.5, 1.25)).epsilon(1e-9));
  // Mixtures only via quadrature; still non-negative.
  const ClassicalDistribution mix({{0.5, {1, 0}, 1.0}, {0.5, {-1, 0}, 1.0}});
  CHECK(kl_divergence(mix, p2) >= 0.0);
  CHECK_THROWS_AS(kl_divergence(ClassicalDistribution::point({0, 0}), p2), DivergenceError);
  CHECK_THROWS_AS(kl_divergence(p1, ClassicalDistribution::point({0, 0})), DivergenceError);
}
