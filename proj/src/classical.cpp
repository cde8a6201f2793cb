#include "cqc/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cqc/errors.hpp"
#include "cqc/quadrature.hpp"

namespace cqc {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(Terms terms) {
  for (const auto& [e, c] : terms) {
    if (e.first < 0 || e.second < 0) throw MalformedObservable("negative exponent");
    add_term(e.first, e.second, c);
  }
}

Polynomial Polynomial::constant(double c) { return monomial(0, 0, c); }

Polynomial Polynomial::monomial(int i, int j, double c) {
  Polynomial out;
  out.add_term(i, j, c);
  return out;
}

void Polynomial::add_term(int i, int j, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(Exponents{i, j}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
  return d;
}

int Polynomial::degree_x() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first);
  return d;
}

int Polynomial::degree_p() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.second);
  return d;
}

double Polynomial::coefficient(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::operator()(double x, double p) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    sum += c * std::pow(x, e.first) * std::pow(p, e.second);
  }
  return sum;
}

Polynomial Polynomial::d_dx() const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    if (e.first > 0) out.add_term(e.first - 1, e.second, c * e.first);
  }
  return out;
}

Polynomial Polynomial::d_dp() const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    if (e.second > 0) out.add_term(e.first, e.second - 1, c * e.second);
  }
  return out;
}

namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

Polynomial Polynomial::translated(double dx, double dp) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    const auto [i, j] = e;
    for (int a = 0; a <= i; ++a) {
      const double cx = binomial(i, a) * std::pow(dx, i - a);
      if (cx == 0.0) continue;
      for (int b = 0; b <= j; ++b) {
        const double cp = binomial(j, b) * std::pow(dp, j - b);
        out.add_term(a, b, c * cx * cp);
      }
    }
  }
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e.first, e.second, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial out;
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      out.add_term(e1.first + e2.first, e1.second + e2.second, c1 * c2);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) out.add_term(e.first, e.second, c * s);
  return out;
}

Polynomial Polynomial::pow(int n) const {
  Polynomial out = constant(1.0);
  for (int k = 0; k < n; ++k) out = out * *this;
  return out;
}

// ---------------------------------------------------------------------------
// ClassicalObservable

ClassicalObservable::ClassicalObservable(Polynomial poly) : poly_(std::move(poly)) {}

ClassicalObservable::ClassicalObservable(Evaluator evaluator)
    : evaluator_(std::move(evaluator)) {
  if (!evaluator_) throw MalformedObservable("observable has neither polynomial nor evaluator");
}

ClassicalObservable::ClassicalObservable(Polynomial poly, Evaluator evaluator)
    : poly_(std::move(poly)), evaluator_(std::move(evaluator)) {
  if (!evaluator_) return;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const double x = u(rng), p = u(rng);
    const double a = (*poly_)(x, p), b = evaluator_(x, p);
    if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
      throw MalformedObservable("polynomial and evaluator disagree");
    }
  }
}

const Polynomial& ClassicalObservable::polynomial() const {
  if (!poly_) throw MalformedObservable("observable has no polynomial form");
  return *poly_;
}

double ClassicalObservable::operator()(double x, double p) const {
  if (poly_) return (*poly_)(x, p);
  if (evaluator_) return evaluator_(x, p);
  throw MalformedObservable("observable has neither polynomial nor evaluator");
}

ClassicalObservable ClassicalObservable::translated(double dx, double dp) const {
  if (poly_) return ClassicalObservable(poly_->translated(dx, dp));
  if (!evaluator_) throw MalformedObservable("observable has neither polynomial nor evaluator");
  auto f = evaluator_;
  return ClassicalObservable(Evaluator([f, dx, dp](double x, double p) { return f(x + dx, p + dp); }));
}

// ---------------------------------------------------------------------------
// ClassicalDistribution

ClassicalDistribution::ClassicalDistribution(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw Error("distribution needs at least one component");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0)) throw Error("component weights must be positive");
    if (!(c.sigma >= 0.0) || !std::isfinite(c.sigma)) throw Error("component sigma must be >= 0");
    if (!std::isfinite(c.mean.x) || !std::isfinite(c.mean.p)) throw Error("non-finite mean");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error("component weights must sum to 1");
}

ClassicalDistribution ClassicalDistribution::point(PhasePoint pt) {
  return ClassicalDistribution({{1.0, pt, 0.0}});
}

ClassicalDistribution ClassicalDistribution::gaussian(PhasePoint mean, double sigma) {
  return ClassicalDistribution({{1.0, mean, sigma}});
}

bool ClassicalDistribution::has_point_mass() const {
  return std::any_of(components_.begin(), components_.end(),
                     [](const GaussianComponent& c) { return c.sigma == 0.0; });
}

double ClassicalDistribution::max_sigma() const {
  double s = 0.0;
  for (const auto& c : components_) s = std::max(s, c.sigma);
  return s;
}

double ClassicalDistribution::log_density(double x, double p) const {
  if (has_point_mass()) throw DivergenceError("density of a point mass is unbounded");
  // log-sum-exp over components.
  std::vector<double> logs;
  logs.reserve(components_.size());
  double mx = -std::numeric_limits<double>::infinity();
  for (const auto& c : components_) {
    const double s2 = c.sigma * c.sigma;
    const double dx = x - c.mean.x, dp = p - c.mean.p;
    const double l = std::log(c.weight) - std::log(2.0 * std::numbers::pi * s2) -
                     (dx * dx + dp * dp) / (2.0 * s2);
    logs.push_back(l);
    mx = std::max(mx, l);
  }
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - mx);
  return mx + std::log(sum);
}

double ClassicalDistribution::density(double x, double p) const {
  return std::exp(log_density(x, p));
}

// ---------------------------------------------------------------------------
// Operations

double eval_observable(const ClassicalObservable& a, const PhasePoint& pt) { return a(pt.x, pt.p); }

namespace {

double component_expectation(const std::function<double(double, double)>& f,
                             const GaussianComponent& c, int order) {
  const auto rx = gaussian_rule(order, c.mean.x, c.sigma);
  const auto rp = gaussian_rule(order, c.mean.p, c.sigma);
  double sum = 0.0;
  for (int i = 0; i < order; ++i) {
    double row = 0.0;
    for (int j = 0; j < order; ++j) row += rp.weights[j] * f(rx.nodes[i], rp.nodes[j]);
    sum += rx.weights[i] * row;
  }
  return sum;
}

// Doubling rule: stop once successive orders agree to rel_tol.
double adaptive_expectation(const std::function<double(double, double)>& f,
                            const GaussianComponent& c, const ExpectationOptions& opts) {
  int order = 8;
  double prev = component_expectation(f, c, order);
  while (true) {
    const int next_order = std::min(2 * order, opts.max_order);
    const double next = component_expectation(f, c, next_order);
    const double diff = std::abs(next - prev);
    if (diff <= opts.rel_tol * std::max(std::abs(next), 1e-300) || diff == 0.0) return next;
    if (next_order == opts.max_order) {
      throw AccuracyError("Gauss-Hermite expectation did not converge",
                          diff / std::max(std::abs(next), 1e-300));
    }
    order = next_order;
    prev = next;
  }
}

}  // namespace

double classical_expectation(const ClassicalObservable& a, const ClassicalDistribution& dist,
                             const ExpectationOptions& opts) {
  const auto f = [&a](double x, double p) { return a(x, p); };
  double total = 0.0;
  for (const auto& c : dist.components()) {
    double e = 0.0;
    if (c.sigma == 0.0) {
      e = a(c.mean.x, c.mean.p);
    } else if (a.has_polynomial()) {
      // Order g integrates degree <= 2g-1 exactly.
      const int order = std::max(1, (a.degree() + 2) / 2);
      e = component_expectation(f, c, order);
    } else {
      e = adaptive_expectation(f, c, opts);
    }
    total += c.weight * e;
  }
  return total;
}

Polynomial poisson_bracket(const Polynomial& a1, const Polynomial& a2) {
  return a1.d_dx() * a2.d_dp() - a1.d_dp() * a2.d_dx();
}

namespace {

struct Gradient {
  double dx;
  double dp;
};

Gradient gradient(const ClassicalObservable& a, const PhasePoint& pt) {
  if (a.has_polynomial()) {
    const auto& poly = a.polynomial();
    return {poly.d_dx()(pt), poly.d_dp()(pt)};
  }
  const double hx = std::max(1e-5, 1e-7 * std::abs(pt.x));
  const double hp = std::max(1e-5, 1e-7 * std::abs(pt.p));
  return {(a(pt.x + hx, pt.p) - a(pt.x - hx, pt.p)) / (2.0 * hx),
          (a(pt.x, pt.p + hp) - a(pt.x, pt.p - hp)) / (2.0 * hp)};
}

}  // namespace

double poisson_bracket(const ClassicalObservable& a1, const ClassicalObservable& a2,
                       const PhasePoint& pt) {
  const auto g1 = gradient(a1, pt);
  const auto g2 = gradient(a2, pt);
  return g1.dx * g2.dp - g1.dp * g2.dx;
}

double kl_divergence_quadrature(const ClassicalDistribution& p1, const ClassicalDistribution& p2,
                                const ExpectationOptions& opts) {
  if (p2.has_point_mass()) throw DivergenceError("reference distribution has a point mass");
  if (p1.has_point_mass()) throw DivergenceError("point mass has unbounded log-density");
  const auto integrand = [&](double x, double p) {
    return p1.log_density(x, p) - p2.log_density(x, p);
  };
  double total = 0.0;
  for (const auto& c : p1.components()) total += c.weight * adaptive_expectation(integrand, c, opts);
  return total;
}

double kl_divergence(const ClassicalDistribution& p1, const ClassicalDistribution& p2,
                     const ExpectationOptions& opts) {
  if (p2.has_point_mass()) throw DivergenceError("reference distribution has a point mass");
  if (p1.has_point_mass()) throw DivergenceError("point mass has unbounded log-density");
  if (p1.components().size() == 1 && p2.components().size() == 1) {
    const auto& a = p1.components().front();
    const auto& b = p2.components().front();
    const double r = a.sigma * a.sigma / (b.sigma * b.sigma);
    const double dx = a.mean.x - b.mean.x, dp = a.mean.p - b.mean.p;
    // Two independent axes, each contributing the 1-D Gaussian KL.
    return -std::log(r) + r - 1.0 + (dx * dx + dp * dp) / (2.0 * b.sigma * b.sigma);
  }
  return kl_divergence_quadrature(p1, p2, opts);
}

}  // namespace cqc
