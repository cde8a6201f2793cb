#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace cqc {

// A point (x, p) of the classical phase space, in dimensional units.
struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

// Sparse polynomial sum_{ij} c_ij x^i p^j. Zero coefficients are dropped.
class Polynomial {
 public:
  using Exponents = std::pair<int, int>;
  using Terms = std::map<Exponents, double>;

  Polynomial() = default;
  explicit Polynomial(Terms terms);

  static Polynomial constant(double c);
  static Polynomial monomial(int i, int j, double c = 1.0);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  // Highest power of x (resp. p) over all terms.
  int degree_x() const;
  int degree_p() const;
  double coefficient(int i, int j) const;

  double operator()(double x, double p) const;
  double operator()(const PhasePoint& pt) const { return (*this)(pt.x, pt.p); }

  Polynomial d_dx() const;
  Polynomial d_dp() const;
  // A(x + dx, p + dp) expanded back into monomials.
  Polynomial translated(double dx, double dp) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial pow(int n) const;

  bool operator==(const Polynomial& o) const = default;

 private:
  void add_term(int i, int j, double c);
  Terms terms_;
};

// A real classical observable A(x, p): a polynomial, a black-box
// evaluator, or both (in which case they must agree).
class ClassicalObservable {
 public:
  using Evaluator = std::function<double(double, double)>;

  ClassicalObservable() = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  ClassicalObservable(Polynomial poly);
  explicit ClassicalObservable(Evaluator evaluator);
  // Throws MalformedObservable if the two disagree at 100 sample points.
  ClassicalObservable(Polynomial poly, Evaluator evaluator);

  bool has_polynomial() const { return poly_.has_value(); }
  bool has_evaluator() const { return static_cast<bool>(evaluator_); }
  const Polynomial& polynomial() const;
  // -1 for black-box observables.
  int degree() const { return poly_ ? poly_->degree() : -1; }

  double operator()(double x, double p) const;

  ClassicalObservable translated(double dx, double dp) const;

 private:
  std::optional<Polynomial> poly_;
  Evaluator evaluator_;
};

struct GaussianComponent {
  double weight = 1.0;
  PhasePoint mean;
  // Isotropic per-axis standard deviation; 0 encodes a point mass.
  double sigma = 0.0;
};

// Mixture of isotropic Gaussians and point masses over phase space.
class ClassicalDistribution {
 public:
  explicit ClassicalDistribution(std::vector<GaussianComponent> components);

  static ClassicalDistribution point(PhasePoint pt);
  static ClassicalDistribution gaussian(PhasePoint mean, double sigma);

  const std::vector<GaussianComponent>& components() const { return components_; }
  bool has_point_mass() const;
  double max_sigma() const;
  // Density at (x, p); throws if any component is a point mass.
  double density(double x, double p) const;
  double log_density(double x, double p) const;

 private:
  std::vector<GaussianComponent> components_;
};

double eval_observable(const ClassicalObservable& a, const PhasePoint& pt);

// Tolerance/cap for the doubling Gauss–Hermite rule used on black boxes.
struct ExpectationOptions {
  double rel_tol = 1e-10;
  int max_order = 256;
};

double classical_expectation(const ClassicalObservable& a, const ClassicalDistribution& dist,
                             const ExpectationOptions& opts = {});

// {A1, A2} = dA1/dx dA2/dp - dA1/dp dA2/dx.
double poisson_bracket(const ClassicalObservable& a1, const ClassicalObservable& a2,
                       const PhasePoint& pt);
Polynomial poisson_bracket(const Polynomial& a1, const Polynomial& a2);

// K(P1|P2) by quadrature over P1. Closed form for single-Gaussian pairs.
double kl_divergence(const ClassicalDistribution& p1, const ClassicalDistribution& p2,
                     const ExpectationOptions& opts = {});
double kl_divergence_quadrature(const ClassicalDistribution& p1,
                                const ClassicalDistribution& p2,
                                const ExpectationOptions& opts = {});

}  // namespace cqc
