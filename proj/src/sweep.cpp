#include "cqc/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cqc/errors.hpp"
#include "cqc/mapping.hpp"
#include "cqc/quadrature.hpp"

namespace cqc {

HbarSchedule HbarSchedule::geometric(double start, double ratio, int count) {
  if (!(start > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 1) {
    throw ConfigError("geometric schedule needs start > 0, 0 < ratio < 1, count >= 1");
  }
  HbarSchedule s;
  double h = start;
  for (int i = 0; i < count; ++i, h *= ratio) s.values.push_back(h);
  return s;
}

void HbarSchedule::validate() const {
  if (values.empty()) throw ConfigError("empty hbar schedule");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) throw ConfigError("hbar values must be positive");
    if (i > 0 && !(values[i] < values[i - 1])) throw ConfigError("hbar schedule must be strictly decreasing");
  }
}

// ---------------------------------------------------------------------------
// Extrapolation

namespace {

struct Fit {
  double c0, c1, residual;
};

Fit poly_fit(const std::vector<double>& h, const std::vector<double>& v, int degree) {
  const auto n = static_cast<Eigen::Index>(h.size());
  const int deg = std::min<int>(degree, static_cast<int>(n) - 1);
  const double scale = *std::max_element(h.begin(), h.end());
  Eigen::MatrixXd a(n, deg + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double t = 1.0;
    for (int j = 0; j <= deg; ++j, t *= h[static_cast<std::size_t>(i)] / scale) a(i, j) = t;
    b(i) = v[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  const double rms = n > 0 ? std::sqrt((a * c - b).squaredNorm() / static_cast<double>(n)) : 0.0;
  return {c(0), deg >= 1 ? c(1) / scale : 0.0, rms};
}

}  // namespace

SweepSeries make_series(std::vector<SeriesPoint> points, int fit_degree) {
  if (points.empty()) throw Error("empty series");
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.hbar > b.hbar; });
  SweepSeries s;
  s.points = std::move(points);
  std::vector<double> h, re, im;
  for (const auto& p : s.points) {
    h.push_back(p.hbar);
    re.push_back(p.value.real());
    im.push_back(p.value.imag());
  }
  const Fit fr = poly_fit(h, re, fit_degree);
  const Fit fi = poly_fit(h, im, fit_degree);
  s.limit0 = {fr.c0, fi.c0};
  s.slope0 = {fr.c1, fi.c1};
  s.residual = std::hypot(fr.residual, fi.residual);
  if (s.points.size() >= 2) {
    const auto& a = s.points[s.points.size() - 2];
    const auto& b = s.points.back();
    s.richardson = (a.hbar * b.value - b.hbar * a.value) / (a.hbar - b.hbar);
  } else {
    s.richardson = s.points.back().value;
  }
  const auto est = estimate_order(s);
  s.order = est.order;
  s.order_residual = est.residual;
  s.order_defined = est.defined;
  s.local_order = std::numeric_limits<double>::quiet_NaN();
  if (s.points.size() >= 2) {
    const auto& a = s.points[s.points.size() - 2];
    const auto& b = s.points.back();
    const double floor = 1e-13 * std::max(1.0, std::abs(s.limit0));
    const double ea = std::abs(a.value - s.limit0), eb = std::abs(b.value - s.limit0);
    if (ea > floor && eb > floor) s.local_order = std::log(ea / eb) / std::log(a.hbar / b.hbar);
  }
  return s;
}

OrderEstimate estimate_order(const SweepSeries& series) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  const auto& pts = series.points;
  if (pts.size() < 4) return {kNaN, kNaN, false};
  std::vector<double> lx, ly;
  double prev = std::numeric_limits<double>::infinity();
  const double floor = 1e-13 * std::max(1.0, std::abs(series.limit0));
  for (const auto& p : pts) {
    const double e = std::abs(p.value - series.limit0);
    // Errors at round-off level or growing as hbar shrinks leave the order undefined.
    if (!(e > floor) || !(e < prev)) return {kNaN, kNaN, false};
    prev = e;
    lx.push_back(std::log(p.hbar));
    ly.push_back(std::log(e));
  }
  const auto n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  double rss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (my + slope * (lx[i] - mx));
    rss += r * r;
  }
  return {slope, std::sqrt(rss / n), true};
}

int series_fit_degree(int hbar_degree, std::size_t points) {
  const int deg = hbar_degree < 0 ? 2 : std::max(1, hbar_degree);
  return std::max(0, std::min<int>(deg, static_cast<int>(points) - 2));
}

// ---------------------------------------------------------------------------
// Fock-path evaluations

namespace {

LiftConfig lift_config(double hbar, const SweepOptions& opts) {
  LiftConfig cfg;
  cfg.hbar = hbar;
  cfg.lambda = opts.lambda;
  cfg.policy = opts.policy;
  return cfg;
}

// Guard rows for black boxes, which have no declared degree.
int effective_degree(const ClassicalObservable& a) { return a.has_polynomial() ? a.degree() : 8; }

struct Frame {
  PhasePoint state;  // where the coherent state sits after recentering
  PhasePoint shift;  // observables are evaluated at (x + shift.x, p + shift.p)
};

Frame frame_for(const PhasePoint& pt, const SweepOptions& opts) {
  if (opts.recenter) return {{0.0, 0.0}, pt};
  return {pt, {0.0, 0.0}};
}

}  // namespace

double point_moment(const ClassicalObservable& a, const PhasePoint& pt, int n, double hbar,
                    const SweepOptions& opts) {
  auto cfg = lift_config(hbar, opts);
  const Frame f = frame_for(pt, opts);
  const PhasePoint probe[] = {f.state};
  cfg.dim = experiment_dim(probe, effective_degree(a), n, cfg);
  const auto rho = lift_point(f.state, cfg);
  const auto op = lift_observable(a.translated(f.shift.x, f.shift.p), cfg);
  return quantum_moment(rho, op, n);
}

double point_expectation(const ClassicalObservable& a, const PhasePoint& pt, double hbar,
                         const SweepOptions& opts) {
  return point_moment(a, pt, 1, hbar, opts);
}

double distribution_expectation(const ClassicalObservable& a, const ClassicalDistribution& dist,
                                double hbar, const SweepOptions& opts) {
  double total = 0.0;
  for (const auto& c : dist.components()) {
    if (c.sigma == 0.0) {
      total += c.weight * point_expectation(a, c.mean, hbar, opts);
      continue;
    }
    // <A_hat>_(x,p) is a polynomial of the same degree as A in (x, p).
    const int order = a.has_polynomial() ? a.degree() / 2 + 1 : 16;
    const auto rx = gaussian_rule(order, c.mean.x, c.sigma);
    const auto rp = gaussian_rule(order, c.mean.p, c.sigma);
    double e = 0.0;
    for (int i = 0; i < order; ++i) {
      for (int j = 0; j < order; ++j) {
        e += rx.weights[i] * rp.weights[j] * point_expectation(a, {rx.nodes[i], rp.nodes[j]}, hbar, opts);
      }
    }
    total += c.weight * e;
  }
  return total;
}

Complex point_commutator(const ClassicalObservable& a1, const ClassicalObservable& a2,
                         const PhasePoint& pt, double hbar, const SweepOptions& opts) {
  auto cfg = lift_config(hbar, opts);
  const Frame f = frame_for(pt, opts);
  const PhasePoint probe[] = {f.state};
  cfg.dim = experiment_dim(probe, effective_degree(a1) + effective_degree(a2), 1, cfg);
  const auto rho = lift_point(f.state, cfg);
  const auto o1 = lift_observable(a1.translated(f.shift.x, f.shift.p), cfg);
  const auto o2 = lift_observable(a2.translated(f.shift.x, f.shift.p), cfg);
  return commutator_expectation(rho, o1, o2);
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

// hbar degree of <A_hat^n>-type data: polynomial of degree total/2.
int hbar_degree(std::initializer_list<const ClassicalObservable*> obs, int power = 1) {
  int total = 0;
  for (const auto* a : obs) {
    if (!a->has_polynomial()) return -1;
    total += a->degree();
  }
  return total * power / 2;
}

int fit_degree_for(const SweepOptions& opts, int hbar_deg) {
  return opts.fit_degree > 0 ? opts.fit_degree : series_fit_degree(hbar_deg, opts.schedule.values.size());
}

template <typename Fn>
SweepSeries run_schedule(const SweepOptions& opts, int hbar_deg, Fn value_at) {
  opts.schedule.validate();
  std::vector<SeriesPoint> pts;
  for (double h : opts.schedule.values) {
    try {
      pts.push_back({h, value_at(h)});
    } catch (Error& e) {
      e.add_context("at hbar = " + std::to_string(h));
      throw;
    }
  }
  return make_series(std::move(pts), fit_degree_for(opts, hbar_deg));
}

}  // namespace

SweepSeries sweep_expectation(const ClassicalObservable& a, const PhasePoint& pt,
                              const SweepOptions& opts) {
  return run_schedule(opts, hbar_degree({&a}), [&](double h) { return Complex(point_expectation(a, pt, h, opts)); });
}

SweepSeries sweep_expectation(const ClassicalObservable& a, const ClassicalDistribution& dist,
                              const SweepOptions& opts) {
  return run_schedule(opts, hbar_degree({&a}),
                      [&](double h) { return Complex(distribution_expectation(a, dist, h, opts)); });
}

SweepSeries sweep_moment(const ClassicalObservable& a, const PhasePoint& pt, int n,
                         const SweepOptions& opts) {
  if (n < 1) throw Error("moment order must be positive");
  return run_schedule(opts, hbar_degree({&a}, n), [&](double h) { return Complex(point_moment(a, pt, n, h, opts)); });
}

CommutatorSweep sweep_commutator(const ClassicalObservable& a1, const ClassicalObservable& a2,
                                 const PhasePoint& pt, const SweepOptions& opts) {
  opts.schedule.validate();
  std::vector<SeriesPoint> raw, slope;
  CommutatorSweep out;
  for (double h : opts.schedule.values) {
    Complex c;
    try {
      c = point_commutator(a1, a2, pt, h, opts);
    } catch (Error& e) {
      e.add_context("at hbar = " + std::to_string(h));
      throw;
    }
    out.max_real_part = std::max(out.max_real_part, std::abs(c.real()));
    raw.push_back({h, c});
    slope.push_back({h, Complex(c.imag() / h)});
  }
  const int deg = hbar_degree({&a1, &a2});
  out.zero_check = make_series(std::move(raw), fit_degree_for(opts, deg));
  out.slope_series = make_series(std::move(slope), fit_degree_for(opts, deg < 0 ? deg : deg - 1));
  out.bracket = poisson_bracket(a1, a2, pt);
  if (std::abs(out.bracket) > 1e-12) {
    out.kappa = out.slope_series.limit0.real() / out.bracket;
    out.kappa_from_derivative = out.zero_check.slope0.imag() / out.bracket;
  }
  return out;
}

EomCheck eom_check(const ClassicalObservable& a, const ClassicalObservable& h, const PhasePoint& pt,
                   const SweepOptions& opts) {
  opts.schedule.validate();
  const Complex minus_i(0.0, -1.0);
  EomCheck out;
  const int deg = hbar_degree({&a, &h});
  out.quantum_rhs = run_schedule(opts, deg < 0 ? deg : deg - 1,
                                 [&](double hb) { return minus_i * point_commutator(a, h, pt, hb, opts) / hb; });
  out.classical_rhs = poisson_bracket(a, h, pt);
  if (std::abs(out.classical_rhs) > 1e-12) out.kappa = out.quantum_rhs.limit0.real() / out.classical_rhs;
  return out;
}

}  // namespace cqc
