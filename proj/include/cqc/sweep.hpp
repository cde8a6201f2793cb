#pragma once

#include <optional>
#include <vector>

#include "cqc/classical.hpp"
#include "cqc/fock.hpp"

namespace cqc {

// Strictly decreasing positive hbar values.
struct HbarSchedule {
  std::vector<double> values;

  // start * ratio^i, i = 0..count-1
  static HbarSchedule geometric(double start, double ratio, int count);
  // 0.5 * 2^-i, i = 0..7
  static HbarSchedule standard() { return geometric(0.5, 0.5, 8); }
  void validate() const;
};

struct SeriesPoint {
  double hbar;
  Complex value;
};

// Values recorded along a schedule plus their hbar -> 0 extrapolation.
struct SweepSeries {
  std::vector<SeriesPoint> points;  // descending hbar
  Complex limit0;                   // value at hbar = 0
  Complex slope0;                   // d/dhbar at hbar = 0
  Complex richardson;               // linear elimination on the two finest points
  double residual = 0.0;            // RMS residual of the polynomial fit
  double order = 0.0;               // fitted |v - limit0| ~ hbar^order; NaN if undefined
  double order_residual = 0.0;
  bool order_defined = false;
  // log(e_a / e_b) / log(h_a / h_b) on the two finest points; NaN when either
  // error is at round-off level. Diagnostic for curved (pre-asymptotic) data.
  double local_order = 0.0;
};

struct OrderEstimate {
  double order;
  double residual;
  bool defined;
};

// Least-squares polynomial in hbar of degree min(fit_degree, n - 1); fills
// limit0, slope0, residual, richardson and the order estimate.
SweepSeries make_series(std::vector<SeriesPoint> points, int fit_degree = 2);

// Log-log least squares of |v(hbar) - limit0| against hbar. Needs >= 4 points
// and strictly decreasing errors; otherwise `defined` is false.
OrderEstimate estimate_order(const SweepSeries& series);

struct SweepOptions {
  HbarSchedule schedule = HbarSchedule::standard();
  TruncationPolicy policy;
  double lambda = 1.0;
  // Translate the base point to the origin; exact for polynomial observables.
  bool recenter = true;
  // Degree of the extrapolating polynomial in hbar; 0 picks it from the
  // observables (polynomial data is exactly polynomial in hbar).
  int fit_degree = 0;
};

// Fit degree for a quantity that is a polynomial of degree `hbar_degree` in
// hbar (negative when unknown), sampled at `points` schedule values.
int series_fit_degree(int hbar_degree, std::size_t points);

// <A_hat> in the coherent state at pt, via the Fock path.
double point_expectation(const ClassicalObservable& a, const PhasePoint& pt, double hbar,
                         const SweepOptions& opts);
// Tr[rho_P A_hat] = int dx dp P(x,p) <A_hat>_(x,p).
double distribution_expectation(const ClassicalObservable& a, const ClassicalDistribution& dist,
                                double hbar, const SweepOptions& opts);
// Tr[rho A_hat^n] at a point.
double point_moment(const ClassicalObservable& a, const PhasePoint& pt, int n, double hbar,
                    const SweepOptions& opts);
Complex point_commutator(const ClassicalObservable& a1, const ClassicalObservable& a2,
                         const PhasePoint& pt, double hbar, const SweepOptions& opts);

SweepSeries sweep_expectation(const ClassicalObservable& a, const PhasePoint& pt,
                              const SweepOptions& opts = {});
SweepSeries sweep_expectation(const ClassicalObservable& a, const ClassicalDistribution& dist,
                              const SweepOptions& opts = {});
SweepSeries sweep_moment(const ClassicalObservable& a, const PhasePoint& pt, int n,
                         const SweepOptions& opts = {});

struct CommutatorSweep {
  SweepSeries zero_check;    // <[A1_hat, A2_hat]>
  SweepSeries slope_series;  // Im<[A1_hat, A2_hat]> / hbar
  double bracket = 0.0;      // {A1, A2}(pt)
  // slope_series.limit0 / bracket; empty when the bracket vanishes.
  std::optional<double> kappa;
  // Same ratio from the fitted d/dhbar of zero_check (cross-check).
  std::optional<double> kappa_from_derivative;
  double max_real_part = 0.0;
};

CommutatorSweep sweep_commutator(const ClassicalObservable& a1, const ClassicalObservable& a2,
                                 const PhasePoint& pt, const SweepOptions& opts = {});

struct EomCheck {
  SweepSeries quantum_rhs;  // -i <[A_hat, H_hat]> / hbar
  double classical_rhs = 0.0;
  std::optional<double> kappa;
};

EomCheck eom_check(const ClassicalObservable& a, const ClassicalObservable& h, const PhasePoint& pt,
                   const SweepOptions& opts = {});

}  // namespace cqc
