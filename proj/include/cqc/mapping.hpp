#pragma once

#include <cstddef>
#include <span>

#include "cqc/classical.hpp"
#include "cqc/fock.hpp"

namespace cqc {

struct LiftConfig {
  double hbar = 1.0;
  double lambda = 1.0;
  TruncationPolicy policy;
  // Gauss–Hermite order per axis for observable lifts; 0 selects the exactness rule.
  int quad_order = 0;
  // Fock dimension for lifts; 0 derives it from the state being lifted.
  std::size_t dim = 0;
  // Origin-centred isotropic ensembles may be lifted to diagonal storage.
  bool allow_diagonal = true;

  void validate() const;
  CoherentAmplitude amplitude(const PhasePoint& pt) const {
    return CoherentAmplitude::from_point(pt, hbar, lambda);
  }
};

struct DensityOperator {
  FockOperator op;
  double trace_defect = 0.0;
  bool truncation_warning = false;

  std::size_t dim() const { return op.dim(); }
};

// |alpha><alpha| for the coherent state at pt.
DensityOperator lift_point(const PhasePoint& pt, const LiftConfig& cfg);

// P-representation rho_P = int dx dp P(x,p) |alpha><alpha|.
// Throws TruncationError when the required dimension exceeds the cap.
DensityOperator lift_distribution(const ClassicalDistribution& dist, const LiftConfig& cfg);

// Dimension lift_distribution would choose for `dist`.
std::size_t distribution_dim(const ClassicalDistribution& dist, const LiftConfig& cfg);

// Per-axis Gauss–Hermite order that integrates every entry of the lift of
// a degree-`degree` polynomial exactly in a `dim`-level space.
int exact_lift_order(int degree, std::size_t dim);

// A_hat = (1/pi) int dq dk A(x(q), p(k)) |alpha><alpha| in cfg.dim levels.
FockOperator lift_observable(const ClassicalObservable& a, const LiftConfig& cfg);

// Fock dimension for an experiment probing `points` with operators of the
// given degree raised to `power`: the largest coherent cutoff plus guard rows.
std::size_t experiment_dim(std::span<const PhasePoint> points, int degree, int power,
                           const LiftConfig& cfg);

double quantum_expectation(const DensityOperator& rho, const FockOperator& op);
double quantum_moment(const DensityOperator& rho, const FockOperator& op, int n);
Complex commutator_expectation(const DensityOperator& rho, const FockOperator& o1,
                               const FockOperator& o2);

}  // namespace cqc
