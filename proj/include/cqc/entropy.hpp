#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cqc/classical.hpp"
#include "cqc/fock.hpp"
#include "cqc/mapping.hpp"

namespace cqc {

// Dense path: rho2 eigenvalues below this count as outside its support.
// Diagonal entries are exact, so there only values below kDefaultLogFloor do.
inline constexpr double kSupportThreshold = 1e-14;
// rho1 weight on rho2's null space above this makes S infinite.
inline constexpr double kSupportMassTolerance = 1e-10;

// Tr[rho1 (log rho1 - log rho2)]. Throws DivergenceError when rho1 has
// weight outside the support of rho2.
double relative_entropy(const DensityOperator& rho1, const DensityOperator& rho2);

// -Tr[rho log rho].
double von_neumann_entropy(const DensityOperator& rho);

struct EntropyReport {
  double hbar = 0.0;
  double s_quantum = 0.0;
  double kl_classical = 0.0;
  double gap = 0.0;  // |s_quantum - kl_classical|
  std::size_t dims_used = 0;
  double tail = 0.0;     // largest trace defect of the two lifted states
  bool flagged = false;  // tail >= 1e-10
};

struct EntropySweep {
  std::vector<EntropyReport> reports;
  // Set when dim_cap stopped the schedule early; `warning` says where.
  bool truncated = false;
  std::string warning;

  bool gaps_decreasing() const;
};

EntropySweep entropy_limit_sweep(const ClassicalDistribution& p1, const ClassicalDistribution& p2,
                                 const std::vector<double>& schedule, const TruncationPolicy& policy = {},
                                 double lambda = 1.0);

}  // namespace cqc
