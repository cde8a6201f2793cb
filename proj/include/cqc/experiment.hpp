#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqc/classical.hpp"
#include "cqc/fock.hpp"

namespace cqc {

inline constexpr const char* kArtifactVersion = "1.0.0";

// One experiment, read from a single JSON document. Unknown keys are
// rejected before anything is computed.
//
//   {
//     "command": "sweep",
//     "observables": ["x^2"],
//     "state": {"point": [0.7, -0.3]}
//            | {"mixture": [{"weight": 0.5, "mean": [0, 1], "sigma": 0.5}, ...]},
//     "reference_state": {...},          // entropy only
//     "hbar_schedule": [0.5, 0.25] | {"start": 0.5, "ratio": 0.5, "count": 8},
//     "fock": {"epsilon": 1e-12, "dim_cap": 512, "diagonal_dim_cap": 262144},
//     "moment": 2, "chain_length": 3, "recenter": true, "lambda": 1.0,
//     "tolerance": 1e-6,
//     "output": {"path": "out.json", "format": "json" | "csv"}
//   }
struct ExperimentConfig {
  std::string command;
  std::vector<std::string> observables;
  std::vector<GaussianComponent> state;
  bool state_is_point = false;
  std::vector<GaussianComponent> reference_state;
  std::vector<double> hbar_schedule;
  TruncationPolicy fock;
  int moment = 1;
  int chain_length = 3;
  bool recenter = true;
  double lambda = 1.0;
  double tolerance = 0.0;  // command default when absent
  std::string output_path;
  std::string format = "json";
  nlohmann::json echo;  // validated input, written back into the result

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig parse(const std::string& text);

  ClassicalDistribution distribution() const { return ClassicalDistribution(state); }
  PhasePoint point() const;
};

std::vector<std::string> experiment_commands();
double default_tolerance(const std::string& command);

struct TableRow {
  double hbar;
  Complex value;
  double classical_ref;
};

struct ResultDocument {
  nlohmann::json body;
  std::vector<TableRow> table;
  bool passed = false;
  // 0 pass, 1 check failure, 3 numerical failure (partial results kept).
  int exit_code = 0;

  // Floats written with 17 significant digits; keys sorted.
  std::string to_json() const;
  // hbar,value_re,value_im,classical_ref,abs_gap
  std::string to_csv() const;
};

// Throws ConfigError/ParseError for invalid configs; numerical failures are
// recorded in the document instead.
ResultDocument run(const ExperimentConfig& cfg);

}  // namespace cqc
