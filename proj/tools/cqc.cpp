// cqc <command> --config <file>
// cqc <command> --observable x^2 --point 0.7,-0.3 [--hbar-start ...]
//
// Exit codes: 0 pass, 1 check failure, 2 usage/config error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cqc/errors.hpp"
#include "cqc/experiment.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kNumericalFailure = 3;

struct Flags {
  std::string config_path;
  std::vector<std::string> observables;
  std::string point;
  double hbar_start = 0.0;
  double hbar_ratio = 0.0;
  int hbar_count = 0;
  int fock_cap = 0;
  int moment = 0;
  int chain_length = 0;
  std::string out;
  std::string format;
};

std::vector<double> parse_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw cqc::ConfigError("--point expects x,p");
  try {
    std::size_t used = 0;
    const double x = std::stod(s.substr(0, comma), &used);
    const std::string rest = s.substr(comma + 1);
    std::size_t used_p = 0;
    const double p = std::stod(rest, &used_p);
    if (used != comma || used_p != rest.size()) throw std::invalid_argument(s);
    return {x, p};
  } catch (const std::logic_error&) {
    throw cqc::ConfigError("--point expects x,p; got '" + s + "'");
  }
}

nlohmann::json build_config(const std::string& command, const Flags& f) {
  nlohmann::json j;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw cqc::ConfigError("cannot read " + f.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw cqc::ConfigError(std::string("invalid JSON in ") + f.config_path + ": " + e.what());
    }
    if (!j.is_object()) throw cqc::ConfigError("config must be a JSON object");
    if (j.contains("command") && j["command"] != command) {
      throw cqc::ConfigError("config command '" + j["command"].get<std::string>() + "' does not match '" +
                             command + "'");
    }
  }
  j["command"] = command;
  // Inline flags override the file.
  if (!f.observables.empty()) j["observables"] = f.observables;
  if (!f.point.empty()) j["state"] = {{"point", parse_pair(f.point)}};
  if (f.hbar_start > 0.0 || f.hbar_ratio > 0.0 || f.hbar_count > 0) {
    j["hbar_schedule"] = {{"start", f.hbar_start > 0.0 ? f.hbar_start : 0.5},
                          {"ratio", f.hbar_ratio > 0.0 ? f.hbar_ratio : 0.5},
                          {"count", f.hbar_count > 0 ? f.hbar_count : 8}};
  }
  if (f.fock_cap > 0) j["fock"]["dim_cap"] = f.fock_cap;
  if (f.moment > 0) j["moment"] = f.moment;
  if (f.chain_length > 0) j["chain_length"] = f.chain_length;
  if (!f.out.empty()) j["output"]["path"] = f.out;
  if (!f.format.empty()) j["output"]["format"] = f.format;
  return j;
}

int execute(const std::string& command, const Flags& f) {
  const auto cfg = cqc::ExperimentConfig::from_json(build_config(command, f));
  const auto doc = cqc::run(cfg);
  const std::string text = cfg.format == "csv" ? doc.to_csv() : doc.to_json();
  if (cfg.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.output_path);
    if (!out) throw cqc::ConfigError("cannot write " + cfg.output_path);
    out << text;
    // JSON summary always lands somewhere, even when the table went to CSV.
    if (cfg.format == "csv") std::cout << doc.to_json();
  }
  if (doc.exit_code == kNumericalFailure) {
    std::cerr << "cqc: " << doc.body["error"]["message"].get<std::string>() << "\n";
  } else if (!doc.passed) {
    std::cerr << "cqc: checks failed\n";
  }
  return doc.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical-to-quantum lifting and hbar -> 0 limit checks"};
  app.require_subcommand(1);
  Flags flags;
  for (const auto& name : cqc::experiment_commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config_path, "JSON experiment config");
    sub->add_option("--observable", flags.observables, "Observable expression (repeatable)");
    sub->add_option("--point", flags.point, "Coherent-state point as x,p");
    sub->add_option("--hbar-start", flags.hbar_start, "First hbar of a geometric schedule");
    sub->add_option("--hbar-ratio", flags.hbar_ratio, "Ratio of the geometric schedule");
    sub->add_option("--hbar-count", flags.hbar_count, "Number of schedule points");
    sub->add_option("--fock-cap", flags.fock_cap, "Dense Fock dimension cap");
    sub->add_option("--moment", flags.moment, "Moment order");
    sub->add_option("--chain-length", flags.chain_length, "Chain length n");
    sub->add_option("--out", flags.out, "Output path");
    sub->add_option("--format", flags.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, flags);
  } catch (const cqc::ConfigError& e) {
    std::cerr << "cqc: config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const cqc::ParseError& e) {
    std::cerr << "cqc: " << e.what() << "\n";
    return kUsageError;
  } catch (const cqc::Error& e) {
    std::cerr << "cqc: " << e.what() << "\n";
    return kNumericalFailure;
  }
}
