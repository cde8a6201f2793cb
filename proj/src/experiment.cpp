#include "cqc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <set>

#include "cqc/chain.hpp"
#include "cqc/entropy.hpp"
#include "cqc/errors.hpp"
#include "cqc/expression.hpp"
#include "cqc/mapping.hpp"
#include "cqc/sweep.hpp"

namespace cqc {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Config validation

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + " must be an integer");
  return j.get<int>();
}

PhasePoint get_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where + " must be [x, p]");
  return {get_number(j[0], where + "[0]"), get_number(j[1], where + "[1]")};
}

std::vector<GaussianComponent> get_state(const json& j, const std::string& where, bool& is_point) {
  require_keys(j, {"point", "mixture"}, where);
  if (j.contains("point") == j.contains("mixture")) {
    throw ConfigError(where + " needs exactly one of 'point' or 'mixture'");
  }
  is_point = j.contains("point");
  if (is_point) return {{1.0, get_point(j["point"], where + ".point"), 0.0}};
  const auto& m = j["mixture"];
  if (!m.is_array() || m.empty()) throw ConfigError(where + ".mixture must be a non-empty list");
  std::vector<GaussianComponent> comps;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string w = where + ".mixture[" + std::to_string(i) + "]";
    require_keys(m[i], {"weight", "mean", "sigma"}, w);
    GaussianComponent c;
    c.weight = m[i].contains("weight") ? get_number(m[i]["weight"], w + ".weight") : 1.0;
    if (!m[i].contains("mean")) throw ConfigError(w + ".mean is required");
    c.mean = get_point(m[i]["mean"], w + ".mean");
    c.sigma = m[i].contains("sigma") ? get_number(m[i]["sigma"], w + ".sigma") : 0.0;
    comps.push_back(c);
  }
  // Surface weight/sigma problems as config errors.
  try {
    ClassicalDistribution check(comps);
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return comps;
}

std::vector<double> get_schedule(const json& j) {
  HbarSchedule s;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      s.values.push_back(get_number(j[i], "hbar_schedule[" + std::to_string(i) + "]"));
    }
  } else {
    require_keys(j, {"start", "ratio", "count"}, "hbar_schedule");
    if (!j.contains("start") || !j.contains("ratio") || !j.contains("count")) {
      throw ConfigError("hbar_schedule needs start, ratio and count");
    }
    s = HbarSchedule::geometric(get_number(j["start"], "hbar_schedule.start"),
                                get_number(j["ratio"], "hbar_schedule.ratio"),
                                get_int(j["count"], "hbar_schedule.count"));
  }
  s.validate();
  return s.values;
}

std::vector<double> default_schedule(const std::string& command) {
  if (command == "entropy") return {0.1, 0.05, 0.02, 0.01};
  if (command == "map") return {1.0, 0.25, 0.05};
  return HbarSchedule::standard().values;
}

// ---------------------------------------------------------------------------
// Output

void append_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void dump(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(key).dump() + ": ";
        dump(value, out, indent + 2);
      }
      out += "\n" + close + "}";
      break;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        out += pad;
        dump(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      break;
    }
    case json::value_t::number_float:
      append_double(out, j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string error_kind(const Error& e) {
  if (dynamic_cast<const TruncationError*>(&e)) return "truncation";
  if (dynamic_cast<const DivergenceError*>(&e)) return "divergence";
  if (dynamic_cast<const AccuracyError*>(&e)) return "accuracy";
  if (dynamic_cast<const NumericsError*>(&e)) return "numerics";
  if (dynamic_cast<const NotAState*>(&e)) return "not_a_state";
  if (dynamic_cast<const NotHermitian*>(&e)) return "not_hermitian";
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "dimension_mismatch";
  if (dynamic_cast<const MalformedObservable*>(&e)) return "malformed_observable";
  return "error";
}

// ---------------------------------------------------------------------------
// Commands

struct Context {
  const ExperimentConfig& cfg;
  std::vector<ClassicalObservable> obs;
  double tol;
  ResultDocument& doc;

  SweepOptions sweep_options() const {
    SweepOptions o;
    o.schedule.values = cfg.hbar_schedule;
    o.policy = cfg.fock;
    o.lambda = cfg.lambda;
    o.recenter = cfg.recenter;
    return o;
  }

  void check(const std::string& name, bool ok, double value, double tolerance) {
    doc.body["checks"].push_back({{"name", name}, {"passed", ok}, {"value", value}, {"tolerance", tolerance}});
  }

  void need_observables(std::size_t n) const {
    if (obs.size() != n) {
      throw ConfigError("command '" + cfg.command + "' needs " + std::to_string(n) + " observable(s)");
    }
  }
  void need_point() const {
    if (!cfg.state_is_point) throw ConfigError("command '" + cfg.command + "' needs a point state");
  }
};

// Extrapolation degree for data that is polynomial of degree `total / 2` in
// hbar; black boxes (degree -1) fall back to the generic rule.
int fit_degree(const SweepOptions& o, std::initializer_list<const ClassicalObservable*> obs, int power, int shift) {
  if (o.fit_degree > 0) return o.fit_degree;
  int total = 0;
  for (const auto* a : obs) {
    if (!a->has_polynomial()) return series_fit_degree(-1, o.schedule.values.size());
    total += a->degree();
  }
  return series_fit_degree(total * power / 2 - shift, o.schedule.values.size());
}

json series_json(const SweepSeries& s) {
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back({{"hbar", p.hbar}, {"value", complex_json(p.value)}});
  json j = {{"points", pts},
            {"limit0", complex_json(s.limit0)},
            {"slope0", complex_json(s.slope0)},
            {"richardson", complex_json(s.richardson)},
            {"fit_residual", s.residual},
            {"order_defined", s.order_defined}};
  j["order"] = s.order_defined ? json(s.order) : json(nullptr);
  j["order_residual"] = s.order_defined ? json(s.order_residual) : json(nullptr);
  j["local_order"] = s.local_order;
  return j;
}

void run_verify_chain(Context& c) {
  const int n = c.cfg.chain_length;
  const auto spec = chain_spectrum(n);
  const ChainMatrix v(n);
  json eig = json::array();
  for (const auto& p : spec.pairs) eig.push_back({{"k", p.k}, {"j", p.j}, {"value", complex_json(p.value)}});
  const Complex prod = spec.nonzero_product();
  const double residual = spec.max_residual(v);
  const double expected = static_cast<double>(n) * n;
  c.doc.body["chain"] = {{"n", n},
                         {"eigenvalues", eig},
                         {"zero_count", spec.zero_count()},
                         {"nonzero_product", complex_json(prod)},
                         {"expected_product", expected},
                         {"eigenvector_residual", residual},
                         {"orthonormality_defect", spec.orthonormality_defect()}};
  c.check("zero_count", spec.zero_count() == 2, spec.zero_count(), 0.0);
  const double rel = std::abs(prod - expected) / expected;
  c.check("nonzero_product", rel <= c.tol, rel, c.tol);
  c.check("eigenvector_residual", residual <= 1e-12, residual, 1e-12);
}

void run_map(Context& c) {
  const auto dist = c.cfg.distribution();
  json per = json::array();
  for (double h : c.cfg.hbar_schedule) {
    LiftConfig lc;
    lc.hbar = h;
    lc.lambda = c.cfg.lambda;
    lc.policy = c.cfg.fock;
    const int degree = c.obs.empty() ? 0 : std::max(0, c.obs[0].degree());
    if (c.cfg.state_is_point) {
      const PhasePoint probe[] = {c.cfg.point()};
      lc.dim = experiment_dim(probe, degree, 1, lc);
    } else {
      lc.dim = distribution_dim(dist, lc);
    }
    const auto rho = c.cfg.state_is_point ? lift_point(c.cfg.point(), lc) : lift_distribution(dist, lc);
    const double trace = rho.op.is_diagonal() ? rho.op.diagonal_values().sum() : rho.op.to_dense().trace().real();
    json entry = {{"hbar", h},
                  {"dim", rho.dim()},
                  {"trace", trace},
                  {"trace_defect", rho.trace_defect},
                  {"truncation_warning", rho.truncation_warning}};
    const double trace_gap = std::abs(trace - (1.0 - rho.trace_defect));
    c.check("trace@" + std::to_string(h), trace_gap <= c.tol, trace_gap, c.tol);
    if (!c.obs.empty()) {
      const auto op = lift_observable(c.obs[0], lc);
      const double herm = op.hermiticity_defect();
      const double value = quantum_expectation(rho, op);
      const double ref = classical_expectation(c.obs[0], dist);
      entry["hermiticity_defect"] = herm;
      entry["expectation"] = value;
      entry["classical_ref"] = ref;
      c.check("hermitian@" + std::to_string(h), herm <= c.tol * std::max(1.0, op.max_abs()), herm, c.tol);
      if (c.obs[0].has_polynomial() && c.obs[0].degree() <= 0) {
        // Constant observables lift to a multiple of the identity.
        const double k = c.obs[0].polynomial().coefficient(0, 0);
        const Eigen::MatrixXcd m = op.to_dense();
        const auto trusted = static_cast<Eigen::Index>(rho.dim());
        const double dev =
            (m.topLeftCorner(trusted, trusted) - k * Eigen::MatrixXcd::Identity(trusted, trusted)).cwiseAbs().maxCoeff();
        entry["identity_deviation"] = dev;
        c.check("identity@" + std::to_string(h), dev <= c.tol, dev, c.tol);
      }
      if (op.dim() <= 12) {
        const Eigen::MatrixXcd m = op.to_dense();
        json rows = json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
          json row = json::array();
          for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
          rows.push_back(row);
        }
        entry["matrix"] = rows;
      }
      c.doc.table.push_back({h, Complex(value), ref});
    }
    per.push_back(entry);
    c.doc.body["lifts"] = per;
  }
}

// expect / sweep / moment share the per-hbar loop.
void run_series(Context& c, bool extrapolate) {
  const bool moment = c.cfg.command == "moment";
  c.need_observables(1);
  if (moment) c.need_point();
  const auto opts = c.sweep_options();
  const auto dist = c.cfg.distribution();
  const auto& a = c.obs[0];
  const int n = moment ? c.cfg.moment : 1;
  if (n < 1) throw ConfigError("moment must be a positive integer");
  double ref;
  if (moment) {
    ref = std::pow(eval_observable(a, c.cfg.point()), n);
  } else {
    ref = classical_expectation(a, dist);
  }
  c.doc.body["classical_ref"] = ref;
  std::vector<SeriesPoint> pts;
  for (double h : c.cfg.hbar_schedule) {
    double v;
    try {
      v = c.cfg.state_is_point ? point_moment(a, c.cfg.point(), n, h, opts) : distribution_expectation(a, dist, h, opts);
    } catch (Error& e) {
      e.add_context("at hbar = " + std::to_string(h));
      throw;
    }
    pts.push_back({h, Complex(v)});
    c.doc.table.push_back({h, Complex(v), ref});
  }
  const auto s = make_series(pts, fit_degree(opts, {&a}, n, 0));
  c.doc.body["series"] = series_json(s);
  if (extrapolate) {
    const double gap = std::abs(s.limit0.real() - ref);
    const double tol = c.tol * std::max(1.0, std::abs(ref));
    c.check("limit", gap <= tol, gap, tol);
  }
}

void run_commutator(Context& c) {
  c.need_observables(2);
  c.need_point();
  const auto opts = c.sweep_options();
  const PhasePoint pt = c.cfg.point();
  std::vector<SeriesPoint> raw, slope;
  double max_re = 0.0;
  for (double h : c.cfg.hbar_schedule) {
    Complex v;
    try {
      v = point_commutator(c.obs[0], c.obs[1], pt, h, opts);
    } catch (Error& e) {
      e.add_context("at hbar = " + std::to_string(h));
      throw;
    }
    max_re = std::max(max_re, std::abs(v.real()));
    raw.push_back({h, v});
    slope.push_back({h, Complex(v.imag() / h)});
    c.doc.table.push_back({h, v, 0.0});
  }
  const auto zero = make_series(raw, fit_degree(opts, {&c.obs[0], &c.obs[1]}, 1, 0));
  const auto sl = make_series(slope, fit_degree(opts, {&c.obs[0], &c.obs[1]}, 1, 1));
  const double bracket = poisson_bracket(c.obs[0], c.obs[1], pt);
  c.doc.body["series"] = series_json(zero);
  c.doc.body["slope_series"] = series_json(sl);
  c.doc.body["poisson_bracket"] = bracket;
  c.doc.body["max_real_part"] = max_re;
  c.doc.body["stated_kappa"] = 1.0;
  if (std::abs(bracket) > 1e-12) {
    const double kappa = sl.limit0.real() / bracket;
    c.doc.body["kappa"] = kappa;
    c.doc.body["kappa_matches_stated"] = std::abs(kappa - 1.0) <= 1e-6;
  } else {
    c.doc.body["kappa"] = nullptr;
  }
  const double lim = std::abs(zero.limit0);
  c.check("vanishing_limit", lim <= c.tol, lim, c.tol);
  c.check("real_part", max_re <= 1e-10, max_re, 1e-10);
}

void run_eom(Context& c) {
  c.need_observables(2);
  c.need_point();
  const auto opts = c.sweep_options();
  const PhasePoint pt = c.cfg.point();
  const double rhs = poisson_bracket(c.obs[0], c.obs[1], pt);
  std::vector<SeriesPoint> pts;
  for (double h : c.cfg.hbar_schedule) {
    Complex v;
    try {
      v = Complex(0.0, -1.0) * point_commutator(c.obs[0], c.obs[1], pt, h, opts) / h;
    } catch (Error& e) {
      e.add_context("at hbar = " + std::to_string(h));
      throw;
    }
    pts.push_back({h, v});
    c.doc.table.push_back({h, v, rhs});
  }
  const auto s = make_series(pts, fit_degree(opts, {&c.obs[0], &c.obs[1]}, 1, 1));
  c.doc.body["series"] = series_json(s);
  c.doc.body["classical_rhs"] = rhs;
  // Reference proportionality constant from <[x_hat, p_hat]> at the same point.
  const auto ref = sweep_commutator(Polynomial::monomial(1, 0), Polynomial::monomial(0, 1), pt, opts);
  const double kappa_ref = *ref.kappa;
  c.doc.body["kappa_reference"] = kappa_ref;
  c.doc.body["stated_kappa"] = 1.0;
  if (std::abs(rhs) > 1e-12) {
    const double kappa = s.limit0.real() / rhs;
    c.doc.body["kappa"] = kappa;
    const double rel = std::abs(kappa - kappa_ref) / std::abs(kappa_ref);
    c.check("kappa_consistency", rel <= c.tol, rel, c.tol);
  } else {
    c.doc.body["kappa"] = nullptr;
    const double lim = std::abs(s.limit0);
    c.check("vanishing_rhs", lim <= c.tol, lim, c.tol);
  }
}

void run_entropy(Context& c) {
  if (c.cfg.reference_state.empty()) throw ConfigError("entropy needs reference_state");
  const ClassicalDistribution p1(c.cfg.state), p2(c.cfg.reference_state);
  if (p1.has_point_mass() || p2.has_point_mass()) {
    throw ConfigError("entropy needs positive-sigma mixtures");
  }
  const auto sweep = entropy_limit_sweep(p1, p2, c.cfg.hbar_schedule, c.cfg.fock, c.cfg.lambda);
  json reps = json::array();
  bool flagged = false;
  for (const auto& r : sweep.reports) {
    reps.push_back({{"hbar", r.hbar},
                    {"s_quantum", r.s_quantum},
                    {"kl_classical", r.kl_classical},
                    {"gap", r.gap},
                    {"dims_used", r.dims_used},
                    {"tail", r.tail},
                    {"flagged", r.flagged}});
    flagged = flagged || r.flagged;
    c.doc.table.push_back({r.hbar, Complex(r.s_quantum), r.kl_classical});
  }
  c.doc.body["reports"] = reps;
  c.doc.body["truncated"] = sweep.truncated;
  if (sweep.truncated) c.doc.body["warning"] = sweep.warning;
  if (sweep.reports.empty()) {
    c.check("reports", false, 0.0, 0.0);
    return;
  }
  c.check("gaps_decreasing", sweep.gaps_decreasing(), sweep.reports.back().gap, 0.0);
  c.check("final_gap", sweep.reports.back().gap <= c.tol, sweep.reports.back().gap, c.tol);
  c.check("spectral_tail", !flagged, 0.0, 1e-10);
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::string> experiment_commands() {
  return {"map", "expect", "sweep", "moment", "commutator", "eom", "entropy", "verify-chain"};
}

double default_tolerance(const std::string& command) {
  if (command == "entropy") return 0.02;
  if (command == "verify-chain") return 1e-9;
  if (command == "map") return 1e-8;
  return 1e-6;
}

PhasePoint ExperimentConfig::point() const {
  if (!state_is_point) throw ConfigError("state is not a point");
  return state.front().mean;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  require_keys(j,
               {"command", "observables", "state", "reference_state", "hbar_schedule", "fock", "moment",
                "chain_length", "recenter", "lambda", "tolerance", "output"},
               "config");
  ExperimentConfig c;
  if (!j.contains("command") || !j["command"].is_string()) throw ConfigError("config.command is required");
  c.command = j["command"].get<std::string>();
  const auto cmds = experiment_commands();
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end()) {
    throw ConfigError("unknown command '" + c.command + "'");
  }
  if (j.contains("observables")) {
    const auto& o = j["observables"];
    if (!o.is_array()) throw ConfigError("observables must be a list of strings");
    for (const auto& s : o) {
      if (!s.is_string()) throw ConfigError("observables must be a list of strings");
      c.observables.push_back(s.get<std::string>());
    }
  }
  if (j.contains("state")) {
    c.state = get_state(j["state"], "state", c.state_is_point);
  } else if (c.command != "verify-chain") {
    throw ConfigError("config.state is required for '" + c.command + "'");
  }
  if (j.contains("reference_state")) {
    bool ignored = false;
    c.reference_state = get_state(j["reference_state"], "reference_state", ignored);
  }
  c.hbar_schedule = j.contains("hbar_schedule") ? get_schedule(j["hbar_schedule"]) : default_schedule(c.command);
  if (j.contains("fock")) {
    const auto& f = j["fock"];
    require_keys(f, {"epsilon", "dim_cap", "diagonal_dim_cap"}, "fock");
    if (f.contains("epsilon")) c.fock.epsilon = get_number(f["epsilon"], "fock.epsilon");
    if (f.contains("dim_cap")) c.fock.dim_cap = static_cast<std::size_t>(get_int(f["dim_cap"], "fock.dim_cap"));
    if (f.contains("diagonal_dim_cap")) {
      c.fock.diagonal_dim_cap = static_cast<std::size_t>(get_int(f["diagonal_dim_cap"], "fock.diagonal_dim_cap"));
    }
    try {
      c.fock.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("fock: ") + e.what());
    }
  }
  if (j.contains("moment")) c.moment = get_int(j["moment"], "moment");
  if (c.moment < 1) throw ConfigError("moment must be >= 1");
  if (j.contains("chain_length")) c.chain_length = get_int(j["chain_length"], "chain_length");
  if (c.chain_length < 2) throw ConfigError("chain_length must be >= 2");
  if (j.contains("recenter")) {
    if (!j["recenter"].is_boolean()) throw ConfigError("recenter must be a boolean");
    c.recenter = j["recenter"].get<bool>();
  }
  if (j.contains("lambda")) c.lambda = get_number(j["lambda"], "lambda");
  if (!(c.lambda > 0.0)) throw ConfigError("lambda must be positive");
  c.tolerance = j.contains("tolerance") ? get_number(j["tolerance"], "tolerance") : default_tolerance(c.command);
  if (!(c.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (j.contains("output")) {
    const auto& o = j["output"];
    require_keys(o, {"path", "format"}, "output");
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("output.path must be a string");
      c.output_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      if (!o["format"].is_string()) throw ConfigError("output.format must be a string");
      c.format = o["format"].get<std::string>();
    }
    if (c.format != "json" && c.format != "csv") throw ConfigError("output.format must be json or csv");
  }
  c.echo = j;
  return c;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

std::string ResultDocument::to_json() const {
  std::string out;
  dump(body, out, 0);
  out += "\n";
  return out;
}

std::string ResultDocument::to_csv() const {
  std::string out = "hbar,value_re,value_im,classical_ref,abs_gap\n";
  for (const auto& r : table) {
    append_double(out, r.hbar);
    out += ",";
    append_double(out, r.value.real());
    out += ",";
    append_double(out, r.value.imag());
    out += ",";
    append_double(out, r.classical_ref);
    out += ",";
    append_double(out, std::abs(r.value - r.classical_ref));
    out += "\n";
  }
  return out;
}

ResultDocument run(const ExperimentConfig& cfg) {
  ResultDocument doc;
  doc.body["metadata"] = {{"artifact", "cqc"},
                          {"version", kArtifactVersion},
                          {"config", cfg.echo},
                          {"timestamp", timestamp()}};
  doc.body["command"] = cfg.command;
  doc.body["checks"] = json::array();
  Context ctx{cfg, {}, cfg.tolerance, doc};
  for (const auto& s : cfg.observables) ctx.obs.push_back(parse_observable(s));
  try {
    if (cfg.command == "verify-chain") {
      run_verify_chain(ctx);
    } else if (cfg.command == "map") {
      run_map(ctx);
    } else if (cfg.command == "expect") {
      run_series(ctx, false);
    } else if (cfg.command == "sweep" || cfg.command == "moment") {
      run_series(ctx, true);
    } else if (cfg.command == "commutator") {
      run_commutator(ctx);
    } else if (cfg.command == "eom") {
      run_eom(ctx);
    } else if (cfg.command == "entropy") {
      run_entropy(ctx);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    doc.body["error"] = {{"kind", error_kind(e)}, {"message", e.what()}};
    doc.body["passed"] = false;
    doc.passed = false;
    doc.exit_code = 3;
    return doc;
  }
  doc.passed = std::all_of(doc.body["checks"].begin(), doc.body["checks"].end(),
                           [](const json& ch) { return ch["passed"].get<bool>(); });
  doc.body["passed"] = doc.passed;
  doc.exit_code = doc.passed ? 0 : 1;
  return doc;
}

}  // namespace cqc
