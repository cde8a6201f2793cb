#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome cqc(const std::string& args) {
  const std::string cmd = std::string(CQC_BINARY) + " " + args + " 2>/dev/null";
  Outcome o{0, ""};
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, n);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string temp_path(const std::string& name) {
  const char* dir = std::getenv("TMPDIR");
  return std::string(dir ? dir : "/tmp") + "/cqc_cli_" + name;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(cqc("verify-chain --chain-length 4").code == 0);
  CHECK(cqc("sweep --observable x^2 --point 0.7,-0.3").code == 0);
  CHECK(cqc("").code == 2);
  CHECK(cqc("sweep --point 0.7").code == 2);
  CHECK(cqc("sweep --observable 'x^' --point 0,0").code == 2);
  CHECK(cqc("sweep --config /nonexistent.json").code == 2);
  CHECK(cqc("sweep --observable x --point 0,0 --format xml").code == 2);
  // Check failure: a two-point schedule cannot extrapolate x^4.
  const std::string cfg = temp_path("short.json");
  std::ofstream(cfg) << R"({"observables":["x^4"],"state":{"point":[0.7,-0.3]},"hbar_schedule":[0.5,0.25]})";
  CHECK(cqc("sweep --config " + cfg).code == 1);
  // Numerical failure: the dense cap is hit without recentering.
  const std::string trunc = temp_path("trunc.json");
  std::ofstream(trunc) << R"({"observables":["x^2"],"state":{"point":[2,2]},"recenter":false})";
  CHECK(cqc("sweep --config " + trunc + " --fock-cap 60").code == 3);
}

TEST_CASE("inline flags build the schedule and csv output") {
  const std::string out = temp_path("table.csv");
  const auto r = cqc("moment --observable x --point 1,0 --moment 2 --hbar-start 0.4 --hbar-ratio 0.5 --hbar-count 3 "
                     "--format csv --out " + out);
  CHECK(r.code == 0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string csv = ss.str();
  // <x^2> = x^2 + hbar / 4 at (1, 0).
  const std::string head = "hbar,value_re,value_im,classical_ref,abs_gap\n0.40000000000000002,";
  REQUIRE(csv.rfind(head, 0) == 0);
  CHECK(std::stod(csv.substr(head.size())) == doctest::Approx(1.1).epsilon(1e-13));
  // Three data rows plus the header.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
