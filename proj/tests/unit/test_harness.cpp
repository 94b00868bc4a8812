#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zk/error.hpp"
#include "zk/harness.hpp"

using namespace zk;
using namespace zk::harness;
namespace fs = std::filesystem;

namespace {

std::string key_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("zk_harness_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Runs the CLI binary (path from the environment) and returns its exit code.
int run_cli(const std::string& args, std::string* out = nullptr) {
  const char* exe = std::getenv("ZKLAB");
  if (exe == nullptr) return -1;
  const std::string cmd = std::string(exe) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string text;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) text.append(buf, n);
  const int status = pclose(p);
  if (out) *out = text;
  return WEXITSTATUS(status);
}

const char* kSmall = R"({"alpha": 1, "L": 2.0, "B": 1.0, "nx": 15, "ny": 15, "dt": 0.01, "t_end": 0.5,
                         "trace_stride": 2, "snapshot_stride": 25, "amplitude": 0.2})";

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(R"({"alpha": 1, "L": 2, "B": 1})");
  CHECK(c.dt == 1e-3);
  CHECK(c.trace_stride == 10);
  CHECK(c.linear_solver_tol == 1e-10);
  CHECK(c.nx == 63);

  CHECK(key_error(R"({"alpha": 2, "L": 2, "B": 1})") == "alpha");
  CHECK(key_error(R"({"alpha": 1, "L": -2, "B": 1})") == "L");
  CHECK(key_error(R"({"L": 2, "B": 1})") == "alpha");
  CHECK(key_error(R"({"alpha": 1, "L": 2, "B": 1, "colour": 3})") == "colour");
  CHECK(key_error(R"({"alpha": 1, "L": "two", "B": 1})") == "L");
  CHECK(key_error(R"({"alpha": 1, "L": 2, "B": 1, "nx": 31.5})") == "nx");
  CHECK(key_error(R"({"alpha": 1, "L": 2, "B": 1, "linear": 1})") == "linear");
  CHECK(key_error(R"({"alpha": 1, "L": 2, "B": 1, "domain": "disc"})") == "domain");
  CHECK(key_error(R"({"alpha": 1, "L": 2, "B": 1, "dt": 0.3})") == "dt");
  CHECK(key_error("[1, 2]") == "config");
  CHECK(key_error("{") == "config");

  const auto s = parse_config(
      R"({"alpha": 0, "L": 3, "B": 4, "domain": "truncated_strip", "initial": "strip_bump", "support_radius": 0.5,
          "target_weighted": 0.1, "seed": 7, "linear": true, "epsilon": 0.01})");
  CHECK(s.domain == geometry::DomainKind::truncated_strip);
  CHECK(s.initial.target_weighted.value() == 0.1);
  CHECK(s.initial.seed == 7u);
}

TEST_CASE("canonical form and hash are stable") {
  const auto c = parse_config(kSmall);
  const auto again = parse_config(canonical_config(c));
  CHECK(canonical_config(again) == canonical_config(c));
  CHECK(config_hash(again) == config_hash(c));
  CHECK(config_hash(c).size() == 16);
  // Key order and whitespace do not matter.
  const auto reordered = parse_config(R"({"B":1.0,"L":2.0,"alpha":1,"ny":15,"nx":15,"t_end":0.5,"dt":0.01,
                                          "snapshot_stride":25,"trace_stride":2,"amplitude":0.2})");
  CHECK(config_hash(reordered) == config_hash(c));
  auto other = c;
  other.dt = 0.005;
  CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("artifacts") {
  const auto c = parse_config(kSmall);
  const auto traj = dynamics::simulate(c);
  const auto dir = scratch("artifacts");
  const auto m = emit_artifacts(traj, stabilization::verdict(traj.trace, theory_for(c)), dir, 0.5);

  std::ifstream csv(dir / "trace.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,l2_sq,weighted,flux0,grad_x_sq,grad_y_sq,cubic");
  std::size_t lines = 1;
  for (std::string l; std::getline(csv, l);) ++lines;
  CHECK(lines == traj.trace.size() + 1);

  const auto back = read_trace_csv(dir / "trace.csv");
  CHECK(back.samples == traj.trace.samples);

  CHECK(fs::exists(dir / "verdict.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["config_hash"] == m.config_hash);
  CHECK(manifest["aborted"] == false);
  for (const auto& f : m.files) CHECK(fs::exists(dir / f));
  CHECK(m.files.size() == 3 + traj.snapshots.size());

  const auto dir2 = scratch("artifacts_rerun");
  emit_artifacts(dynamics::simulate(c), std::nullopt, dir2, 0.0, false);
  CHECK(slurp(dir / "trace.csv") == slurp(dir2 / "trace.csv"));
  CHECK_FALSE(fs::exists(dir2 / "verdict.json"));
}

TEST_CASE("aborted runs are flagged") {
  auto c = parse_config(kSmall);
  c.initial.amplitude = 1e5;
  const auto traj = dynamics::simulate(c);
  REQUIRE(traj.aborted());
  const auto dir = scratch("aborted");
  emit_artifacts(traj, std::nullopt, dir, 0.0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["aborted"] == true);
  CHECK(manifest["abort_time"].get<double>() == *traj.abort_time);
  CHECK(read_trace_csv(dir / "trace.csv").samples == traj.trace.samples);
}

TEST_CASE("trace reader rejects malformed files") {
  const auto dir = scratch("badcsv");
  std::ofstream(dir / "a.csv") << "t,x\n1,2\n";
  CHECK_THROWS_AS(read_trace_csv(dir / "a.csv"), DomainError);
  std::ofstream(dir / "b.csv") << kTraceHeader << "\n1,2,3\n";
  CHECK_THROWS_AS(read_trace_csv(dir / "b.csv"), DomainError);
  std::ofstream(dir / "c.csv") << kTraceHeader << "\n1,2,3,4,5,6,seven\n";
  CHECK_THROWS_AS(read_trace_csv(dir / "c.csv"), DomainError);
}

TEST_CASE("energy balance helper") {
  dynamics::EnergyTrace tr;
  for (int k = 0; k <= 10; ++k) {
    dynamics::EnergySample s;
    s.t = 0.1 * k;
    s.l2_sq = 1.0 - 0.5 * s.t;
    s.flux0 = 0.5;
    tr.samples.push_back(s);
  }
  const auto b = energy_balance(tr);
  CHECK(b.max_relative_defect < 1e-14);
  CHECK(b.non_increasing);
  tr.samples[5].l2_sq = 2.0;
  CHECK_FALSE(energy_balance(tr).non_increasing);
  // Growth at round-off scale is counted but not judged.
  tr.samples[5].l2_sq = 0.5;
  tr.samples[6].l2_sq = 1e-20;
  tr.samples[7].l2_sq = 2e-20;
  tr.samples[8].l2_sq = 1e-20;
  tr.samples[9].l2_sq = 0.0;
  tr.samples[10].l2_sq = 0.0;
  const auto tiny = energy_balance(tr);
  CHECK(tiny.non_increasing);
  CHECK(tiny.unresolved_increases == 1);
}

TEST_CASE("verify suites") {
  const auto spectral = verify_suite("spectral", 200, 1);
  CHECK(spectral.failed == 0);
  CHECK(spectral.passed == 200);
  const auto ineq = verify_suite("inequalities", 30, 2);
  CHECK(ineq.failed == 0);
  const auto cons = verify_suite("conservation", 1, 3);
  CHECK(cons.failed == 0);
  CHECK_THROWS_AS(verify_suite("nope", 1, 1), DomainError);
}

TEST_CASE("command line") {
  if (std::getenv("ZKLAB") == nullptr) return;
  std::string out;
  SUBCASE("critical") {
    CHECK(run_cli("critical --L 7.2552 --B 3.1416 --kmax 2 --lmax 2 --nmax 2 --alpha 1", &out) == 0);
    std::istringstream lines(out);
    std::string line;
    bool found = false;
    while (std::getline(lines, line))
      if (line.rfind("1,1,1,", 0) == 0) {
        const double residual = std::stod(line.substr(6));
        found = std::abs(residual) < 1e-3;
      }
    CHECK(found);
  }
  SUBCASE("usage errors exit 2") {
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("critical --L 1") == 2);
    CHECK(run_cli("verify --suite spectral --samples 3 --seed 1 --bogus 4") == 2);
    CHECK(run_cli("") == 2);
  }
  SUBCASE("domain errors exit 1") {
    CHECK(run_cli("minimal-rectangle --B 1.0") == 1);
    CHECK(run_cli("decay-report --trace /nonexistent.csv --alpha 1 --L 2 --B 1") == 1);
  }
  SUBCASE("verify") {
    CHECK(run_cli("verify --suite spectral --samples 100 --seed 1", &out) == 0);
    CHECK(out.find("0 failed") != std::string::npos);
  }
  SUBCASE("decay-report on a synthetic trace") {
    const auto dir = scratch("cli_decay");
    dynamics::EnergyTrace tr;
    for (int k = 0; k <= 200; ++k) {
      dynamics::EnergySample s;
      s.t = 0.02 * k;
      s.weighted = std::exp(-2 * s.t);
      tr.samples.push_back(s);
    }
    write_trace_csv(dir / "trace.csv", tr);
    // alpha = 0 on the strip L = 2 has rate 12 / (4 * 3) = 1.
    CHECK(run_cli("decay-report --trace " + (dir / "trace.csv").string() + " --alpha 0 --L 2", &out) == 0);
    const auto v = nlohmann::json::parse(out);
    CHECK(v["envelope_ok"] == true);
    CHECK(v["margin"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("simulate and sweep") {
    const auto dir = scratch("cli_sim");
    std::ofstream(dir / "cfg.json") << kSmall;
    CHECK(run_cli("simulate --config " + (dir / "cfg.json").string() + " --out " + (dir / "run").string()) == 0);
    CHECK(fs::exists(dir / "run" / "trace.csv"));
    std::ofstream(dir / "bad.json") << R"({"alpha": 2, "L": 2, "B": 1})";
    CHECK(run_cli("simulate --config " + (dir / "bad.json").string() + " --out " + (dir / "x").string(), &out) == 1);
    CHECK(out.find("alpha") != std::string::npos);

    CHECK(run_cli("sweep --config " + (dir / "cfg.json").string() + " --vary amplitude=0.1:0.3:3 --out " +
                  (dir / "sweep").string()) == 0);
    for (const char* r : {"run_000", "run_001", "run_002"}) CHECK(fs::exists(dir / "sweep" / r / "manifest.json"));
    CHECK(slurp(dir / "sweep" / "run_000" / "trace.csv") != slurp(dir / "sweep" / "run_002" / "trace.csv"));
    CHECK(run_cli("sweep --config " + (dir / "cfg.json").string() + " --vary amplitude --out " +
                  (dir / "s2").string()) == 2);
  }
}
