#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zk/error.hpp"
#include "zk/harness.hpp"
#include "zk/spectral.hpp"

namespace zk::harness {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<stabilization::DecayVerdict> try_verdict(const dynamics::Trajectory& traj) {
  if (traj.aborted() || traj.trace.samples.size() < 2) return std::nullopt;
  try {
    return stabilization::verdict(traj.trace, theory_for(traj.config));
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

struct RunOutcome {
  RunManifest manifest;
  std::optional<stabilization::DecayVerdict> verdict;
};

RunOutcome run_one(const dynamics::SimConfig& config, const fs::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  const auto traj = dynamics::simulate(config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  RunOutcome out;
  out.verdict = try_verdict(traj);
  out.manifest = emit_artifacts(traj, out.verdict, out_dir, wall);
  return out;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const auto config = load_config(config_path);
  const auto run = run_one(config, out_dir);
  std::printf("config %s, %zu files in %s\n", run.manifest.config_hash.c_str(), run.manifest.files.size(),
              out_dir.c_str());
  if (run.verdict)
    std::printf("envelope_ok=%s fitted_rate=%.6g margin=%.6g\n", run.verdict->envelope_ok ? "true" : "false",
                run.verdict->fitted_rate, run.verdict->margin);
  if (run.manifest.aborted) {
    std::fprintf(stderr, "run aborted at t=%g: %s\n", *run.manifest.abort_time, run.manifest.abort_reason.c_str());
    return 1;
  }
  return 0;
}

int cmd_critical(double L, double B, int kmax, int lmax, int nmax, int alpha) {
  if (!(L > 0.0) || !(B > 0.0)) throw DomainError("L and B must be positive");
  if (kmax < 1 || lmax < 1 || nmax < 1) throw DomainError("kmax, lmax, nmax must be >= 1");
  if (alpha != 0 && alpha != 1) throw DomainError("alpha must be 0 or 1");
  if (alpha == 0) {
    std::printf("alpha=0: no critical rectangles\n");
    return 0;
  }
  std::printf("k,l,n,residual,critical_L\n");
  for (int k = 1; k <= kmax; ++k)
    for (int l = 1; l <= lmax; ++l)
      for (int n = 1; n <= nmax; ++n) {
        const double xi = spectral::mode_xi(n, B);
        const double Lc = xi < 1.0 ? spectral::critical_length(k, l, xi).L : std::nan("");
        std::printf("%d,%d,%d,%.9g,%.12g\n", k, l, n, spectral::critical_residual(L, B, k, l, n), Lc);
      }
  return 0;
}

int cmd_minimal(double B) {
  const double L = spectral::minimal_critical_rectangle(B);
  std::printf("L*=%.15g B=%.15g\n", L, B);
  return 0;
}

int cmd_decay_report(const std::string& trace_path, int alpha, double L, std::optional<double> B) {
  const auto trace = read_trace_csv(trace_path);
  const auto theory = stabilization::decay_theory(alpha, {L, B});
  const auto v = stabilization::verdict(trace, theory);
  std::printf("%s\n", verdict_json(v).c_str());
  return 0;
}

int cmd_verify(const std::string& suite, int samples, std::uint64_t seed) {
  const auto r = verify_suite(suite, samples, seed);
  for (const auto& f : r.failures) std::printf("FAIL %s\n", f.c_str());
  std::printf("suite %s: %d passed, %d failed, worst %.6g\n", suite.c_str(), r.passed, r.failed, r.worst);
  return r.failed == 0 ? 0 : 1;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_sweep(const std::string& config_path, const std::string& vary, const std::string& out_dir) {
  const auto eq = vary.find('=');
  const auto c1 = vary.find(':', eq == std::string::npos ? 0 : eq);
  const auto c2 = c1 == std::string::npos ? c1 : vary.find(':', c1 + 1);
  if (eq == std::string::npos || c1 == std::string::npos || c2 == std::string::npos)
    throw UsageError("--vary expects KEY=lo:hi:steps");
  const std::string key = vary.substr(0, eq);
  double lo = 0.0, hi = 0.0;
  int steps = 0;
  try {
    lo = std::stod(vary.substr(eq + 1, c1 - eq - 1));
    hi = std::stod(vary.substr(c1 + 1, c2 - c1 - 1));
    steps = std::stoi(vary.substr(c2 + 1));
  } catch (const std::exception&) {
    throw UsageError("--vary expects KEY=lo:hi:steps");
  }
  if (steps < 1) throw UsageError("--vary steps must be >= 1");

  static const std::set<std::string> int_keys{"alpha",  "nx",     "ny",   "mode_k",          "mode_l",
                                               "mode_n", "seed", "snapshot_stride", "trace_stride"};
  const json base = json::parse(read_text(config_path), nullptr, false);
  if (base.is_discarded() || !base.is_object()) throw ConfigError("config", "malformed JSON");

  std::vector<dynamics::SimConfig> configs;
  std::vector<double> values;
  for (int s = 0; s < steps; ++s) {
    const double v = steps == 1 ? lo : lo + (hi - lo) * s / (steps - 1);
    json doc = base;
    if (int_keys.contains(key)) {
      if (std::abs(v - std::round(v)) > 1e-9) throw ConfigError(key, "sweep value is not an integer");
      if (key == "seed")
        doc[key] = static_cast<std::uint64_t>(std::llround(v));
      else
        doc[key] = static_cast<int>(std::lround(v));
    } else {
      doc[key] = v;
    }
    configs.push_back(parse_config(doc.dump()));
    values.push_back(v);
  }

  std::vector<std::future<RunOutcome>> jobs;
  std::vector<std::string> dirs;
  for (std::size_t s = 0; s < configs.size(); ++s) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu", s);
    dirs.push_back(name);
    const fs::path dir = fs::path(out_dir) / name;
    jobs.push_back(std::async(std::launch::async, [cfg = configs[s], dir] { return run_one(cfg, dir); }));
  }
  json index = json::array();
  int aborted = 0;
  for (std::size_t s = 0; s < jobs.size(); ++s) {
    const auto run = jobs[s].get();
    json row;
    row["value"] = values[s];
    row["dir"] = dirs[s];
    row["config_hash"] = run.manifest.config_hash;
    row["aborted"] = run.manifest.aborted;
    row["envelope_ok"] = run.verdict ? json(run.verdict->envelope_ok) : json(nullptr);
    row["fitted_rate"] = run.verdict ? json(run.verdict->fitted_rate) : json(nullptr);
    index.push_back(row);
    if (run.manifest.aborted) ++aborted;
    std::printf("%s=%.10g -> %s%s\n", key.c_str(), values[s], dirs[s].c_str(),
                run.manifest.aborted ? " (aborted)" : "");
  }
  json summary;
  summary["vary"] = key;
  summary["runs"] = index;
  std::ofstream out(fs::path(out_dir) / "sweep.json", std::ios::trunc);
  out << summary.dump(2) << '\n';
  if (!out) throw DomainError("cannot write sweep.json");
  return aborted == 0 ? 0 : 1;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"zklab: Zakharov-Kuznetsov stabilization lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string config_path, out_dir, trace_path, suite, vary;
  double L = 0.0, B = 0.0;
  int kmax = 1, lmax = 1, nmax = 1, alpha = 1, samples = 100;
  std::uint64_t seed = 1;
  std::optional<double> opt_B;

  auto* sim = app.add_subcommand("simulate", "run one simulation and write its artifacts");
  sim->add_option("--config", config_path, "JSON configuration")->required();
  sim->add_option("--out", out_dir, "output directory")->required();

  auto* crit = app.add_subcommand("critical", "critical residuals for every (k,l,n) up to the bounds");
  crit->add_option("--L", L)->required();
  crit->add_option("--B", B)->required();
  crit->add_option("--kmax", kmax)->required();
  crit->add_option("--lmax", lmax)->required();
  crit->add_option("--nmax", nmax)->required();
  crit->add_option("--alpha", alpha)->required();

  auto* minr = app.add_subcommand("minimal-rectangle", "smallest critical length at half-width B");
  minr->add_option("--B", B)->required();

  auto* decay = app.add_subcommand("decay-report", "verdict for a trace.csv against the decay theory");
  decay->add_option("--trace", trace_path)->required();
  decay->add_option("--alpha", alpha)->required();
  decay->add_option("--L", L)->required();
  decay->add_option("--B", opt_B, "half-width (omit for the strip)");

  auto* ver = app.add_subcommand("verify", "seeded property suites");
  ver->add_option("--suite", suite)->required()->check(CLI::IsMember({"inequalities", "spectral", "conservation"}));
  ver->add_option("--samples", samples)->required();
  ver->add_option("--seed", seed)->required();

  auto* sweep = app.add_subcommand("sweep", "one run per value of a swept key");
  sweep->add_option("--config", config_path)->required();
  sweep->add_option("--vary", vary, "KEY=lo:hi:steps")->required();
  sweep->add_option("--out", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim) return cmd_simulate(config_path, out_dir);
    if (*crit) return cmd_critical(L, B, kmax, lmax, nmax, alpha);
    if (*minr) return cmd_minimal(B);
    if (*decay) return cmd_decay_report(trace_path, alpha, L, opt_B);
    if (*ver) return cmd_verify(suite, samples, seed);
    if (*sweep) return cmd_sweep(config_path, vary, out_dir);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n%s", e.what(), app.help().c_str());
    return 2;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}

}  // namespace zk::harness
