#pragma once

// Configuration files, run artifacts and the zklab command line.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zk/dynamics.hpp"
#include "zk/stabilization.hpp"

namespace zk::harness {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr const char* kTraceHeader = "t,l2_sq,weighted,flux0,grad_x_sq,grad_y_sq,cubic";

// Flat JSON object. Required keys: alpha, L, B. Everything else has a default.
// Unknown keys, type mismatches and out-of-range values raise ConfigError
// naming the key.
dynamics::SimConfig parse_config(const std::string& text);
dynamics::SimConfig load_config(const std::filesystem::path& path);

// Every key with its value, keys sorted; parse_config(canonical_config(c))
// reproduces c.
std::string canonical_config(const dynamics::SimConfig& config);
// 64-bit FNV-1a of canonical_config, as 16 hex digits.
std::string config_hash(const dynamics::SimConfig& config);

// Decimal with 17 significant digits, so parsing restores every bit.
void write_trace_csv(const std::filesystem::path& path, const dynamics::EnergyTrace& trace);
dynamics::EnergyTrace read_trace_csv(const std::filesystem::path& path);

std::string verdict_json(const stabilization::DecayVerdict& v);

struct RunManifest {
  std::string config_json;
  std::string config_hash;
  std::string tool_version;
  double wall_seconds = 0.0;
  std::vector<std::string> files;  // relative to the output directory
  bool aborted = false;
  std::optional<double> abort_time;
  std::string abort_reason;
};

// Writes trace.csv, verdict.json (when a verdict is given), snapshots/ and
// manifest.json into out_dir, creating it if needed. Throws DomainError when
// the directory is not writable.
RunManifest emit_artifacts(const dynamics::Trajectory& trajectory,
                           const std::optional<stabilization::DecayVerdict>& verdict,
                           const std::filesystem::path& out_dir, double wall_seconds,
                           bool write_snapshots = true);

// Decay theory matching a configuration (strips drop B).
stabilization::DecayTheory theory_for(const dynamics::SimConfig& config);

// |u|^2(t) + int_0^t flux0 ds against |u0|^2 for a linear eps = 0 trace,
// with the time integral by the trapezoidal rule over the samples.
struct BalanceCheck {
  double max_relative_defect = 0.0;  // max_t |balance(t) - |u0|^2| / |u0|^2
  // l2_sq never grows between samples resolved above kEnergyFloor * |u0|^2.
  // Below that level the state is at round-off scale and is not judged.
  bool non_increasing = false;
  int unresolved_increases = 0;  // growth steps seen under the floor
};
BalanceCheck energy_balance(const dynamics::EnergyTrace& trace);

struct SuiteResult {
  int passed = 0;
  int failed = 0;
  double worst = 0.0;  // worst ratio / residual / defect seen
  std::vector<std::string> failures;
};

// Seeded property suites behind `zklab verify`:
//   inequalities  random clean fields against check_gn (q = 3, 4),
//                 check_sup_bound and check_poincare (both axes), ratio <= 1.05
//   spectral      random admissible (k, l, n, B), triple_residuals <= 1e-12
//   conservation  short linear runs from random data, energy_balance within 1%
// Throws DomainError for an unknown suite name or samples < 1.
SuiteResult verify_suite(const std::string& suite, int samples, std::uint64_t seed);

// Exit codes: 0 success, 1 domain error, 2 usage error.
int cli_main(int argc, char** argv);

}  // namespace zk::harness
