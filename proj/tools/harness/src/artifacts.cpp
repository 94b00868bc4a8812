#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zk/error.hpp"
#include "zk/harness.hpp"

namespace zk::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw DomainError("trace.csv line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

json theory_record(const stabilization::DecayTheory& t) {
  json j;
  j["alpha"] = t.alpha;
  j["L"] = t.geometry.L;
  j["B"] = t.geometry.B ? json(*t.geometry.B) : json(nullptr);
  j["admissible"] = t.admissible;
  j["A_sq"] = t.A_sq;
  j["threshold"] = t.threshold;
  j["rate"] = t.rate;
  j["delta"] = t.delta;
  j["eps_small"] = t.eps_small;
  return j;
}

}  // namespace

void write_trace_csv(const fs::path& path, const dynamics::EnergyTrace& trace) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DomainError("cannot write " + path.string());
  out << kTraceHeader << '\n';
  for (const auto& s : trace.samples) {
    out << fmt17(s.t) << ',' << fmt17(s.l2_sq) << ',' << fmt17(s.weighted) << ',' << fmt17(s.flux0)
        << ',' << fmt17(s.grad_x_sq) << ',' << fmt17(s.grad_y_sq) << ',' << fmt17(s.cubic) << '\n';
  }
  if (!out) throw DomainError("error writing " + path.string());
}

dynamics::EnergyTrace read_trace_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader)
    throw DomainError(path.string() + ": missing or unexpected trace header");
  dynamics::EnergyTrace trace;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(parse_double(cell, lineno));
    if (cols.size() != 7) throw DomainError("trace.csv line " + std::to_string(lineno) + ": expected 7 columns");
    trace.samples.push_back({cols[0], cols[1], cols[2], cols[3], cols[4], cols[5], cols[6]});
  }
  return trace;
}

std::string verdict_json(const stabilization::DecayVerdict& v) {
  json j;
  j["theory"] = theory_record(v.theory);
  j["initial_weighted"] = v.initial_weighted;
  j["smallness_ok"] = v.smallness_ok;
  j["envelope_ok"] = v.envelope_ok;
  j["fitted_rate"] = v.fitted_rate;
  j["r_squared"] = v.r_squared;
  j["margin"] = v.margin;
  j["fit_t_lo"] = v.fit_t_lo;
  j["fit_t_hi"] = v.fit_t_hi;
  j["worst_envelope_ratio"] = v.worst_envelope_ratio;
  return j.dump(2);
}

stabilization::DecayTheory theory_for(const dynamics::SimConfig& config) {
  stabilization::DecayGeometry g{config.L, std::nullopt};
  if (config.domain == geometry::DomainKind::rectangle) g.B = config.B;
  return stabilization::decay_theory(config.alpha, g);
}

RunManifest emit_artifacts(const dynamics::Trajectory& trajectory,
                           const std::optional<stabilization::DecayVerdict>& verdict,
                           const fs::path& out_dir, double wall_seconds, bool write_snapshots) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw DomainError("cannot create output directory " + out_dir.string());

  RunManifest m;
  m.config_json = canonical_config(trajectory.config);
  m.config_hash = config_hash(trajectory.config);
  m.tool_version = kToolVersion;
  m.wall_seconds = wall_seconds;
  m.aborted = trajectory.aborted();
  m.abort_time = trajectory.abort_time;
  m.abort_reason = trajectory.abort_reason;

  write_trace_csv(out_dir / "trace.csv", trajectory.trace);
  m.files.push_back("trace.csv");

  if (verdict) {
    std::ofstream out(out_dir / "verdict.json", std::ios::trunc);
    out << verdict_json(*verdict) << '\n';
    if (!out) throw DomainError("cannot write verdict.json");
    m.files.push_back("verdict.json");
  }

  if (write_snapshots) {
    fs::create_directories(out_dir / "snapshots", ec);
    if (ec) throw DomainError("cannot create snapshots directory");
    for (std::size_t k = 0; k < trajectory.snapshots.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "snap_%04zu.zks", k);
      const auto& snap = trajectory.snapshots[k];
      dynamics::write_snapshot(out_dir / "snapshots" / name, snap.field, snap.t);
      m.files.push_back(std::string("snapshots/") + name);
    }
  }

  json j;
  j["config"] = json::parse(m.config_json);
  j["config_hash"] = m.config_hash;
  j["tool_version"] = m.tool_version;
  j["wall_seconds"] = m.wall_seconds;
  j["aborted"] = m.aborted;
  j["abort_time"] = m.abort_time ? json(*m.abort_time) : json(nullptr);
  j["abort_reason"] = m.abort_reason;
  j["i0_initial"] = trajectory.trace.i0_initial;
  j["samples"] = trajectory.trace.samples.size();
  m.files.push_back("manifest.json");
  j["files"] = m.files;
  std::ofstream out(out_dir / "manifest.json", std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw DomainError("cannot write manifest.json");
  return m;
}

}  // namespace zk::harness
