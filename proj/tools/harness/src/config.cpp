#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "zk/error.hpp"
#include "zk/harness.hpp"

namespace zk::harness {

namespace {

using nlohmann::json;
using dynamics::SimConfig;

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  const auto i = v.get<std::int64_t>();
  if (i < -(1LL << 30) || i > (1LL << 30)) throw ConfigError(key, "integer out of range");
  return static_cast<int>(i);
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

using Setter = std::function<void(SimConfig&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"alpha", [](SimConfig& c, const json& v, const std::string& k) { c.alpha = as_int(v, k); }},
      {"epsilon", [](SimConfig& c, const json& v, const std::string& k) { c.epsilon = as_number(v, k); }},
      {"linear",
       [](SimConfig& c, const json& v, const std::string& k) {
         if (!v.is_boolean()) throw ConfigError(k, "expected true or false");
         c.linear = v.get<bool>();
       }},
      {"L", [](SimConfig& c, const json& v, const std::string& k) { c.L = as_number(v, k); }},
      {"B", [](SimConfig& c, const json& v, const std::string& k) { c.B = as_number(v, k); }},
      {"nx", [](SimConfig& c, const json& v, const std::string& k) { c.nx = as_int(v, k); }},
      {"ny", [](SimConfig& c, const json& v, const std::string& k) { c.ny = as_int(v, k); }},
      {"domain",
       [](SimConfig& c, const json& v, const std::string& k) {
         try {
           c.domain = geometry::domain_kind_from_string(as_string(v, k));
         } catch (const DomainError& e) {
           throw ConfigError(k, e.what());
         }
       }},
      {"dt", [](SimConfig& c, const json& v, const std::string& k) { c.dt = as_number(v, k); }},
      {"t_end", [](SimConfig& c, const json& v, const std::string& k) { c.t_end = as_number(v, k); }},
      {"initial", [](SimConfig& c, const json& v, const std::string& k) { c.initial.kind = as_string(v, k); }},
      {"amplitude",
       [](SimConfig& c, const json& v, const std::string& k) { c.initial.amplitude = as_number(v, k); }},
      {"target_weighted",
       [](SimConfig& c, const json& v, const std::string& k) {
         if (v.is_null())
           c.initial.target_weighted.reset();
         else
           c.initial.target_weighted = as_number(v, k);
       }},
      {"mode_k", [](SimConfig& c, const json& v, const std::string& k) { c.initial.mode_k = as_int(v, k); }},
      {"mode_l", [](SimConfig& c, const json& v, const std::string& k) { c.initial.mode_l = as_int(v, k); }},
      {"mode_n", [](SimConfig& c, const json& v, const std::string& k) { c.initial.mode_n = as_int(v, k); }},
      {"support_radius",
       [](SimConfig& c, const json& v, const std::string& k) { c.initial.support_radius = as_number(v, k); }},
      {"seed",
       [](SimConfig& c, const json& v, const std::string& k) {
         if (!v.is_number_unsigned()) throw ConfigError(k, "expected a non-negative integer");
         c.initial.seed = v.get<std::uint64_t>();
       }},
      {"initial_file",
       [](SimConfig& c, const json& v, const std::string& k) { c.initial.file = as_string(v, k); }},
      {"snapshot_stride",
       [](SimConfig& c, const json& v, const std::string& k) { c.snapshot_stride = as_int(v, k); }},
      {"trace_stride", [](SimConfig& c, const json& v, const std::string& k) { c.trace_stride = as_int(v, k); }},
      {"linear_solver_tol",
       [](SimConfig& c, const json& v, const std::string& k) { c.linear_solver_tol = as_number(v, k); }},
  };
  return table;
}

constexpr const char* kRequired[] = {"alpha", "L", "B"};

}  // namespace

SimConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
  for (const char* key : kRequired)
    if (!doc.contains(key)) throw ConfigError(key, "missing required key");

  SimConfig config;
  const auto& table = setters();
  for (const auto& [key, value] : doc.items()) {
    auto it = table.find(key);
    if (it == table.end()) throw ConfigError(key, "unknown key");
    it->second(config, value, key);
  }
  config.validate();
  return config;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_config(const SimConfig& c) {
  json doc;
  doc["alpha"] = c.alpha;
  doc["epsilon"] = c.epsilon;
  doc["linear"] = c.linear;
  doc["L"] = c.L;
  doc["B"] = c.B;
  doc["nx"] = c.nx;
  doc["ny"] = c.ny;
  doc["domain"] = geometry::to_string(c.domain);
  doc["dt"] = c.dt;
  doc["t_end"] = c.t_end;
  doc["initial"] = c.initial.kind;
  doc["amplitude"] = c.initial.amplitude;
  doc["target_weighted"] = c.initial.target_weighted ? json(*c.initial.target_weighted) : json(nullptr);
  doc["mode_k"] = c.initial.mode_k;
  doc["mode_l"] = c.initial.mode_l;
  doc["mode_n"] = c.initial.mode_n;
  doc["support_radius"] = c.initial.support_radius;
  doc["seed"] = c.initial.seed;
  doc["initial_file"] = c.initial.file;
  doc["snapshot_stride"] = c.snapshot_stride;
  doc["trace_stride"] = c.trace_stride;
  doc["linear_solver_tol"] = c.linear_solver_tol;
  return doc.dump();
}

std::string config_hash(const SimConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace zk::harness
