#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "mintool/linalg.hpp"

namespace mintool {

constexpr int kSchemaVersion = 1;

// One estimated constant (mu(R), delta(k), tau(R), ...) with the witness
// achieving the extremal ratio, so the estimate can be replayed.
struct ConstantEstimate {
  std::string name;
  double parameter = 0.0;
  double value = 0.0;
  std::string method;  // analytic | grid-search | random-search
  long samples = 0;
  nlohmann::json worst_witness;

  nlohmann::json to_json() const {
    return {{"schema_version", kSchemaVersion}, {"name", name},   {"parameter", parameter},
            {"value", value},                   {"method", method}, {"samples", samples},
            {"worst_witness", worst_witness}};
  }
};

// Outcome of one sampling campaign for an inequality LHS - RHS >= 0.
struct InequalityReport {
  std::string name;
  std::string domain_description;
  long n_samples = 0;
  double min_gap = 0.0;
  bool violated = false;
  nlohmann::json witness;

  nlohmann::json to_json() const {
    return {{"schema_version", kSchemaVersion},
            {"name", name},
            {"domain", domain_description},
            {"n_samples", n_samples},
            {"min_gap", min_gap},
            {"violated", violated},
            {"witness", witness}};
  }
};

// Campaign configuration shared by the verify/constants commands.
struct CampaignConfig {
  std::string name;
  double R = 1.0;
  double k = 2.0;
  int n = 2;
  long samples = 10000;
  std::uint64_t seed = 7;
  double tolerance = 1e-9;

  static CampaignConfig from_json(const nlohmann::json& j) {
    CampaignConfig c;
    if (j.contains("name")) c.name = j["name"].get<std::string>();
    if (j.contains("R")) c.R = j["R"].get<double>();
    if (j.contains("k")) c.k = j["k"].get<double>();
    if (j.contains("n")) c.n = j["n"].get<int>();
    if (j.contains("samples")) c.samples = j["samples"].get<long>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tolerance")) c.tolerance = j["tolerance"].get<double>();
    return c;
  }

  nlohmann::json to_json() const {
    return {{"name", name}, {"R", R},       {"k", k},
            {"n", n},       {"samples", samples}, {"seed", seed},
            {"tolerance", tolerance}};
  }
};

// Canonical (key-sorted, fixed indent) dump used for every report file, so a
// rerun with the same config is byte-identical.
std::string canonical_dump(const nlohmann::json& j);
void write_report(const std::string& path, const nlohmann::json& j);

}  // namespace mintool
