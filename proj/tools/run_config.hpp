#pragma once

#include "barrier/errors.hpp"
#include "barrier/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace barrier::cli {

// Validation failure naming the offending field.
class ConfigError : public DomainError {
 public:
  ConfigError(const std::string& field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct EnsembleSettings {
  std::string kind = "A";  // A, B, C, c, xi, lax
  int dim = 301;
  int realisations = 300;
  double alpha = 0.5;  // lax only: 1/2 or 1/(2 dim)
  int order = 0;       // P_n order for `ensemble`, highest order for `stats`
};

struct NumericsSettings {
  int n_terms = 0;        // 0 = default
  int n_evanescent = -1;  // -1 = default
  double dk = 0.05;
  int bins = 100;
  double s_max = 4.0;
  double l_max = 8.0;
};

struct RunConfig {
  std::string command;
  std::optional<Geometry> geometry;
  EnsembleSettings ensemble;
  NumericsSettings numerics;
  std::uint64_t seed = 1;
  std::string output_dir;  // empty = <output root>/<command>-<config hash>

  // kplus, smatrix
  double k = 0.0;
  double b = 1.0;
  std::string alpha_sweep;  // "lo:hi:step", inclusive
  bool corrected = true;
  bool convergence = false;  // kplus: also write the truncation-error table
  std::string matrix = "b";  // smatrix: exact, physical, b, paraxial

  // spectrum
  double k_min = 0.0;
  double k_max = 0.0;

  // trace
  std::vector<std::pair<int, int>> pairs;  // (M, N) for the Q-matrix check
  std::vector<double> h_ratios;
  std::vector<int> r_dims{600};
  double l_step = 0.01;

  // stats: read levels instead of sampling an ensemble; trace: length spectrum input
  std::string levels;
  double tau_max = 3.0;
};

struct AlphaSweep {
  double lo = 0.0, hi = 0.0, step = 0.0;
  std::vector<double> values() const;
};

AlphaSweep parse_alpha_sweep(const std::string& text);
std::vector<std::pair<int, int>> parse_pairs(const std::string& text);  // "2/1,3/1"

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

// Every field is checked against the needs of c.command; throws ConfigError.
void validate(const RunConfig& c);

// FNV-1a of the canonical JSON echo, 16 hex digits.
std::string config_hash(const RunConfig& c);

// $BARRIER_OUTPUT_ROOT, or "barrier_runs".
std::string default_output_root();
std::string resolve_output_dir(const RunConfig& c);

}  // namespace barrier::cli
