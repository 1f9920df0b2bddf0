#pragma once

#include "fraclap/energy.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/lattice.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fraclap {

// Schema problems, one "path: message" line per issue.
class ConfigError : public ParameterError {
public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

private:
  std::vector<std::string> issues_;
};

struct ShapeConfig {
  // interval {half_length}, rectangle {half_length, half_height}, disk {radius},
  // stadium {half_length, radius}
  std::string kind = "interval";
  std::map<std::string, double> params;
  bool operator==(const ShapeConfig&) const = default;
};

struct DomainConfig {
  int dim = 1;
  double h = 1.0 / 32.0;
  std::array<double, 2> box{1.125, 0.0}; // half-extents of the computational box
  ShapeConfig shape;
  bool operator==(const DomainConfig&) const = default;
};

struct NonlinearityConfig {
  // power {q}, resonant {lambda}, sum_of_powers {exponents, coefficients}
  std::string kind = "power";
  double q = 0.0;
  double lambda = 0.0;
  std::vector<double> exponents;
  std::vector<double> coefficients;
  bool operator==(const NonlinearityConfig&) const = default;
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string mode = "eigen"; // eigen | lens | polarize | verify-inequalities
  double p = 2.0;
  double s = 0.5;
  DomainConfig domain;
  std::optional<NonlinearityConfig> nonlinearity;
  double tol = 1e-8;
  int multistarts = 3;
  std::uint64_t seed = 0;
  int max_iter = 4000;
  double tau_rel = 1e-8;
  double touch_threshold = 2.0; // in units of h
  int a_sweep_half_steps = 8;
  int threads = 0; // 0: OpenMP default
  std::string kernel_cache;
  // polarize
  double a = 0.0;
  std::string input; // CSV grid function; empty means a seeded random one
  // verify-inequalities
  int samples = 10000;
  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);

Window build_box(const DomainConfig& d);
LatticeDomain build_domain(const DomainConfig& d);
// Requires a nonlinearity (lens mode): throws ParameterError otherwise.
Nonlinearity build_nonlinearity(const ExperimentConfig& c);

} // namespace fraclap
