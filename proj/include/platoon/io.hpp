#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "platoon/distributed.hpp"

namespace platoon {

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment configuration. `spec` holds the nominal disturbance box W0;
/// commands that need a concrete box use `scaled_spec()` (W0 times `lambda`).
struct ExperimentConfig {
  PlatoonSpec spec;
  double lambda = 1.0;
  int kappa = 10;
  double alpha = 0.0;
  double precision = 0.01;
  double lambda_cap = 8.0;
  double beta = 0.5;
  double bias = 0.8;
  std::uint64_t seed = 1;
  int horizon = 120;
  int workers = 1;
  std::string architecture = "centralized";
  EffortCost effort = EffortCost::Quadratic;
  std::vector<int> n_list;
  std::vector<DensityPoint> density_grid;
  std::optional<Vec> initial_state;

  PlatoonSpec scaled_spec() const { return spec.with_disturbance_scale(lambda); }
  RciOptions rci_options() const;
  DistributedOptions distributed_options() const;
  LambdaSearchOptions search_options() const;
};

/// Accepted layout:
///   {"platoon": {"followers": N, "vehicle_length": l | "vehicle_lengths": [...],
///                "length_bound": L, "speed": [vmin, vmax], "dt": 0.5, "collision_margin": 0,
///                "control": [lo, hi] | "controls": [[lo, hi], ...],
///                "disturbance": {"position": [lo, hi], "velocity": [lo, hi]} | "disturbances": [...]},
///    "lambda", "kappa", "alpha", "precision", "lambda_cap", "beta", "bias", "seed",
///    "horizon", "workers", "architecture", "effort", "n_list": [...],
///    "density_grid": [{"N": n, "L": l}, ...], "initial_state": [...]}
/// Disturbance intervals must be written out explicitly per channel.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

nlohmann::json to_json(const PlatoonSpec& spec);
PlatoonSpec spec_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j);

/// Matrices are stored row-major with explicit dimensions, next to kappa,
/// alpha and the state/input/disturbance sizes.
nlohmann::json to_json(const RciParameterization& param);
RciParameterization parameterization_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DistributedPolicy& policy);
DistributedPolicy distributed_policy_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace platoon
