#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "offtrail/explore.hpp"
#include "offtrail/terrain.hpp"

namespace offtrail {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value run configuration. Every key in the file can also be
// given as a --key value override on the command line.
struct RunConfig {
  uint64_t seed = 0;

  // World source: fixture file wins over procedural generation.
  std::string world_fixture;
  double world_extent = 24.0;  // square bounds, centered on origin
  double amplitude = 0.5;
  double feature_size = 6.0;
  double tree_density = 0.0;
  double rock_density = 0.0;
  double water_density = 0.0;
  double gt_resolution = 0.25;
  double h_cell = 0.5;
  double slope_max_deg = 30.0;
  double h_occlude = 0.5;
  double rho = 10.0;

  double d = 1.0;
  double r = 3.0;
  double lambda = 2.0;
  int R = 10;
  double fov_deg = 100.0;
  double footprint = 0.4;
  double p_fp = 0.0;
  double p_fn = 0.0;
  std::string policy = "kinematic";  // or "euclidean"
  uint64_t max_ticks = 200000;

  double v_max = 1.0;
  double w_max = 1.0;
  double tick = 0.2;
  int seq_len = 5;
  double k_w = 2.0;
  double goal_tol = 0.3;
  double timeout_factor = 3.0;
};

// Parses "key = value" lines ('#' comments). Throws ConfigError with a
// line and key diagnostic.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Applies "key=value" overrides on top of a parsed config.
void apply_overrides(RunConfig& cfg,
                     const std::vector<std::pair<std::string, std::string>>& kv);

// Throws ConfigError naming the violated invariant.
void validate_config(const RunConfig& cfg);

// Canonical serialization, used for the reproducibility hash.
std::string config_to_text(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

WorldParams world_params_from_config(const RunConfig& cfg);
ExploreParams explore_params_from_config(const RunConfig& cfg);

}  // namespace offtrail
