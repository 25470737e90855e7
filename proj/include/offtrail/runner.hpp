#pragma once

#include <string>
#include <vector>

#include "offtrail/config.hpp"
#include "offtrail/io.hpp"

namespace offtrail {

struct RunArtifacts {
  SummaryRow summary;
  ConfusionRow confusion;
  ExploreResult result;
};

// Builds the world (fixture or procedural), runs the exploration loop and
// returns everything the exporters need. Throws InitError / ParamError /
// ConfigError like its parts.
RunArtifacts execute_run(const RunConfig& cfg);

// execute_run + writes map.json, trajectory.csv, summary.csv,
// confusion.csv and map.svg into out_dir.
RunArtifacts run_and_export(const RunConfig& cfg, const std::string& out_dir);

struct SweepSpec {
  std::vector<double> p_fps{0.0};
  std::vector<double> p_fns{0.0};
  std::vector<uint64_t> seeds{0};
  int jobs = 1;
  size_t cap = 1000;
};

struct SweepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cartesian product of the spec over the base config; runs in parallel
// and writes aggregated summary.csv and confusion.csv into out_dir.
std::vector<SummaryRow> run_sweep(const RunConfig& base, const SweepSpec& spec,
                                  const std::string& out_dir);

}  // namespace offtrail
