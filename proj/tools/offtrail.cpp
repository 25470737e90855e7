#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "offtrail/runner.hpp"

namespace {

using namespace offtrail;

std::vector<std::pair<std::string, std::string>> parse_extra_overrides(
    const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> kv;
  for (size_t i = 0; i < extras.size(); ++i) {
    std::string arg = extras[i];
    if (arg.rfind("--", 0) != 0)
      throw ConfigError("unexpected argument '" + arg + "'");
    arg = arg.substr(2);
    const auto eq = arg.find('=');
    if (eq != std::string::npos) {
      kv.emplace_back(arg.substr(0, eq), arg.substr(eq + 1));
    } else {
      if (i + 1 >= extras.size())
        throw ConfigError("missing value for override --" + arg);
      kv.emplace_back(arg, extras[++i]);
    }
  }
  return kv;
}

RunConfig resolve_config(const std::string& config_path,
                         const std::vector<std::string>& extras) {
  RunConfig cfg =
      config_path.empty() ? RunConfig{} : load_config_file(config_path);
  apply_overrides(cfg, parse_extra_overrides(extras));
  if (const char* env_seed = std::getenv("OFFTRAIL_SEED")) {
    apply_overrides(cfg, {{"seed", env_seed}});
  }
  validate_config(cfg);
  return cfg;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<uint64_t> parse_seed_list(const std::string& s) {
  std::vector<uint64_t> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto dash = item.find("..");
    if (dash != std::string::npos) {
      const uint64_t lo = std::stoull(item.substr(0, dash));
      const uint64_t hi = std::stoull(item.substr(dash + 2));
      for (uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(std::stoull(item));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"offtrail: traversability-aware topological exploration simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::string map_path, traj_path, svg_path, world_path;
  std::string p_fp_list = "0", p_fn_list = "0", seed_list = "0";
  int jobs = 1;
  size_t cap = 1000;

  auto* run = app.add_subcommand("run", "single seeded exploration run");
  run->add_option("--config", config_path, "config file (key = value)");
  run->add_option("--out", out_dir, "output directory");
  run->allow_extras();

  auto* sweep = app.add_subcommand("sweep", "batch runs over p_fp x p_fn x seeds");
  sweep->add_option("--config", config_path, "base config file");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--p-fp", p_fp_list, "comma list of false-positive rates");
  sweep->add_option("--p-fn", p_fn_list, "comma list of false-negative rates");
  sweep->add_option("--seeds", seed_list, "comma list or lo..hi range");
  sweep->add_option("--jobs", jobs, "parallel workers");
  sweep->add_option("--cap", cap, "max number of runs");
  sweep->allow_extras();

  auto* render = app.add_subcommand("render", "render an exported map to SVG");
  render->add_option("--map", map_path, "map.json")->required();
  render->add_option("--trajectory", traj_path, "trajectory.csv");
  render->add_option("--world", world_path, "world fixture for the terrain layer");
  render->add_option("--svg", svg_path, "output svg")->required();

  auto* validate = app.add_subcommand("validate-config", "parse and echo a config");
  validate->add_option("--config", config_path, "config file");
  validate->allow_extras();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      RunConfig cfg;
      try {
        cfg = resolve_config(config_path, run->remaining());
      } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
      }
      RunArtifacts art;
      try {
        art = run_and_export(cfg, out_dir);
      } catch (const InitError& e) {
        std::cerr << "init error: " << e.what() << "\n";
        return 2;
      }
      std::cout << "cells " << art.summary.cells_visited << "/"
                << art.summary.cells_total << ", distance "
                << art.summary.distance_m << " m, interventions "
                << (art.summary.n_traversability_errors +
                    art.summary.n_controller_errors + art.summary.n_timeouts)
                << ", complete " << (art.summary.complete ? "yes" : "no")
                << "\n";
      return art.summary.complete ? 0 : 3;
    }
    if (sweep->parsed()) {
      RunConfig cfg;
      try {
        cfg = resolve_config(config_path, sweep->remaining());
      } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
      }
      SweepSpec spec;
      spec.p_fps = parse_double_list(p_fp_list);
      spec.p_fns = parse_double_list(p_fn_list);
      spec.seeds = parse_seed_list(seed_list);
      spec.jobs = jobs;
      spec.cap = cap;
      try {
        const auto rows = run_sweep(cfg, spec, out_dir);
        std::cout << rows.size() << " runs -> " << out_dir << "/summary.csv\n";
      } catch (const SweepError& e) {
        std::cerr << "sweep error: " << e.what() << "\n";
        return 1;
      }
      return 0;
    }
    if (render->parsed()) {
      try {
        const MapData map = map_data_from_json(read_file(map_path));
        std::vector<TrajectoryRow> traj;
        if (!traj_path.empty())
          traj = trajectory_from_csv(read_file(traj_path));
        TerrainWorld world;
        const TerrainWorld* world_ptr = nullptr;
        if (!world_path.empty()) {
          world = load_world_file(world_path);
          world_ptr = &world;
        }
        write_file(svg_path, render_svg(map, traj, world_ptr));
      } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 1;
      }
      return 0;
    }
    if (validate->parsed()) {
      try {
        const RunConfig cfg = resolve_config(config_path, validate->remaining());
        std::cout << config_to_text(cfg)
                  << "config_hash = " << config_hash(cfg) << "\n";
      } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
