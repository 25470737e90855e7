#include "offtrail/runner.hpp"

#include <atomic>
#include <filesystem>
#include <thread>

namespace offtrail {

namespace fs = std::filesystem;

RunArtifacts execute_run(const RunConfig& cfg) {
  validate_config(cfg);
  TerrainWorld world;
  if (!cfg.world_fixture.empty()) {
    world = load_world_file(cfg.world_fixture);
  } else {
    world = generate_world(cfg.seed, world_params_from_config(cfg));
  }

  RunArtifacts art;
  art.result = explore_loop(world, explore_params_from_config(cfg));

  const ExplorationStatus& st = art.result.status;
  SummaryRow& row = art.summary;
  row.seed = cfg.seed;
  row.p_fp = cfg.p_fp;
  row.p_fn = cfg.p_fn;
  row.cells_total = st.cells_total;
  row.cells_visited = st.visited_cells;
  row.distance_m = st.distance_traveled;
  for (const auto& ev : st.interventions) {
    switch (ev.cause) {
      case InterventionCause::TraversabilityError:
        ++row.n_traversability_errors;
        break;
      case InterventionCause::ControllerError:
        ++row.n_controller_errors;
        break;
      case InterventionCause::Timeout:
        ++row.n_timeouts;
        break;
    }
  }
  row.ticks = st.ticks;
  row.complete = st.complete;
  row.config_hash = config_hash(cfg);

  art.confusion.run_id = std::to_string(cfg.seed);
  art.confusion.p_fp = cfg.p_fp;
  art.confusion.p_fn = cfg.p_fn;
  art.confusion.matrix =
      evaluate_confusion(art.result.predicted, art.result.oracle_truth);
  return art;
}

RunArtifacts run_and_export(const RunConfig& cfg, const std::string& out_dir) {
  RunArtifacts art = execute_run(cfg);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_file((dir / "map.json").string(), map_to_json(art.result.map));
  write_file((dir / "trajectory.csv").string(),
             trajectory_to_csv(art.result.trajectory));
  write_file((dir / "summary.csv").string(), summary_to_csv({art.summary}));
  write_file((dir / "confusion.csv").string(),
             confusion_to_csv({art.confusion}));

  // Rebuild the world the same way for the terrain layer.
  TerrainWorld world = cfg.world_fixture.empty()
                           ? generate_world(cfg.seed, world_params_from_config(cfg))
                           : load_world_file(cfg.world_fixture);
  write_file((dir / "map.svg").string(),
             render_svg(map_data_from_map(art.result.map),
                        art.result.trajectory, &world));
  return art;
}

std::vector<SummaryRow> run_sweep(const RunConfig& base, const SweepSpec& spec,
                                  const std::string& out_dir) {
  struct Job {
    RunConfig cfg;
  };
  std::vector<Job> jobs;
  for (double p_fp : spec.p_fps)
    for (double p_fn : spec.p_fns)
      for (uint64_t seed : spec.seeds) {
        RunConfig cfg = base;
        cfg.p_fp = p_fp;
        cfg.p_fn = p_fn;
        cfg.seed = seed;
        jobs.push_back({cfg});
      }
  if (jobs.size() > spec.cap)
    throw SweepError("sweep size " + std::to_string(jobs.size()) +
                     " exceeds cap " + std::to_string(spec.cap));

  std::vector<SummaryRow> summaries(jobs.size());
  std::vector<ConfusionRow> confusions(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<size_t> next{0};
  const int workers = std::max(1, std::min<int>(spec.jobs, static_cast<int>(jobs.size())));
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        RunArtifacts art = execute_run(jobs[i].cfg);
        summaries[i] = art.summary;
        confusions[i] = art.confusion;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (size_t i = 0; i < jobs.size(); ++i)
    if (!errors[i].empty())
      throw SweepError("run seed=" + std::to_string(jobs[i].cfg.seed) +
                       " failed: " + errors[i]);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_file((dir / "summary.csv").string(), summary_to_csv(summaries));
  write_file((dir / "confusion.csv").string(), confusion_to_csv(confusions));
  return summaries;
}

}  // namespace offtrail
