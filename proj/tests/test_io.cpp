#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "offtrail/config.hpp"
#include "offtrail/io.hpp"
#include "offtrail/runner.hpp"

using namespace offtrail;
namespace fs = std::filesystem;

namespace {

constexpr double kFov = 100.0 * M_PI / 180.0;
constexpr double kRho = 10.0;

TopoMap small_map() {
  TopoMap map;
  const NodeId a = map.add_visited(Pose({0, 0}, 0.5), kFov, kRho, 0.25, std::nullopt);
  const NodeId b = map.add_visited(Pose({1, 0}, 0.1), kFov, kRho, 0.5, a);
  const NodeId f = map.add_frontier({2, 1});
  map.set_edge(b, f, EdgeState::Unknown);
  map.set_edge(a, f, EdgeState::Untraversable);
  return map;
}

struct TempDir {
  fs::path path;
  TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing: values, comments, diagnostics") {
  const RunConfig cfg = parse_config_text(
      "seed = 5\n"
      "world.tree_density = 0.5   # per 100 m^2\n"
      "\n"
      "run.p_fp = 0.25\n"
      "control.k_w = 3\n");
  CHECK(cfg.seed == 5);
  CHECK(cfg.tree_density == 0.5);
  CHECK(cfg.p_fp == 0.25);
  CHECK(cfg.k_w == 3.0);
  CHECK(cfg.r == 3.0);  // untouched defaults survive

  CHECK_THROWS_WITH_AS(parse_config_text("bogus = 1\n"),
                       "line 1: unknown key 'bogus'", ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("seed = 1\nnot a pair\n"),
                       "line 2: expected key = value", ConfigError);
  CHECK_THROWS_AS(parse_config_text("run.p_fp = banana\n"), ConfigError);
}

TEST_CASE("config overrides and validation") {
  RunConfig cfg;
  apply_overrides(cfg, {{"run.r", "4.5"}, {"run.policy", "euclidean"}});
  CHECK(cfg.r == 4.5);
  CHECK(cfg.policy == "euclidean");
  CHECK_THROWS_AS(apply_overrides(cfg, {{"nope", "1"}}), ConfigError);

  RunConfig bad;
  bad.r = 0.5;
  bad.d = 1.0;
  CHECK_THROWS_WITH_AS(validate_config(bad), "r must exceed d", ConfigError);
  bad.r = 3.0;
  bad.p_fp = 1.5;
  CHECK_THROWS_AS(validate_config(bad), ConfigError);
  bad.p_fp = 0.0;
  CHECK_NOTHROW(validate_config(bad));
}

TEST_CASE("config hash is stable and sensitive") {
  RunConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed = 1;
  CHECK(config_hash(a) != config_hash(b));
  // Canonical text round-trips through the parser.
  const RunConfig back = parse_config_text(config_to_text(a));
  CHECK(config_hash(back) == config_hash(a));
}

TEST_CASE("map JSON round trip preserves node and edge sets") {
  const TopoMap map = small_map();
  const std::string text = map_to_json(map);
  const MapData direct = map_data_from_map(map);
  const MapData parsed = map_data_from_json(text);
  REQUIRE(parsed.nodes.size() == direct.nodes.size());
  REQUIRE(parsed.edges.size() == direct.edges.size());
  for (size_t i = 0; i < parsed.nodes.size(); ++i) {
    CHECK(parsed.nodes[i].id == direct.nodes[i].id);
    CHECK(parsed.nodes[i].x == doctest::Approx(direct.nodes[i].x).epsilon(1e-12));
    CHECK(parsed.nodes[i].kind == direct.nodes[i].kind);
  }
  for (size_t i = 0; i < parsed.edges.size(); ++i) {
    CHECK(parsed.edges[i].a == direct.edges[i].a);
    CHECK(parsed.edges[i].b == direct.edges[i].b);
    CHECK(parsed.edges[i].state == direct.edges[i].state);
  }
  CHECK_THROWS_AS(map_data_from_json("{\"schema_version\": 99}"), SchemaError);
}

TEST_CASE("trajectory CSV round trip") {
  std::vector<TrajectoryRow> rows{
      {1, 0.1, 0.2, 0.3, 1.0, -0.5, ""},
      {2, 0.3, 0.25, 0.31, 0.8, 0.0, "blocked"},
      {3, 0.3, 0.25, 0.31, 0.0, 0.0, "timeout"},
  };
  const std::string csv = trajectory_to_csv(rows);
  CHECK(csv.rfind("tick,x,y,heading,v,w,event", 0) == 0);
  const auto back = trajectory_from_csv(csv);
  REQUIRE(back.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].tick == rows[i].tick);
    CHECK(back[i].x == doctest::Approx(rows[i].x).epsilon(1e-9));
    CHECK(back[i].event == rows[i].event);
  }
}

TEST_CASE("summary and confusion CSV headers") {
  SummaryRow s;
  s.seed = 3;
  s.complete = true;
  const std::string sc = summary_to_csv({s});
  CHECK(sc.rfind("seed,p_fp,p_fn,cells_total,cells_visited,distance_m,"
                 "n_traversability_errors,n_controller_errors,n_timeouts,"
                 "ticks,complete,config_hash",
                 0) == 0);
  ConfusionRow c;
  c.run_id = "r0";
  c.matrix = {10, 2, 8, 1};
  const std::string cc = confusion_to_csv({c});
  CHECK(cc.rfind("run_id,p_fp,p_fn,tp,fp,tn,fn", 0) == 0);
  CHECK(cc.find("10,2,8,1") != std::string::npos);
}

TEST_CASE("SVG rendering is deterministic and layered") {
  const TopoMap map = small_map();
  const TerrainWorld world = load_world_file(FIXTURE_DIR "/river_world.json");
  const MapData data = map_data_from_map(map);
  const std::vector<TrajectoryRow> traj{{1, 0, 0, 0, 1, 0, ""},
                                        {2, 0.2, 0, 0, 1, 0, ""}};
  const std::string a = render_svg(data, traj, &world);
  const std::string b = render_svg(data, traj, &world);
  CHECK(a == b);
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("polyline") != std::string::npos);  // trajectory overlay
  // Terrain layer renders even with an empty map.
  const std::string empty = render_svg(MapData{}, {}, &world);
  CHECK(empty.find("<svg") != std::string::npos);
  CHECK(empty.size() > 200);
  CHECK(render_svg(MapData{}, {}, nullptr) != empty);
}

TEST_CASE("run_and_export writes the full artifact set") {
  TempDir dir("offtrail_io_test_run");
  RunConfig cfg;  // obstacle-free default world
  cfg.seed = 2;
  const RunArtifacts art = run_and_export(cfg, dir.path.string());
  CHECK(art.summary.complete);
  CHECK(art.summary.cells_visited == 100);
  CHECK(art.summary.config_hash == config_hash(cfg));
  for (const char* name :
       {"map.json", "trajectory.csv", "summary.csv", "confusion.csv", "map.svg"})
    CHECK(fs::exists(dir.path / name));
}

TEST_CASE("sweep: cartesian product, aggregation and cap") {
  TempDir dir("offtrail_io_test_sweep");
  RunConfig base;
  SweepSpec spec;
  spec.p_fps = {0.0, 0.1};
  spec.p_fns = {0.0};
  spec.seeds = {1, 2};
  spec.jobs = 2;
  const auto rows = run_sweep(base, spec, dir.path.string());
  CHECK(rows.size() == 4);
  CHECK(fs::exists(dir.path / "summary.csv"));
  CHECK(fs::exists(dir.path / "confusion.csv"));
  // Rows are ordered deterministically regardless of worker scheduling.
  const auto rows2 = run_sweep(base, spec, dir.path.string());
  REQUIRE(rows2.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows2[i].seed == rows[i].seed);
    CHECK(rows2[i].p_fp == rows[i].p_fp);
    CHECK(rows2[i].distance_m == rows[i].distance_m);
  }

  SweepSpec big;
  big.seeds.resize(2000, 1);
  CHECK_THROWS_AS(run_sweep(base, big, dir.path.string()), SweepError);
}
