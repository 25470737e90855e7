#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "offtrail/rng.hpp"
#include "offtrail/terrain.hpp"

using namespace offtrail;

namespace {

// Flat world helper: explicit obstacles, no heightmap noise.
TerrainWorld flat_world(std::vector<Obstacle> obstacles, double extent = 20.0) {
  TerrainWorld w;
  w.seed = 1;
  w.params.bounds = {-extent / 2, -extent / 2, extent / 2, extent / 2};
  w.params.amplitude = 0.0;
  w.obstacles = std::move(obstacles);
  w.build_heightmap();
  w.finalize();
  return w;
}

}  // namespace

TEST_CASE("generate_world is deterministic in (seed, params)") {
  WorldParams p;
  p.tree_density = 1.0;
  p.rock_density = 0.5;
  p.water_density = 0.5;
  const TerrainWorld a = generate_world(7, p);
  const TerrainWorld b = generate_world(7, p);
  CHECK(world_to_json(a) == world_to_json(b));
  const TerrainWorld c = generate_world(8, p);
  CHECK(world_to_json(a) != world_to_json(c));
}

TEST_CASE("obstacle-free gentle world is safe everywhere in bounds") {
  WorldParams p;  // default amplitude 0.5, feature 6: slopes well under 30 deg
  const TerrainWorld w = generate_world(7, p);
  for (double x = -10; x <= 10; x += 1.0)
    for (double y = -10; y <= 10; y += 1.0)
      CHECK(w.is_safe({x, y}, 0.3));
  CHECK_FALSE(w.is_safe({12.5, 0.0}, 0.3));   // outside bounds
  CHECK_FALSE(w.is_safe({11.9, 0.0}, 0.3));   // disc pokes out of bounds
}

TEST_CASE("water polygons are unsafe, including a footprint margin") {
  const Polygon pond{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  const TerrainWorld w = flat_world({make_water(pond)});
  CHECK_FALSE(w.is_safe({0, 0}, 0.3));       // inside
  CHECK_FALSE(w.is_safe({1.2, 0}, 0.3));     // 0.2 from boundary < footprint
  CHECK(w.is_safe({1.5, 0}, 0.3));           // 0.5 from boundary > footprint
  CHECK_FALSE(w.hits_solid({0, 0}, 0.3));    // water never blocks motion
}

TEST_CASE("fallen tree clearance follows disc-segment distance") {
  const TerrainWorld w =
      flat_world({make_tree({0, -5}, {0, 5}, 0.25, 1.0, 0.5)});
  // 0.2 m gap between footprint edge and tree edge requirement:
  // center at 0.45 from the axis leaves 0.2 m < 0.3 footprint.
  CHECK_FALSE(w.is_safe({0.45, 0}, 0.3));
  CHECK(w.is_safe({0.9, 0}, 0.3));
  CHECK(w.hits_solid({0.45, 0}, 0.3));
  CHECK_FALSE(w.hits_solid({0.9, 0}, 0.3));
}

TEST_CASE("monotone footprint: safe at r1 implies safe at r2 <= r1") {
  WorldParams p;
  p.tree_density = 1.5;
  p.rock_density = 0.5;
  p.water_density = 0.8;
  const TerrainWorld w = generate_world(11, p);
  std::mt19937_64 rng(42);
  int safe_large = 0;
  for (int i = 0; i < 2000; ++i) {
    const Vec2 pt{uniform_range(rng, -11, 11), uniform_range(rng, -11, 11)};
    if (w.is_safe(pt, 0.6)) {
      ++safe_large;
      CHECK(w.is_safe(pt, 0.3));
      CHECK(w.is_safe(pt, 0.0));
    }
  }
  CHECK(safe_large > 100);  // the property was actually exercised
}

TEST_CASE("steep slopes are unsafe; flat worlds never are") {
  // Loaded rather than generated: the generator would reject a start pose
  // surrounded by slopes this steep.
  const TerrainWorld w = world_from_json(R"({
    "schema_version": 1, "seed": 5,
    "bounds": {"xmin": -12, "ymin": -12, "xmax": 12, "ymax": 12},
    "amplitude": 6.0, "feature_size": 2.0,
    "start": {"x": 0, "y": 0}, "obstacles": []
  })");
  const double tan_max = std::tan(w.params.slope_max_deg * M_PI / 180.0);
  int unsafe = 0;
  for (double x = -10; x <= 10; x += 0.5) {
    for (double y = -10; y <= 10; y += 0.5) {
      const bool grad_ok = w.height_grad({x, y}).norm() <= tan_max;
      CHECK(w.is_safe({x, y}, 0.0) == grad_ok);
      if (!grad_ok) ++unsafe;
    }
  }
  CHECK(unsafe > 0);

  const TerrainWorld flat = flat_world({});
  CHECK(flat.height_at({1.2, 3.4}) == 0.0);
  CHECK(flat.height_grad({1.2, 3.4}).norm() == 0.0);
}

TEST_CASE("sight_clear: symmetry, range cutoff, occlusion rules") {
  const TerrainWorld empty = flat_world({}, 30.0);
  CHECK(empty.sight_clear({0, 0}, {0, 0}));
  CHECK(empty.sight_clear({0, 0}, {9.9, 0}));
  CHECK_FALSE(empty.sight_clear({0, 0}, {10.1, 0}));  // beyond rho

  // Tall rock occludes; short rock and water do not.
  const TerrainWorld tall =
      flat_world({make_rock({5, 0}, 0.5, 0.9, 0.5)}, 30.0);
  CHECK_FALSE(tall.sight_clear({0, 0}, {9, 0}));
  CHECK(tall.sight_clear({0, 3}, {9, 3}));
  const TerrainWorld low = flat_world({make_rock({5, 0}, 0.5, 0.3, 0.5)}, 30.0);
  CHECK(low.sight_clear({0, 0}, {9, 0}));
  const TerrainWorld pond = flat_world(
      {make_water({{4, -1}, {6, -1}, {6, 1}, {4, 1}})}, 30.0);
  CHECK(pond.sight_clear({0, 0}, {9, 0}));

  WorldParams p;
  p.tree_density = 1.5;
  p.rock_density = 1.0;
  const TerrainWorld w = generate_world(13, p);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const Vec2 a{uniform_range(rng, -11, 11), uniform_range(rng, -11, 11)};
    const Vec2 b{uniform_range(rng, -11, 11), uniform_range(rng, -11, 11)};
    CHECK(w.sight_clear(a, b) == w.sight_clear(b, a));
  }
}

TEST_CASE("safe_cell matches is_safe at the cell center") {
  WorldParams p;
  p.tree_density = 1.0;
  p.water_density = 0.5;
  const TerrainWorld w = generate_world(3, p);
  for (int i = 0; i < w.raster_nx(); i += 7)
    for (int j = 0; j < w.raster_ny(); j += 7)
      CHECK(w.safe_cell(i, j, 0.4) == w.is_safe(w.cell_center(i, j), 0.4));
  CHECK_FALSE(w.safe_cell(-1, 0, 0.4));
  CHECK_FALSE(w.safe_cell(0, w.raster_ny(), 0.4));
}

TEST_CASE("generate_world rejects impossible parameter sets") {
  WorldParams tiny;
  tiny.bounds = {-0.5, -0.5, 0.5, 0.5};
  CHECK_THROWS_AS(generate_world(1, tiny), ParamError);

  WorldParams neg;
  neg.tree_density = -1.0;
  CHECK_THROWS_AS(generate_world(1, neg), ParamError);

  // Water pools of radius 2.5 cannot clear the 1.5 m start disc inside a
  // 4 m x 4 m world: rejection sampling must give up.
  WorldParams cramped;
  cramped.bounds = {-2, -2, 2, 2};
  cramped.water_density = 10.0;
  cramped.water_r_min = cramped.water_r_max = 2.5;
  CHECK_THROWS_AS(generate_world(1, cramped), ParamError);
}

TEST_CASE("world JSON round trip is exact") {
  WorldParams p;
  p.tree_density = 1.0;
  p.rock_density = 0.5;
  p.water_density = 0.5;
  const TerrainWorld w = generate_world(9, p);
  const std::string text = world_to_json(w);
  const TerrainWorld back = world_from_json(text);
  CHECK(world_to_json(back) == text);
  CHECK(back.start.x == w.start.x);
  CHECK(back.obstacles.size() == w.obstacles.size());
  // Heights rebuild identically from (seed, params).
  CHECK(back.height_at({1.5, -2.5}) == doctest::Approx(w.height_at({1.5, -2.5})).epsilon(1e-12));
}

TEST_CASE("fixture files load") {
  const TerrainWorld river = load_world_file(FIXTURE_DIR "/river_world.json");
  CHECK(river.obstacles.size() == 2);
  CHECK(river.is_safe({3.0, 0.0}, 0.4));       // the gap
  CHECK_FALSE(river.is_safe({0.0, 0.0}, 0.4)); // mid-river
  const TerrainWorld wall = load_world_file(FIXTURE_DIR "/walled_world.json");
  CHECK(wall.obstacles.size() == 1);
  CHECK_FALSE(wall.is_safe({5.0, 0.0}, 0.4));
}
