#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "offtrail/rng.hpp"
#include "offtrail/terrain.hpp"
#include "offtrail/traversability.hpp"

using namespace offtrail;

namespace {

constexpr double kFov = 100.0 * M_PI / 180.0;
constexpr double kRho = 10.0;
constexpr double kFootprint = 0.4;

TerrainWorld flat_world(std::vector<Obstacle> obstacles, double extent = 30.0) {
  TerrainWorld w;
  w.seed = 1;
  w.params.bounds = {-extent / 2, -extent / 2, extent / 2, extent / 2};
  w.params.amplitude = 0.0;
  w.obstacles = std::move(obstacles);
  w.build_heightmap();
  w.finalize();
  return w;
}

Node visited(NodeId id, const Pose& pose) {
  Node n;
  n.id = id;
  n.pose = pose;
  n.kind = NodeKind::Visited;
  n.view = ViewRecord{pose.heading, kFov, kRho};
  return n;
}

Node frontier(NodeId id, const Vec2& p) {
  Node n;
  n.id = id;
  n.pose = Pose{p, 0.0};
  n.kind = NodeKind::Frontier;
  return n;
}

Sector front_sector(double heading = 0.0) {
  return {heading, kFov / 2.0, kRho};
}

}  // namespace

TEST_CASE("image_trav: straight safe path dead ahead") {
  const TerrainWorld w = flat_world({});
  std::vector<Vec2> witness;
  CHECK(image_trav(w, {0, 0}, front_sector(), {2, 0}, kFootprint, &witness) ==
        ImageTrav::Reachable);
  CHECK(witness.size() >= 2);
}

TEST_CASE("image_trav: goal outside the sector is not evaluable") {
  const TerrainWorld w = flat_world({});
  CHECK(image_trav(w, {0, 0}, front_sector(), {-2, 0}, kFootprint) ==
        ImageTrav::OutsideSector);
  CHECK(image_trav(w, {0, 0}, front_sector(), {11, 0}, kFootprint) ==
        ImageTrav::OutsideSector);  // beyond range
}

TEST_CASE("image_trav: detour inside vs outside the sector") {
  // Short wall: a detour around it stays inside the 50-degree half-angle.
  const TerrainWorld around =
      flat_world({make_tree({2, -1}, {2, 1}, 0.3, 1.0, 0.5)});
  std::vector<Vec2> witness;
  CHECK(image_trav(around, {0, 0}, front_sector(), {4, 0}, kFootprint,
                   &witness) == ImageTrav::Reachable);
  // Every witness waypoint must be in-sector and safe.
  const Sector s = front_sector();
  for (const Vec2& p : witness) {
    CHECK(s.contains({0, 0}, p));
    CHECK(around.is_safe(p, kFootprint));
  }

  // Long wall: the only way around leaves the sector footprint.
  const TerrainWorld blocked =
      flat_world({make_tree({2, -6}, {2, 6}, 0.3, 1.0, 0.5)});
  CHECK(image_trav(blocked, {0, 0}, front_sector(), {4, 0}, kFootprint) ==
        ImageTrav::Blocked);
}

TEST_CASE("edge oracle: visited-to-frontier in open ground is Traversable") {
  const TerrainWorld w = flat_world({});
  const Node a = visited(0, Pose({0, 0}, 0));
  const Node f = frontier(1, {2, 0});
  CHECK(edge_trav_oracle(w, a, f, kFootprint) == EdgeState::Traversable);
}

TEST_CASE("edge oracle: two frontiers are Unknown") {
  const TerrainWorld w = flat_world({});
  CHECK(edge_trav_oracle(w, frontier(0, {0, 0}), frontier(1, {2, 0}),
                         kFootprint) == EdgeState::Unknown);
}

TEST_CASE("edge oracle: mutually rear-facing nodes are Unknown") {
  const TerrainWorld w = flat_world({});
  // A faces away from B and vice versa; both rear gaps apply.
  const Node a = visited(0, Pose({0, 0}, M_PI));
  const Node b = visited(1, Pose({2, 0}, 0));
  CHECK(edge_trav_oracle(w, a, b, kFootprint) == EdgeState::Unknown);
}

TEST_CASE("edge oracle: occluded sight is Unknown, visible-but-blocked is Untraversable") {
  // Tall rock hides B from A and A from B -> Unknown.
  const TerrainWorld occluded =
      flat_world({make_rock({1.5, 0}, 0.5, 0.9, 0.5)});
  const Node a = visited(0, Pose({0, 0}, 0));
  const Node b = visited(1, Pose({3, 0}, M_PI));
  CHECK(edge_trav_oracle(occluded, a, b, kFootprint) == EdgeState::Unknown);

  // Water is visible through but unsafe: no in-sector path -> Untraversable.
  const TerrainWorld water = flat_world(
      {make_water({{1.5, -8}, {2.0, -8}, {2.0, 8}, {1.5, 8}})});
  const Node c = visited(0, Pose({0, 0}, 0));
  const Node d = visited(1, Pose({3.5, 0}, M_PI));
  CHECK(edge_trav_oracle(water, c, d, kFootprint) == EdgeState::Untraversable);
}

TEST_CASE("edge oracle is symmetric over random pairs") {
  WorldParams p;
  p.tree_density = 1.5;
  p.rock_density = 0.5;
  p.water_density = 0.8;
  const TerrainWorld w = generate_world(21, p);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const Pose pa{{uniform_range(rng, -10, 10), uniform_range(rng, -10, 10)},
                  uniform_range(rng, -M_PI, M_PI)};
    const Pose pb{{uniform_range(rng, -10, 10), uniform_range(rng, -10, 10)},
                  uniform_range(rng, -M_PI, M_PI)};
    const bool fa = bernoulli(rng, 0.3);
    const bool fb = bernoulli(rng, 0.3);
    const Node a = fa ? frontier(0, pa.position) : visited(0, pa);
    const Node b = fb ? frontier(1, pb.position) : visited(1, pb);
    CHECK(edge_trav_oracle(w, a, b, kFootprint) ==
          edge_trav_oracle(w, b, a, kFootprint));
  }
}

TEST_CASE("noise: zero rates pass through, Unknown always passes through") {
  for (uint64_t k = 0; k < 200; ++k) {
    CHECK(predict_edge_noisy(EdgeState::Traversable, 0, 0, k) ==
          EdgeState::Traversable);
    CHECK(predict_edge_noisy(EdgeState::Untraversable, 0, 0, k) ==
          EdgeState::Untraversable);
    CHECK(predict_edge_noisy(EdgeState::Unknown, 0.9, 0.9, k) ==
          EdgeState::Unknown);
  }
}

TEST_CASE("noise: deterministic per stream key and symmetric in endpoints") {
  const Vec2 a{1.25, -3.5}, b{4.0, 2.0};
  CHECK(edge_stream_key(77, a, b) == edge_stream_key(77, b, a));
  CHECK(edge_stream_key(77, a, b) != edge_stream_key(78, a, b));
  for (uint64_t k = 0; k < 100; ++k) {
    const EdgeState once = predict_edge_noisy(EdgeState::Traversable, 0.3, 0.3, k);
    CHECK(predict_edge_noisy(EdgeState::Traversable, 0.3, 0.3, k) == once);
  }
}

TEST_CASE("noise: empirical flip rates approach the configured rates") {
  std::mt19937_64 rng(3);
  int flips_fn = 0, flips_fp = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Vec2 a{uniform_range(rng, -50, 50), uniform_range(rng, -50, 50)};
    const Vec2 b{uniform_range(rng, -50, 50), uniform_range(rng, -50, 50)};
    const uint64_t key = edge_stream_key(1, a, b);
    if (predict_edge_noisy(EdgeState::Traversable, 0.1, 0.2, key) ==
        EdgeState::Untraversable)
      ++flips_fn;
    if (predict_edge_noisy(EdgeState::Untraversable, 0.1, 0.2, key) ==
        EdgeState::Traversable)
      ++flips_fp;
  }
  CHECK(std::abs(flips_fn / double(n) - 0.2) < 0.01);
  CHECK(std::abs(flips_fp / double(n) - 0.1) < 0.01);
}

TEST_CASE("confusion matrix conventions") {
  using EK = TopoMap::EdgeKey;
  std::map<EK, EdgeState> oracle{
      {{0, 1}, EdgeState::Traversable},   {{0, 2}, EdgeState::Traversable},
      {{0, 3}, EdgeState::Untraversable}, {{0, 4}, EdgeState::Untraversable},
      {{0, 5}, EdgeState::Unknown}};
  std::map<EK, EdgeState> perfect = oracle;
  const ConfusionMatrix m0 = evaluate_confusion(perfect, oracle);
  CHECK(m0.fp == 0);
  CHECK(m0.fn == 0);
  CHECK(m0.total() == 4);  // Unknown ground truth excluded

  std::map<EK, EdgeState> always;
  for (const auto& [k, v] : oracle) always[k] = EdgeState::Traversable;
  const ConfusionMatrix m1 = evaluate_confusion(always, oracle);
  CHECK(m1.fn == 0);
  CHECK(m1.fp == 2);
  CHECK(m1.tp == 2);
  CHECK(m1.tn == 0);

  const std::string table = confusion_table(m1);
  CHECK(table.find("2") != std::string::npos);
}
