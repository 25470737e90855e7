#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "offtrail/controller.hpp"
#include "offtrail/terrain.hpp"
#include "offtrail/topomap.hpp"
#include "offtrail/traversability.hpp"

namespace offtrail {

struct InitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// R x R cells of size lambda centered on the start position. Used only for
// frontier bookkeeping, never for motion planning.
struct ExplorationGrid {
  Vec2 center;
  int R = 10;
  double lambda = 2.0;

  Vec2 origin() const {
    return {center.x - R * lambda / 2.0, center.y - R * lambda / 2.0};
  }
  bool in_zone(const Vec2& p) const {
    const Vec2 o = origin();
    return p.x >= o.x && p.x < o.x + R * lambda && p.y >= o.y &&
           p.y < o.y + R * lambda;
  }
  // Cell indices in [0, R); only valid for in-zone points.
  std::pair<int, int> cell_of(const Vec2& p) const {
    const Vec2 o = origin();
    return {static_cast<int>(std::floor((p.x - o.x) / lambda)),
            static_cast<int>(std::floor((p.y - o.y) / lambda))};
  }
  Vec2 cell_center(int i, int j) const {
    const Vec2 o = origin();
    return {o.x + (i + 0.5) * lambda, o.y + (j + 0.5) * lambda};
  }
};

struct ExplorationStatus {
  int cells_total = 0;
  int visited_cells = 0;
  int reachable_frontiers = 0;
  double distance_traveled = 0.0;
  std::vector<InterventionEvent> interventions;
  std::vector<std::pair<int, int>> unreached_cells;
  uint64_t ticks = 0;
  bool complete = false;
};

// Occupied cells, derived from the current visited nodes.
std::set<std::pair<int, int>> occupied_cells(const TopoMap& map,
                                             const ExplorationGrid& grid);

// Recomputes frontier cells from scratch, removes stale frontier nodes,
// creates missing ones at cell centers and neighbor-connects them.
// Returns the ids of all current frontier nodes.
std::vector<NodeId> compute_frontiers(TopoMap& map,
                                      const ExplorationGrid& grid,
                                      double r, TravPredictor& predictor);

// Minimum-length path over Traversable edges only; A* with the straight-
// line heuristic, ties broken toward lower node ids.
std::optional<std::vector<NodeId>> plan_astar(const TopoMap& map, NodeId from,
                                              NodeId to);

// Every node reachable from `from` over Traversable edges.
std::set<NodeId> reachable_set(const TopoMap& map, NodeId from);

enum class FrontierPolicy { KinematicTime, Euclidean };

// The reachable frontier minimizing the policy's cost from the robot pose.
std::optional<NodeId> select_frontier(const TopoMap& map, const Pose& robot,
                                      NodeId robot_node,
                                      const std::vector<NodeId>& frontiers,
                                      const SkidSteerParams& params,
                                      FrontierPolicy policy);

struct ExploreParams {
  uint64_t seed = 0;
  double d = 1.0;
  double r = 3.0;
  double lambda = 2.0;
  int R = 10;
  double fov_deg = 100.0;
  double p_fp = 0.0;
  double p_fn = 0.0;
  SkidSteerParams skid;
  uint64_t max_ticks = 200000;
  FrontierPolicy policy = FrontierPolicy::KinematicTime;
};

struct ExploreResult {
  TopoMap map;
  ExplorationGrid grid;
  ExplorationStatus status;
  std::vector<TrajectoryRow> trajectory;
  // First verdict emitted per edge, and the matching ground truth, for
  // confusion reporting.
  std::map<TopoMap::EdgeKey, EdgeState> predicted;
  std::map<TopoMap::EdgeKey, EdgeState> oracle_truth;
};

// Frontier exploration until no reachable frontier remains (or the tick
// budget runs out, in which case complete stays false). Throws InitError
// when the start pose is unsafe.
ExploreResult explore_loop(const TerrainWorld& world,
                           const ExploreParams& params);

}  // namespace offtrail
