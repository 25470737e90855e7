#include "offtrail/explore.hpp"

#include <algorithm>
#include <queue>

namespace offtrail {

std::set<std::pair<int, int>> occupied_cells(const TopoMap& map,
                                             const ExplorationGrid& grid) {
  std::set<std::pair<int, int>> occ;
  for (NodeId id : map.active_nodes()) {
    const Node& n = map.node(id);
    if (n.kind != NodeKind::Visited) continue;
    if (!grid.in_zone(n.pose.position)) continue;
    occ.insert(grid.cell_of(n.pose.position));
  }
  return occ;
}

std::vector<NodeId> compute_frontiers(TopoMap& map,
                                      const ExplorationGrid& grid,
                                      double r, TravPredictor& predictor) {
  const auto occ = occupied_cells(map, grid);

  std::set<std::pair<int, int>> frontier_cells;
  static const int dx[4] = {1, -1, 0, 0};
  static const int dy[4] = {0, 0, 1, -1};
  for (const auto& [cx, cy] : occ) {
    for (int k = 0; k < 4; ++k) {
      const int nx = cx + dx[k];
      const int ny = cy + dy[k];
      if (nx < 0 || ny < 0 || nx >= grid.R || ny >= grid.R) continue;
      if (occ.count({nx, ny})) continue;
      frontier_cells.insert({nx, ny});
    }
  }

  // Frontiers are derived state: drop every node whose cell is no longer a
  // frontier cell, keep at most one per cell.
  std::map<std::pair<int, int>, NodeId> existing;
  for (NodeId id : map.active_nodes()) {
    const Node& n = map.node(id);
    if (n.kind != NodeKind::Frontier) continue;
    const Vec2 p = n.pose.position;
    const auto cell = grid.in_zone(p) ? grid.cell_of(p)
                                      : std::pair<int, int>{-1, -1};
    if (!frontier_cells.count(cell) || existing.count(cell)) {
      map.remove_node(id);
    } else {
      existing[cell] = id;
    }
  }

  std::vector<NodeId> frontiers;
  for (const auto& cell : frontier_cells) {
    auto it = existing.find(cell);
    if (it != existing.end()) {
      frontiers.push_back(it->second);
      continue;
    }
    const NodeId id = map.add_frontier(grid.cell_center(cell.first, cell.second));
    map.connect_neighbors(id, r, predictor);
    frontiers.push_back(id);
  }
  return frontiers;
}

namespace {

struct QueueEntry {
  double priority;
  double cost;
  NodeId id;
  bool operator>(const QueueEntry& o) const {
    if (priority != o.priority) return priority > o.priority;
    return id > o.id;
  }
};

}  // namespace

std::optional<std::vector<NodeId>> plan_astar(const TopoMap& map, NodeId from,
                                              NodeId to) {
  const Vec2 goal_pos = map.node(to).pose.position;
  std::map<NodeId, double> best;
  std::map<NodeId, NodeId> parent;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  best[from] = 0.0;
  open.push({dist(map.node(from).pose.position, goal_pos), 0.0, from});
  while (!open.empty()) {
    const QueueEntry cur = open.top();
    open.pop();
    if (cur.cost > best[cur.id] + 1e-15) continue;
    if (cur.id == to) break;
    const Node& n = map.node(cur.id);
    for (NodeId nb : n.adjacent) {
      const auto state = map.edge_state(cur.id, nb);
      if (state != EdgeState::Traversable) continue;
      const double edge_len =
          dist(n.pose.position, map.node(nb).pose.position);
      const double g = cur.cost + edge_len;
      auto it = best.find(nb);
      if (it == best.end() || g < it->second - 1e-15) {
        best[nb] = g;
        parent[nb] = cur.id;
        open.push({g + dist(map.node(nb).pose.position, goal_pos), g, nb});
      }
    }
  }
  if (!best.count(to)) return std::nullopt;
  std::vector<NodeId> path;
  NodeId cur = to;
  path.push_back(cur);
  while (cur != from) {
    cur = parent.at(cur);
    path.push_back(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::set<NodeId> reachable_set(const TopoMap& map, NodeId from) {
  std::set<NodeId> seen{from};
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    for (NodeId nb : map.node(cur).adjacent) {
      if (seen.count(nb)) continue;
      if (map.edge_state(cur, nb) != EdgeState::Traversable) continue;
      seen.insert(nb);
      stack.push_back(nb);
    }
  }
  return seen;
}

std::optional<NodeId> select_frontier(const TopoMap& map, const Pose& robot,
                                      NodeId robot_node,
                                      const std::vector<NodeId>& frontiers,
                                      const SkidSteerParams& params,
                                      FrontierPolicy policy) {
  const auto reachable = reachable_set(map, robot_node);
  std::optional<NodeId> best;
  double best_cost = 0.0;
  for (NodeId f : frontiers) {
    if (!reachable.count(f)) continue;
    const Vec2 pos = map.node(f).pose.position;
    const double cost = policy == FrontierPolicy::KinematicTime
                            ? kinematic_time(robot, pos, params)
                            : dist(robot.position, pos);
    if (!best || cost < best_cost - 1e-15 ||
        (cost < best_cost + 1e-15 && f < *best)) {
      best = f;
      best_cost = cost;
    }
  }
  return best;
}

namespace {

// Wraps the oracle + noise so every first verdict and its ground truth
// land in the run report.
class RecordingPredictor : public TravPredictor {
 public:
  RecordingPredictor(const TerrainWorld& world, double footprint, double p_fp,
                     double p_fn, uint64_t run_seed,
                     std::map<TopoMap::EdgeKey, EdgeState>& predicted,
                     std::map<TopoMap::EdgeKey, EdgeState>& truth)
      : world_(world),
        footprint_(footprint),
        p_fp_(p_fp),
        p_fn_(p_fn),
        run_seed_(run_seed),
        predicted_(predicted),
        truth_(truth) {}

  EdgeState predict_edge(const TopoMap& map, NodeId a, NodeId b) override {
    const EdgeState oracle =
        edge_trav_oracle(world_, map.node(a), map.node(b), footprint_);
    const uint64_t key = edge_stream_key(run_seed_, map.node(a).pose.position,
                                         map.node(b).pose.position);
    const EdgeState verdict = predict_edge_noisy(oracle, p_fp_, p_fn_, key);
    const auto ekey = TopoMap::edge_key(a, b);
    predicted_.emplace(ekey, verdict);
    truth_.emplace(ekey, oracle);
    return verdict;
  }

 private:
  const TerrainWorld& world_;
  double footprint_;
  double p_fp_, p_fn_;
  uint64_t run_seed_;
  std::map<TopoMap::EdgeKey, EdgeState>& predicted_;
  std::map<TopoMap::EdgeKey, EdgeState>& truth_;
};

}  // namespace

ExploreResult explore_loop(const TerrainWorld& world,
                           const ExploreParams& params) {
  const SkidSteerParams& skid = params.skid;
  if (!world.is_safe(world.start, skid.footprint_radius))
    throw InitError("start pose is not safe");

  ExploreResult res;
  res.grid = ExplorationGrid{world.start, params.R, params.lambda};
  const double fov = params.fov_deg * M_PI / 180.0;
  const double rho = world.rho();

  RecordingPredictor predictor(world, skid.footprint_radius, params.p_fp,
                               params.p_fn, params.seed, res.predicted,
                               res.oracle_truth);

  TopoMap& map = res.map;
  RobotState state;
  state.pose = Pose{world.start, world.start_heading};
  NodeId current = map.add_visited(state.pose, fov, rho,
                                   world.height_at(world.start), std::nullopt);
  state.last_safe_node = current;

  uint64_t tick = 0;
  DriveHooks hooks;
  hooks.insert_distance_d = params.d;
  hooks.on_node_insert = [&](const Pose& pose) {
    const NodeId id =
        map.add_visited(pose, fov, rho, world.height_at(pose.position), current);
    map.connect_neighbors(id, params.r, predictor);
    current = id;
    return id;
  };

  bool complete = false;
  // The goal frontier is sticky: re-selecting it after every single-edge hop
  // lets the cheapest-frontier rule flip between two frontiers on opposite
  // sides of the robot, which ping-pongs forever without covering new cells.
  std::optional<NodeId> committed;
  while (tick < params.max_ticks) {
    const auto frontiers = compute_frontiers(map, res.grid, params.r, predictor);
    if (committed &&
        std::find(frontiers.begin(), frontiers.end(), *committed) ==
            frontiers.end())
      committed.reset();
    const auto target =
        committed ? committed
                  : select_frontier(map, state.pose, current, frontiers, skid,
                                    params.policy);
    if (!target) {
      complete = true;
      break;
    }
    const auto path = plan_astar(map, current, *target);
    if (!path || path->size() < 2) {
      if (committed) {
        // The committed frontier became unreachable; pick a fresh one.
        committed.reset();
        continue;
      }
      // Reachability filter and A* disagree only on degenerate maps; stop
      // rather than loop.
      break;
    }
    committed = target;
    const NodeId waypoint = (*path)[1];
    // Cause attribution: a collision on a predictor-approved edge whose
    // ground truth disagrees is the predictor's fault; anything else
    // (odometry chain edges included) is on the controller.
    const EdgeState truth = edge_trav_oracle(
        world, map.node(current), map.node(waypoint), skid.footprint_radius);
    const auto ekey = TopoMap::edge_key(current, waypoint);
    const auto pit = res.predicted.find(ekey);
    const bool predictor_approved =
        pit != res.predicted.end() && pit->second == EdgeState::Traversable;
    const EdgeState oracle_state =
        predictor_approved ? truth : EdgeState::Traversable;

    const DriveResult drive =
        drive_to_goal(state, waypoint, map, world, skid, oracle_state, tick,
                      res.trajectory, hooks);
    if (drive.outcome == DriveOutcome::Reached) {
      if (map.node(waypoint).kind == NodeKind::Frontier) {
        hooks.on_node_insert(state.pose);
        state.odometer = 0.0;
        state.last_safe_node = current;
        committed.reset();
      } else {
        current = waypoint;
        state.last_safe_node = waypoint;
      }
    } else {
      if (drive.event) res.status.interventions.push_back(*drive.event);
      current = state.last_safe_node;
      committed.reset();
    }
  }

  ExplorationStatus& st = res.status;
  st.cells_total = res.grid.R * res.grid.R;
  const auto occ = occupied_cells(map, res.grid);
  st.visited_cells = static_cast<int>(occ.size());
  for (int j = 0; j < res.grid.R; ++j)
    for (int i = 0; i < res.grid.R; ++i)
      if (!occ.count({i, j})) st.unreached_cells.push_back({i, j});
  st.complete = complete;
  st.reachable_frontiers = 0;
  if (!complete) {
    const auto frontiers = compute_frontiers(map, res.grid, params.r, predictor);
    const auto reachable = reachable_set(map, current);
    for (NodeId f : frontiers)
      if (reachable.count(f)) ++st.reachable_frontiers;
  }
  st.ticks = tick;
  for (const TrajectoryRow& row : res.trajectory)
    st.distance_traveled += row.v * skid.tick;
  return res;
}

}  // namespace offtrail
