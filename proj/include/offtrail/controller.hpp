#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "offtrail/terrain.hpp"
#include "offtrail/topomap.hpp"

namespace offtrail {

struct SkidSteerParams {
  double v_max = 1.0;   // m/s
  double w_max = 1.0;   // rad/s
  double tick = 0.2;    // s (5 Hz)
  double footprint_radius = 0.4;
  int seq_len = 5;      // actions per plan, only the first is executed
  double k_w = 2.0;
  double goal_tol = 0.3;
  double timeout_factor = 3.0;
  // Turn-then-drive gate: no forward motion until the bearing error is
  // below this, which keeps U-turn arcs from sweeping wide.
  double bearing_gate = M_PI / 6.0;
};

struct Action {
  double v = 0.0;
  double w = 0.0;
};

struct RobotState {
  Pose pose;
  double odometer = 0.0;  // meters since last node insertion
  NodeId last_safe_node = 0;
};

enum class InterventionCause { TraversabilityError, ControllerError, Timeout };

const char* intervention_cause_name(InterventionCause c);

struct InterventionEvent {
  InterventionCause cause;
  Vec2 position;
  std::optional<TopoMap::EdgeKey> edge;
  uint64_t tick_index = 0;
};

// Turn then drive: time to rotate in place plus time to drive straight.
double kinematic_time(const Pose& pose, const Vec2& target,
                      const SkidSteerParams& params);

// Proportional turn-then-drive law rolled out for seq_len steps. The run
// loop executes only element 0 and replans next tick.
std::vector<Action> plan_actions(const RobotState& state,
                                 const Vec2& goal_local,
                                 const SkidSteerParams& params);

// Unicycle update with midpoint heading.
RobotState step_kinematics(const RobotState& state, const Action& action,
                           double tick);

struct TrajectoryRow {
  uint64_t tick = 0;
  double x = 0, y = 0, heading = 0;
  double v = 0, w = 0;
  std::string event;
};

// Classifies an unsafe footprint against the edge being driven: the
// controller is at fault when the oracle approved the edge, otherwise the
// traversability verdict was wrong.
std::optional<InterventionEvent> safety_check(
    const TerrainWorld& world, const RobotState& state,
    const SkidSteerParams& params,
    const std::optional<TopoMap::EdgeKey>& active_edge,
    EdgeState oracle_state, uint64_t tick_index);

enum class DriveOutcome { Reached, TimedOut, Intervened };

struct DriveResult {
  DriveOutcome outcome = DriveOutcome::Reached;
  std::optional<InterventionEvent> event;
  uint64_t ticks = 0;
};

struct DriveHooks {
  // Invoked when the odometer crosses d on safe ground; returns the id of
  // the node inserted there, which becomes the new reset anchor.
  std::function<NodeId(const Pose&)> on_node_insert;
  double insert_distance_d = 0.0;  // <= 0 disables insertion
};

// Drives toward the goal node until reached, timed out or intervened.
// On TimedOut/Intervened the robot is reset to last_safe_node's pose and
// the active edge is permanently relabeled Untraversable.
DriveResult drive_to_goal(RobotState& state, NodeId goal, TopoMap& map,
                          const TerrainWorld& world,
                          const SkidSteerParams& params,
                          EdgeState oracle_state_of_edge, uint64_t& tick,
                          std::vector<TrajectoryRow>& log,
                          const DriveHooks& hooks);

}  // namespace offtrail
