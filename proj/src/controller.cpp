#include "offtrail/controller.hpp"

#include <cmath>

namespace offtrail {

const char* intervention_cause_name(InterventionCause c) {
  switch (c) {
    case InterventionCause::TraversabilityError: return "traversability_error";
    case InterventionCause::ControllerError: return "controller_error";
    case InterventionCause::Timeout: return "timeout";
  }
  return "timeout";
}

double kinematic_time(const Pose& pose, const Vec2& target,
                      const SkidSteerParams& params) {
  const Vec2 d = target - pose.position;
  const double range = d.norm();
  if (range < 1e-12) return 0.0;
  const double turn = std::abs(wrap_angle(std::atan2(d.y, d.x) - pose.heading));
  return turn / params.w_max + range / params.v_max;
}

namespace {

Action control_law(const Pose& pose, const Vec2& goal,
                   const SkidSteerParams& params) {
  const Vec2 d = goal - pose.position;
  const double range = d.norm();
  if (range <= params.goal_tol) return {0.0, 0.0};
  const double bearing_error = wrap_angle(std::atan2(d.y, d.x) - pose.heading);
  Action a;
  a.w = std::clamp(params.k_w * bearing_error, -params.w_max, params.w_max);
  if (std::abs(bearing_error) <= params.bearing_gate) {
    // Brake on final approach so the goal tolerance is not overshot.
    a.v = std::min(params.v_max * std::max(0.0, std::cos(bearing_error)), range);
  }
  return a;
}

}  // namespace

std::vector<Action> plan_actions(const RobotState& state,
                                 const Vec2& goal_local,
                                 const SkidSteerParams& params) {
  // The goal arrives in the robot frame; roll the law forward in that frame.
  RobotState sim;
  sim.pose = Pose{{0.0, 0.0}, 0.0};
  std::vector<Action> out;
  out.reserve(params.seq_len);
  for (int i = 0; i < params.seq_len; ++i) {
    const Action a = control_law(sim.pose, goal_local, params);
    out.push_back(a);
    sim = step_kinematics(sim, a, params.tick);
  }
  return out;
}

RobotState step_kinematics(const RobotState& state, const Action& action,
                           double tick) {
  RobotState next = state;
  const double h_mid = state.pose.heading + action.w * tick / 2.0;
  next.pose.position =
      state.pose.position +
      Vec2{action.v * tick * std::cos(h_mid), action.v * tick * std::sin(h_mid)};
  next.pose.heading = wrap_angle(state.pose.heading + action.w * tick);
  next.odometer = state.odometer + action.v * tick;
  return next;
}

std::optional<InterventionEvent> safety_check(
    const TerrainWorld& world, const RobotState& state,
    const SkidSteerParams& params,
    const std::optional<TopoMap::EdgeKey>& active_edge,
    EdgeState oracle_state, uint64_t tick_index) {
  if (world.is_safe(state.pose.position, params.footprint_radius))
    return std::nullopt;
  InterventionEvent ev;
  ev.cause = oracle_state == EdgeState::Traversable
                 ? InterventionCause::ControllerError
                 : InterventionCause::TraversabilityError;
  ev.position = state.pose.position;
  ev.edge = active_edge;
  ev.tick_index = tick_index;
  return ev;
}

DriveResult drive_to_goal(RobotState& state, NodeId goal, TopoMap& map,
                          const TerrainWorld& world,
                          const SkidSteerParams& params,
                          EdgeState oracle_state_of_edge, uint64_t& tick,
                          std::vector<TrajectoryRow>& log,
                          const DriveHooks& hooks) {
  const NodeId origin = state.last_safe_node;
  const TopoMap::EdgeKey active_edge = TopoMap::edge_key(origin, goal);
  const Vec2 goal_pos = map.node(goal).pose.position;

  const double t_kin = kinematic_time(state.pose, goal_pos, params);
  const uint64_t budget = std::max<uint64_t>(
      10, static_cast<uint64_t>(
              std::ceil(params.timeout_factor * t_kin / params.tick)));

  DriveResult result;
  auto fail = [&](DriveOutcome outcome,
                  std::optional<InterventionEvent> ev) -> DriveResult {
    map.relabel_untraversable(origin, goal);
    state.pose = map.node(state.last_safe_node).pose;
    state.odometer = 0.0;
    result.outcome = outcome;
    result.event = ev;
    return result;
  };

  for (uint64_t step = 0; step < budget; ++step) {
    if (dist(state.pose.position, goal_pos) <= params.goal_tol) {
      result.outcome = DriveOutcome::Reached;
      return result;
    }
    const Vec2 goal_local = to_local(state.pose, goal_pos);
    const Action a = plan_actions(state, goal_local, params)[0];

    RobotState candidate = step_kinematics(state, a, params.tick);
    std::string event;
    if (a.v > 0.0 && world.hits_solid(candidate.pose.position,
                                      params.footprint_radius)) {
      // Solid contact stalls the chassis; tracks still turn it.
      candidate = step_kinematics(state, {0.0, a.w}, params.tick);
      event = "blocked";
    }
    state = candidate;
    ++tick;
    ++result.ticks;
    log.push_back({tick, state.pose.position.x, state.pose.position.y,
                   state.pose.heading, a.v, a.w, event});

    auto ev = safety_check(world, state, params, active_edge,
                           oracle_state_of_edge, tick);
    if (ev) {
      log.back().event = intervention_cause_name(ev->cause);
      return fail(DriveOutcome::Intervened, ev);
    }

    if (hooks.insert_distance_d > 0.0 && hooks.on_node_insert &&
        state.odometer >= hooks.insert_distance_d) {
      const NodeId id = hooks.on_node_insert(state.pose);
      state.odometer = 0.0;
      state.last_safe_node = id;
    }
  }

  InterventionEvent ev;
  ev.cause = InterventionCause::Timeout;
  ev.position = state.pose.position;
  ev.edge = active_edge;
  ev.tick_index = tick;
  if (!log.empty()) log.back().event = intervention_cause_name(ev.cause);
  return fail(DriveOutcome::TimedOut, ev);
}

}  // namespace offtrail
