#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "offtrail/geometry.hpp"
#include "offtrail/kdtree.hpp"

namespace offtrail {

using NodeId = uint32_t;

struct Pose {
  Vec2 position;
  double heading = 0.0;  // radians in (-pi, pi]

  Pose() = default;
  Pose(Vec2 p, double h) : position(p), heading(wrap_angle(h)) {}
};

// Goal expressed in the frame at `pose`: rotate by -heading, translate.
inline Vec2 to_local(const Pose& pose, const Vec2& g) {
  const Vec2 d = g - pose.position;
  const double c = std::cos(-pose.heading);
  const double s = std::sin(-pose.heading);
  return {c * d.x - s * d.y, s * d.x + c * d.y};
}

enum class NodeKind { Visited, Frontier };

enum class EdgeState { Traversable, Untraversable, Unknown };

const char* edge_state_name(EdgeState s);
std::optional<EdgeState> edge_state_from_name(const std::string& name);

// Angular footprint of one camera view on the ground plane.
struct Sector {
  double center_bearing = 0.0;  // absolute, radians
  double half_angle = 0.0;
  double range = 0.0;

  bool contains(const Vec2& origin, const Vec2& p) const {
    const Vec2 d = p - origin;
    const double r = d.norm();
    if (r > range) return false;
    if (r < 1e-9) return true;
    return std::abs(wrap_angle(std::atan2(d.y, d.x) - center_bearing)) <=
           half_angle + 1e-12;
  }
};

// Left, front, right camera sectors captured at insertion time.
struct ViewRecord {
  double capture_heading = 0.0;
  double fov = 0.0;    // full angle per camera, radians
  double range = 0.0;  // perception range rho

  std::vector<Sector> sectors() const {
    const double bearings[3] = {capture_heading + M_PI / 2, capture_heading,
                                capture_heading - M_PI / 2};
    std::vector<Sector> out;
    for (double b : bearings)
      out.push_back({wrap_angle(b), fov / 2.0, range});
    return out;
  }
};

struct Node {
  NodeId id = 0;
  Pose pose;
  NodeKind kind = NodeKind::Visited;
  std::optional<ViewRecord> view;  // present iff Visited
  double terrain_height = 0.0;
  bool removed = false;
  std::set<NodeId> adjacent;
};

struct Edge {
  EdgeState state = EdgeState::Unknown;
  double length = 0.0;
};

class TopoMap;

// One verdict per candidate edge; implementations live with the
// traversability oracle.
class TravPredictor {
 public:
  virtual ~TravPredictor() = default;
  virtual EdgeState predict_edge(const TopoMap& map, NodeId a, NodeId b) = 0;
};

class TopoMap {
 public:
  using EdgeKey = std::pair<NodeId, NodeId>;  // always (min, max)

  static EdgeKey edge_key(NodeId a, NodeId b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
  }

  NodeId add_visited(const Pose& pose, double fov, double range,
                     double terrain_height,
                     std::optional<NodeId> previous);
  NodeId add_frontier(const Vec2& position);
  void remove_node(NodeId id);

  // Creates or refreshes edges to every node within radius r. Existing
  // Traversable/Untraversable verdicts are sticky; only Unknown edges are
  // re-evaluated. Returns the (key, state) of every edge touched.
  std::vector<std::pair<EdgeKey, EdgeState>> connect_neighbors(
      NodeId id, double r, TravPredictor& predictor);

  std::vector<NodeId> radius_query(const Vec2& p, double r) const;

  // Permanent relabel used by the intervention path; the pair of quantized
  // endpoint positions is remembered so a re-created frontier at the same
  // spot cannot resurrect the edge.
  void relabel_untraversable(NodeId a, NodeId b);

  // Consecutive odometry edges are Traversable by construction.
  void set_edge(NodeId a, NodeId b, EdgeState state);

  const Node& node(NodeId id) const { return nodes_.at(id); }
  Node& node(NodeId id) { return nodes_.at(id); }
  bool node_exists(NodeId id) const {
    return id < nodes_.size() && !nodes_[id].removed;
  }
  size_t node_capacity() const { return nodes_.size(); }

  std::optional<EdgeState> edge_state(NodeId a, NodeId b) const;
  const std::map<EdgeKey, Edge>& edges() const { return edges_; }

  std::vector<NodeId> active_nodes() const;

  bool edge_banned(NodeId a, NodeId b) const;

 private:
  using PosKey = std::pair<int64_t, int64_t>;
  using BanKey = std::pair<PosKey, PosKey>;

  static PosKey pos_key(const Vec2& p) {
    return {std::llround(p.x * 1000.0), std::llround(p.y * 1000.0)};
  }
  BanKey ban_key(NodeId a, NodeId b) const {
    PosKey ka = pos_key(nodes_[a].pose.position);
    PosKey kb = pos_key(nodes_[b].pose.position);
    return ka < kb ? BanKey{ka, kb} : BanKey{kb, ka};
  }

  std::vector<Node> nodes_;
  std::map<EdgeKey, Edge> edges_;
  std::set<BanKey> banned_;
  KdTree2 index_;
};

}  // namespace offtrail
