#include "offtrail/topomap.hpp"

#include <string>

namespace offtrail {

const char* edge_state_name(EdgeState s) {
  switch (s) {
    case EdgeState::Traversable: return "traversable";
    case EdgeState::Untraversable: return "untraversable";
    case EdgeState::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<EdgeState> edge_state_from_name(const std::string& name) {
  if (name == "traversable") return EdgeState::Traversable;
  if (name == "untraversable") return EdgeState::Untraversable;
  if (name == "unknown") return EdgeState::Unknown;
  return std::nullopt;
}

NodeId TopoMap::add_visited(const Pose& pose, double fov, double range,
                            double terrain_height,
                            std::optional<NodeId> previous) {
  Node n;
  n.id = static_cast<NodeId>(nodes_.size());
  n.pose = pose;
  n.kind = NodeKind::Visited;
  n.view = ViewRecord{pose.heading, fov, range};
  n.terrain_height = terrain_height;
  nodes_.push_back(n);
  index_.insert(pose.position, n.id);
  if (previous) set_edge(*previous, n.id, EdgeState::Traversable);
  return n.id;
}

NodeId TopoMap::add_frontier(const Vec2& position) {
  Node n;
  n.id = static_cast<NodeId>(nodes_.size());
  n.pose = Pose{position, 0.0};
  n.kind = NodeKind::Frontier;
  nodes_.push_back(n);
  index_.insert(position, n.id);
  return n.id;
}

void TopoMap::remove_node(NodeId id) {
  if (!node_exists(id)) return;
  Node& n = nodes_[id];
  for (NodeId other : n.adjacent) {
    edges_.erase(edge_key(id, other));
    nodes_[other].adjacent.erase(id);
  }
  n.adjacent.clear();
  n.removed = true;
  index_.remove(id);
}

void TopoMap::set_edge(NodeId a, NodeId b, EdgeState state) {
  if (a == b) return;
  Edge& e = edges_[edge_key(a, b)];
  e.state = state;
  e.length = dist(nodes_[a].pose.position, nodes_[b].pose.position);
  nodes_[a].adjacent.insert(b);
  nodes_[b].adjacent.insert(a);
}

std::optional<EdgeState> TopoMap::edge_state(NodeId a, NodeId b) const {
  auto it = edges_.find(edge_key(a, b));
  if (it == edges_.end()) return std::nullopt;
  return it->second.state;
}

bool TopoMap::edge_banned(NodeId a, NodeId b) const {
  return banned_.count(ban_key(a, b)) > 0;
}

void TopoMap::relabel_untraversable(NodeId a, NodeId b) {
  banned_.insert(ban_key(a, b));
  if (node_exists(a) && node_exists(b)) set_edge(a, b, EdgeState::Untraversable);
}

std::vector<std::pair<TopoMap::EdgeKey, EdgeState>> TopoMap::connect_neighbors(
    NodeId id, double r, TravPredictor& predictor) {
  std::vector<std::pair<EdgeKey, EdgeState>> out;
  for (NodeId other : radius_query(nodes_[id].pose.position, r)) {
    if (other == id) continue;
    const EdgeKey key = edge_key(id, other);
    auto existing = edges_.find(key);
    if (existing != edges_.end() &&
        existing->second.state != EdgeState::Unknown) {
      out.push_back({key, existing->second.state});
      continue;
    }
    EdgeState verdict;
    if (edge_banned(id, other)) {
      verdict = EdgeState::Untraversable;
    } else {
      verdict = predictor.predict_edge(*this, id, other);
    }
    set_edge(id, other, verdict);
    out.push_back({key, verdict});
  }
  return out;
}

std::vector<NodeId> TopoMap::radius_query(const Vec2& p, double r) const {
  std::vector<NodeId> out;
  for (uint64_t id : index_.radius_query(p, r))
    out.push_back(static_cast<NodeId>(id));
  return out;
}

std::vector<NodeId> TopoMap::active_nodes() const {
  std::vector<NodeId> out;
  for (const Node& n : nodes_)
    if (!n.removed) out.push_back(n.id);
  return out;
}

}  // namespace offtrail
