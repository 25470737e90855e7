#pragma once

#include <cstdint>
#include <vector>

#include "offtrail/geometry.hpp"

namespace offtrail {

// 2-d tree keyed by point, payload is an opaque id. Supports incremental
// insertion and lazy removal; no rebalancing (maps stay in the thousands).
class KdTree2 {
 public:
  void insert(const Vec2& p, uint64_t id) {
    nodes_.push_back({p, id, -1, -1, true});
    const int idx = static_cast<int>(nodes_.size()) - 1;
    if (idx == 0) return;
    int cur = 0;
    int depth = 0;
    for (;;) {
      const bool left = key(p, depth) < key(nodes_[cur].p, depth);
      int& child = left ? nodes_[cur].lo : nodes_[cur].hi;
      if (child < 0) {
        child = idx;
        return;
      }
      cur = child;
      ++depth;
    }
  }

  // Marks the first active entry with this id inactive.
  void remove(uint64_t id) {
    for (auto& n : nodes_) {
      if (n.active && n.id == id) {
        n.active = false;
        return;
      }
    }
  }

  // Ids of active points with |p - q| <= r, in insertion order.
  std::vector<uint64_t> radius_query(const Vec2& q, double r) const {
    std::vector<uint64_t> out;
    if (!nodes_.empty()) query_rec(0, 0, q, r, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Vec2 p;
    uint64_t id;
    int lo, hi;
    bool active;
  };

  static double key(const Vec2& p, int depth) {
    return (depth & 1) == 0 ? p.x : p.y;
  }

  void query_rec(int idx, int depth, const Vec2& q, double r,
                 std::vector<uint64_t>& out) const {
    const Node& n = nodes_[idx];
    if (n.active && dist(n.p, q) <= r) out.push_back(n.id);
    const double delta = key(q, depth) - key(n.p, depth);
    if (n.lo >= 0 && delta <= r) query_rec(n.lo, depth + 1, q, r, out);
    if (n.hi >= 0 && delta >= -r) query_rec(n.hi, depth + 1, q, r, out);
  }

  std::vector<Node> nodes_;
};

}  // namespace offtrail
