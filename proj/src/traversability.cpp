#include "offtrail/traversability.hpp"

#include <deque>
#include <iomanip>
#include <sstream>

#include "offtrail/rng.hpp"

namespace offtrail {

namespace {

struct CellIdx {
  int x, y;
};

CellIdx cell_of(const TerrainWorld& w, const Vec2& p) {
  const Rect& b = w.bounds();
  return {static_cast<int>(std::floor((p.x - b.xmin) / w.gt_resolution())),
          static_cast<int>(std::floor((p.y - b.ymin) / w.gt_resolution()))};
}

}  // namespace

ImageTrav image_trav(const TerrainWorld& world, const Vec2& observer,
                     const Sector& sector, const Vec2& goal,
                     double footprint_radius, std::vector<Vec2>* witness) {
  if (!sector.contains(observer, goal)) return ImageTrav::OutsideSector;

  const int nx = world.raster_nx();
  const int ny = world.raster_ny();
  const CellIdx start = cell_of(world, observer);
  const CellIdx target = cell_of(world, goal);
  auto in_raster = [&](const CellIdx& c) {
    return c.x >= 0 && c.y >= 0 && c.x < nx && c.y < ny;
  };
  if (!in_raster(start) || !in_raster(target)) return ImageTrav::Blocked;

  auto admissible = [&](const CellIdx& c) {
    if (!world.safe_cell(c.x, c.y, footprint_radius)) return false;
    if (c.x == start.x && c.y == start.y) return true;  // observer's own cell
    return sector.contains(observer, world.cell_center(c.x, c.y));
  };
  if (!admissible(start) || !admissible(target)) return ImageTrav::Blocked;

  std::vector<int32_t> parent(static_cast<size_t>(nx) * ny, -2);
  auto flat = [&](const CellIdx& c) {
    return static_cast<size_t>(c.y) * nx + c.x;
  };
  std::deque<CellIdx> queue;
  parent[flat(start)] = -1;
  queue.push_back(start);
  bool found = start.x == target.x && start.y == target.y;
  while (!queue.empty() && !found) {
    const CellIdx c = queue.front();
    queue.pop_front();
    for (int dy = -1; dy <= 1 && !found; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const CellIdx n{c.x + dx, c.y + dy};
        if (!in_raster(n) || parent[flat(n)] != -2) continue;
        if (!admissible(n)) continue;
        parent[flat(n)] = static_cast<int32_t>(flat(c));
        if (n.x == target.x && n.y == target.y) {
          found = true;
          break;
        }
        queue.push_back(n);
      }
    }
  }
  if (!found) return ImageTrav::Blocked;
  if (witness) {
    witness->clear();
    size_t cur = flat(target);
    for (;;) {
      witness->push_back(world.cell_center(static_cast<int>(cur % nx),
                                           static_cast<int>(cur / nx)));
      const int32_t p = parent[cur];
      if (p < 0) break;
      cur = static_cast<size_t>(p);
    }
    std::reverse(witness->begin(), witness->end());
  }
  return ImageTrav::Reachable;
}

EdgeState edge_trav_oracle(const TerrainWorld& world, const Node& a,
                           const Node& b, double footprint_radius) {
  if (!a.view && !b.view) return EdgeState::Unknown;

  bool any_contained = false;
  auto try_from = [&](const Node& from, const Node& to) -> bool {
    if (!from.view) return false;
    if (!world.sight_clear(from.pose.position, to.pose.position)) return false;
    for (const Sector& s : from.view->sectors()) {
      const ImageTrav r = image_trav(world, from.pose.position, s,
                                     to.pose.position, footprint_radius);
      if (r == ImageTrav::Reachable) return true;
      if (r == ImageTrav::Blocked) any_contained = true;
    }
    return false;
  };
  if (try_from(a, b) || try_from(b, a)) return EdgeState::Traversable;
  return any_contained ? EdgeState::Untraversable : EdgeState::Unknown;
}

uint64_t edge_stream_key(uint64_t run_seed, const Vec2& pos_a,
                         const Vec2& pos_b) {
  auto q = [](double v) {
    return static_cast<uint64_t>(static_cast<int64_t>(std::llround(v * 1000.0)));
  };
  uint64_t ka = hash_combine(q(pos_a.x), q(pos_a.y));
  uint64_t kb = hash_combine(q(pos_b.x), q(pos_b.y));
  if (ka > kb) std::swap(ka, kb);
  return hash_combine(hash_combine(run_seed, ka), kb);
}

EdgeState predict_edge_noisy(EdgeState oracle_verdict, double p_fp,
                             double p_fn, uint64_t stream_key) {
  if (oracle_verdict == EdgeState::Unknown) return EdgeState::Unknown;
  std::mt19937_64 rng(mix64(stream_key));
  if (oracle_verdict == EdgeState::Traversable)
    return bernoulli(rng, p_fn) ? EdgeState::Untraversable
                                : EdgeState::Traversable;
  return bernoulli(rng, p_fp) ? EdgeState::Traversable
                              : EdgeState::Untraversable;
}

EdgeState OraclePredictor::predict_edge(const TopoMap& map, NodeId a,
                                        NodeId b) {
  return edge_trav_oracle(world_, map.node(a), map.node(b), footprint_);
}

EdgeState NoisyPredictor::predict_edge(const TopoMap& map, NodeId a,
                                       NodeId b) {
  const EdgeState truth = oracle_.predict_edge(map, a, b);
  const uint64_t key = edge_stream_key(run_seed_, map.node(a).pose.position,
                                       map.node(b).pose.position);
  return predict_edge_noisy(truth, p_fp_, p_fn_, key);
}

ConfusionMatrix evaluate_confusion(
    const std::map<TopoMap::EdgeKey, EdgeState>& predicted,
    const std::map<TopoMap::EdgeKey, EdgeState>& oracle) {
  ConfusionMatrix m;
  for (const auto& [key, truth] : oracle) {
    if (truth == EdgeState::Unknown) continue;
    auto it = predicted.find(key);
    if (it == predicted.end()) continue;
    const EdgeState pred = it->second;
    if (truth == EdgeState::Traversable) {
      if (pred == EdgeState::Traversable) ++m.tp;
      else ++m.fn;
    } else {
      if (pred == EdgeState::Traversable) ++m.fp;
      else ++m.tn;
    }
  }
  return m;
}

std::string confusion_table(const ConfusionMatrix& m) {
  std::ostringstream os;
  os << "                 pred:trav  pred:untrav\n";
  os << "truth:trav    " << std::setw(11) << m.tp << std::setw(13) << m.fn
     << "\n";
  os << "truth:untrav  " << std::setw(11) << m.fp << std::setw(13) << m.tn
     << "\n";
  return os.str();
}

}  // namespace offtrail
