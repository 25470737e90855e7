#pragma once

#include <cstdint>
#include <map>

#include "offtrail/terrain.hpp"
#include "offtrail/topomap.hpp"

namespace offtrail {

enum class ImageTrav {
  Reachable,      // a safe in-sector path to the goal exists
  Blocked,        // goal is in the sector but no safe in-sector path
  OutsideSector,  // not evaluable from this view
};

// Grid search for a safe path from the observer to the goal that stays
// inside one camera sector. 8-connected BFS over the ground-truth lattice;
// a cell qualifies if its center is inside the sector footprint and safe
// for the robot footprint. `witness` receives the cell-center path when
// the goal is reachable.
ImageTrav image_trav(const TerrainWorld& world, const Vec2& observer,
                     const Sector& sector, const Vec2& goal,
                     double footprint_radius,
                     std::vector<Vec2>* witness = nullptr);

// Edge verdict from ground truth. Traversable if any sector of either
// endpoint sees a safe in-sector path to the other; Untraversable if some
// sector contained the other endpoint but every such sector was blocked;
// Unknown when neither endpoint can observe the other (or both are
// frontiers and carry no view).
EdgeState edge_trav_oracle(const TerrainWorld& world, const Node& a,
                           const Node& b, double footprint_radius);

// Deterministic noise on a decided verdict: Traversable flips with
// probability p_fn, Untraversable with p_fp, Unknown passes through. The
// stream key pins the draw so re-queries of the same edge agree.
EdgeState predict_edge_noisy(EdgeState oracle_verdict, double p_fp,
                             double p_fn, uint64_t stream_key);

uint64_t edge_stream_key(uint64_t run_seed, const Vec2& pos_a,
                         const Vec2& pos_b);

class OraclePredictor : public TravPredictor {
 public:
  OraclePredictor(const TerrainWorld& world, double footprint_radius)
      : world_(world), footprint_(footprint_radius) {}
  EdgeState predict_edge(const TopoMap& map, NodeId a, NodeId b) override;

 private:
  const TerrainWorld& world_;
  double footprint_;
};

class NoisyPredictor : public TravPredictor {
 public:
  NoisyPredictor(const TerrainWorld& world, double footprint_radius,
                 double p_fp, double p_fn, uint64_t run_seed)
      : oracle_(world, footprint_radius),
        p_fp_(p_fp),
        p_fn_(p_fn),
        run_seed_(run_seed) {}
  EdgeState predict_edge(const TopoMap& map, NodeId a, NodeId b) override;

 private:
  OraclePredictor oracle_;
  double p_fp_, p_fn_;
  uint64_t run_seed_;
};

class AlwaysTraversablePredictor : public TravPredictor {
 public:
  EdgeState predict_edge(const TopoMap&, NodeId, NodeId) override {
    return EdgeState::Traversable;
  }
};

struct ConfusionMatrix {
  uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  uint64_t total() const { return tp + fp + tn + fn; }
};

// 2x2 counts with Traversable as the positive class. Edges whose oracle
// verdict is Unknown are excluded.
ConfusionMatrix evaluate_confusion(
    const std::map<TopoMap::EdgeKey, EdgeState>& predicted,
    const std::map<TopoMap::EdgeKey, EdgeState>& oracle);

// Text table, ground truth on rows, prediction on columns.
std::string confusion_table(const ConfusionMatrix& m);

}  // namespace offtrail
