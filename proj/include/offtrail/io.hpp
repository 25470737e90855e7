#pragma once

#include <optional>
#include <string>
#include <vector>

#include "offtrail/controller.hpp"
#include "offtrail/terrain.hpp"
#include "offtrail/topomap.hpp"
#include "offtrail/traversability.hpp"

namespace offtrail {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat view of an exported map, what the renderer and metrics consume.
struct MapData {
  struct NodeRow {
    NodeId id;
    double x, y, heading;
    std::string kind;  // "visited" | "frontier"
    double terrain_height;
  };
  struct EdgeRow {
    NodeId a, b;
    EdgeState state;
    double length;
  };
  std::vector<NodeRow> nodes;
  std::vector<EdgeRow> edges;
};

std::string map_to_json(const TopoMap& map);
MapData map_data_from_json(const std::string& text);
MapData map_data_from_map(const TopoMap& map);

std::string trajectory_to_csv(const std::vector<TrajectoryRow>& rows);
std::vector<TrajectoryRow> trajectory_from_csv(const std::string& text);

struct SummaryRow {
  uint64_t seed = 0;
  double p_fp = 0, p_fn = 0;
  int cells_total = 0;
  int cells_visited = 0;
  double distance_m = 0;
  int n_traversability_errors = 0;
  int n_controller_errors = 0;
  int n_timeouts = 0;
  uint64_t ticks = 0;
  bool complete = false;
  std::string config_hash;
};

std::string summary_to_csv(const std::vector<SummaryRow>& rows);

struct ConfusionRow {
  std::string run_id;
  double p_fp = 0, p_fn = 0;
  ConfusionMatrix matrix;
};

std::string confusion_to_csv(const std::vector<ConfusionRow>& rows);

// Deterministic SVG: terrain layer (when a world is given), edges styled
// by state, nodes colored by terrain height, trajectory overlay.
std::string render_svg(const MapData& map,
                       const std::vector<TrajectoryRow>& trajectory,
                       const TerrainWorld* world);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace offtrail
