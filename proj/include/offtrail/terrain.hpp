#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "offtrail/geometry.hpp"

namespace offtrail {

struct ParamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ObstacleKind { FallenTree, Water, Rock };

struct Obstacle {
  ObstacleKind kind = ObstacleKind::Rock;
  // FallenTree: segment a-b with half_width and height.
  Vec2 a, b;
  double half_width = 0.0;
  // Rock: disc at center with radius and height.
  Vec2 center;
  double radius = 0.0;
  double height = 0.0;
  // Water: polygon, never occludes and has no height.
  Polygon polygon;
  bool occludes_sight = false;
};

struct WorldParams {
  Rect bounds{-12.0, -12.0, 12.0, 12.0};
  double h_cell = 0.5;          // heightmap grid pitch [m]
  double gt_resolution = 0.25;  // ground-truth safety raster pitch [m]
  double slope_max_deg = 30.0;
  double h_occlude = 0.5;  // obstacles at least this tall block sight
  double rho = 10.0;       // perception range [m]

  // Heightmap value noise.
  double amplitude = 0.5;     // [m]
  double feature_size = 6.0;  // [m]

  // Obstacle counts are densities per 100 m^2.
  double tree_density = 0.0;
  double rock_density = 0.0;
  double water_density = 0.0;

  double tree_len_min = 2.0, tree_len_max = 6.0;
  double tree_hw_min = 0.2, tree_hw_max = 0.4;
  double tree_h_min = 0.3, tree_h_max = 1.2;
  double rock_r_min = 0.3, rock_r_max = 0.8;
  double rock_h_min = 0.2, rock_h_max = 0.9;
  double water_r_min = 1.0, water_r_max = 2.5;

  // Start defaults to the bounds center; the generator keeps a disc of
  // start_clear_radius free of obstacles.
  bool start_set = false;
  Vec2 start;
  double start_heading = 0.0;
  double start_clear_radius = 1.5;
};

class TerrainWorld {
 public:
  uint64_t seed = 0;
  WorldParams params;
  std::vector<Obstacle> obstacles;
  Vec2 start;
  double start_heading = 0.0;

  const Rect& bounds() const { return params.bounds; }
  double rho() const { return params.rho; }
  double gt_resolution() const { return params.gt_resolution; }

  double height_at(const Vec2& p) const;
  Vec2 height_grad(const Vec2& p) const;

  // True iff the footprint disc is in bounds, clear of every unsafe
  // obstacle region and on ground below the slope limit.
  bool is_safe(const Vec2& p, double footprint_radius) const;

  // True iff |b-a| <= rho and no sight-occluding obstacle crosses a-b.
  bool sight_clear(const Vec2& a, const Vec2& b) const;

  // Solid contact only (trees and rocks); water and slopes do not block
  // motion, they are merely unsafe.
  bool hits_solid(const Vec2& p, double footprint_radius) const;

  // Cached safety verdict for the ground-truth lattice cell (ix, iy),
  // cell center = bounds.min + (i + 0.5) * gt_resolution.
  bool safe_cell(int ix, int iy, double footprint_radius) const;
  int raster_nx() const { return raster_nx_; }
  int raster_ny() const { return raster_ny_; }
  Vec2 cell_center(int ix, int iy) const {
    return {params.bounds.xmin + (ix + 0.5) * params.gt_resolution,
            params.bounds.ymin + (iy + 0.5) * params.gt_resolution};
  }

  void build_heightmap();
  void finalize();  // sets raster dims, clears caches

 private:
  struct SafetyCache {
    std::mutex mutex;
    std::map<long, std::vector<uint8_t>> rasters;
  };

  std::vector<double> heights_;  // (hx_+1) x (hy_+1) vertices
  int hx_ = 0, hy_ = 0;
  int raster_nx_ = 0, raster_ny_ = 0;
  // Shared so the world stays copyable; the cache only memoizes pure queries.
  std::shared_ptr<SafetyCache> cache_ = std::make_shared<SafetyCache>();
};

Obstacle make_tree(const Vec2& a, const Vec2& b, double half_width,
                   double height, double h_occlude);
Obstacle make_rock(const Vec2& center, double radius, double height,
                   double h_occlude);
Obstacle make_water(Polygon polygon);

// Deterministic in (seed, params). Throws ParamError when a safe start
// cannot be produced within the rejection budget.
TerrainWorld generate_world(uint64_t seed, const WorldParams& params);

std::string world_to_json(const TerrainWorld& world);
TerrainWorld world_from_json(const std::string& text);
TerrainWorld load_world_file(const std::string& path);
void save_world_file(const TerrainWorld& world, const std::string& path);

}  // namespace offtrail
