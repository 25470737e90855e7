#include "offtrail/terrain.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "offtrail/rng.hpp"

namespace offtrail {

namespace {

double lattice_value(uint64_t seed, int64_t ix, int64_t iy) {
  uint64_t h = hash_combine(seed, static_cast<uint64_t>(ix) * 0x9e3779b1ULL ^
                                      static_cast<uint64_t>(iy));
  h = hash_combine(h, static_cast<uint64_t>(iy));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

// Value noise in [0, 1] with the given feature size.
double value_noise(uint64_t seed, double x, double y, double feature) {
  const double u = x / feature;
  const double v = y / feature;
  const int64_t ix = static_cast<int64_t>(std::floor(u));
  const int64_t iy = static_cast<int64_t>(std::floor(v));
  const double fx = smooth(u - static_cast<double>(ix));
  const double fy = smooth(v - static_cast<double>(iy));
  const double v00 = lattice_value(seed, ix, iy);
  const double v10 = lattice_value(seed, ix + 1, iy);
  const double v01 = lattice_value(seed, ix, iy + 1);
  const double v11 = lattice_value(seed, ix + 1, iy + 1);
  return (v00 * (1 - fx) + v10 * fx) * (1 - fy) +
         (v01 * (1 - fx) + v11 * fx) * fy;
}

}  // namespace

Obstacle make_tree(const Vec2& a, const Vec2& b, double half_width,
                   double height, double h_occlude) {
  Obstacle o;
  o.kind = ObstacleKind::FallenTree;
  o.a = a;
  o.b = b;
  o.half_width = half_width;
  o.height = height;
  o.occludes_sight = height >= h_occlude;
  return o;
}

Obstacle make_rock(const Vec2& center, double radius, double height,
                   double h_occlude) {
  Obstacle o;
  o.kind = ObstacleKind::Rock;
  o.center = center;
  o.radius = radius;
  o.height = height;
  o.occludes_sight = height >= h_occlude;
  return o;
}

Obstacle make_water(Polygon polygon) {
  Obstacle o;
  o.kind = ObstacleKind::Water;
  o.polygon = std::move(polygon);
  o.occludes_sight = false;
  return o;
}

void TerrainWorld::build_heightmap() {
  const Rect& b = params.bounds;
  hx_ = std::max(1, static_cast<int>(std::ceil(b.width() / params.h_cell)));
  hy_ = std::max(1, static_cast<int>(std::ceil(b.height() / params.h_cell)));
  heights_.assign(static_cast<size_t>(hx_ + 1) * (hy_ + 1), 0.0);
  if (params.amplitude <= 0.0) return;
  const uint64_t hseed = hash_combine(seed, 0x7e55a11eULL);
  for (int j = 0; j <= hy_; ++j) {
    for (int i = 0; i <= hx_; ++i) {
      const double x = b.xmin + i * params.h_cell;
      const double y = b.ymin + j * params.h_cell;
      const double n = value_noise(hseed, x, y, params.feature_size) +
                       0.5 * value_noise(hseed ^ 0x5eedULL, x, y,
                                         params.feature_size * 0.5);
      heights_[static_cast<size_t>(j) * (hx_ + 1) + i] =
          params.amplitude * n / 1.5;
    }
  }
}

void TerrainWorld::finalize() {
  const Rect& b = params.bounds;
  raster_nx_ = static_cast<int>(std::ceil(b.width() / params.gt_resolution));
  raster_ny_ = static_cast<int>(std::ceil(b.height() / params.gt_resolution));
  cache_ = std::make_shared<SafetyCache>();
}

double TerrainWorld::height_at(const Vec2& p) const {
  const Rect& b = params.bounds;
  double u = (p.x - b.xmin) / params.h_cell;
  double v = (p.y - b.ymin) / params.h_cell;
  u = std::clamp(u, 0.0, static_cast<double>(hx_) - 1e-9);
  v = std::clamp(v, 0.0, static_cast<double>(hy_) - 1e-9);
  const int i = static_cast<int>(u);
  const int j = static_cast<int>(v);
  const double fx = u - i;
  const double fy = v - j;
  auto h = [&](int ii, int jj) {
    return heights_[static_cast<size_t>(jj) * (hx_ + 1) + ii];
  };
  return (h(i, j) * (1 - fx) + h(i + 1, j) * fx) * (1 - fy) +
         (h(i, j + 1) * (1 - fx) + h(i + 1, j + 1) * fx) * fy;
}

Vec2 TerrainWorld::height_grad(const Vec2& p) const {
  if (params.amplitude <= 0.0) return {0.0, 0.0};
  const Rect& b = params.bounds;
  double u = (p.x - b.xmin) / params.h_cell;
  double v = (p.y - b.ymin) / params.h_cell;
  u = std::clamp(u, 0.0, static_cast<double>(hx_) - 1e-9);
  v = std::clamp(v, 0.0, static_cast<double>(hy_) - 1e-9);
  const int i = static_cast<int>(u);
  const int j = static_cast<int>(v);
  const double fx = u - i;
  const double fy = v - j;
  auto h = [&](int ii, int jj) {
    return heights_[static_cast<size_t>(jj) * (hx_ + 1) + ii];
  };
  // Gradient of the bilinear patch.
  const double dhdx = ((h(i + 1, j) - h(i, j)) * (1 - fy) +
                       (h(i + 1, j + 1) - h(i, j + 1)) * fy) /
                      params.h_cell;
  const double dhdy = ((h(i, j + 1) - h(i, j)) * (1 - fx) +
                       (h(i + 1, j + 1) - h(i + 1, j)) * fx) /
                      params.h_cell;
  return {dhdx, dhdy};
}

bool TerrainWorld::is_safe(const Vec2& p, double footprint_radius) const {
  const double r = footprint_radius;
  if (!params.bounds.contains_disc(p, r)) return false;
  for (const Obstacle& o : obstacles) {
    switch (o.kind) {
      case ObstacleKind::FallenTree:
        if (point_segment_dist(p, o.a, o.b) <= o.half_width + r) return false;
        break;
      case ObstacleKind::Rock:
        if (dist(p, o.center) <= o.radius + r) return false;
        break;
      case ObstacleKind::Water:
        if (point_in_polygon(p, o.polygon) ||
            point_polygon_boundary_dist(p, o.polygon) <= r)
          return false;
        break;
    }
  }
  if (params.amplitude > 0.0) {
    const double tan_max = std::tan(params.slope_max_deg * M_PI / 180.0);
    if (height_grad(p).norm() > tan_max) return false;
    // Samples at fixed radii so the checked set for a smaller footprint is
    // a subset of the set for a larger one.
    const double step = params.gt_resolution;
    for (double rr = step; rr <= r; rr += step) {
      for (int k = 0; k < 16; ++k) {
        const double a = 2.0 * M_PI * k / 16.0;
        const Vec2 q = p + Vec2{rr * std::cos(a), rr * std::sin(a)};
        if (height_grad(q).norm() > tan_max) return false;
      }
    }
  }
  return true;
}

bool TerrainWorld::hits_solid(const Vec2& p, double footprint_radius) const {
  for (const Obstacle& o : obstacles) {
    if (o.kind == ObstacleKind::FallenTree) {
      if (point_segment_dist(p, o.a, o.b) <= o.half_width + footprint_radius)
        return true;
    } else if (o.kind == ObstacleKind::Rock) {
      if (dist(p, o.center) <= o.radius + footprint_radius) return true;
    }
  }
  return false;
}

bool TerrainWorld::sight_clear(const Vec2& a, const Vec2& b) const {
  if (dist(a, b) > params.rho) return false;
  for (const Obstacle& o : obstacles) {
    if (!o.occludes_sight) continue;
    if (o.kind == ObstacleKind::FallenTree) {
      if (segment_segment_dist(a, b, o.a, o.b) <= o.half_width) return false;
    } else if (o.kind == ObstacleKind::Rock) {
      if (point_segment_dist(o.center, a, b) <= o.radius) return false;
    }
  }
  return true;
}

bool TerrainWorld::safe_cell(int ix, int iy, double footprint_radius) const {
  if (ix < 0 || iy < 0 || ix >= raster_nx_ || iy >= raster_ny_) return false;
  const long key = std::lround(footprint_radius * 1e6);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->rasters.find(key);
  if (it == cache_->rasters.end()) {
    std::vector<uint8_t> r(static_cast<size_t>(raster_nx_) * raster_ny_);
    for (int j = 0; j < raster_ny_; ++j)
      for (int i = 0; i < raster_nx_; ++i)
        r[static_cast<size_t>(j) * raster_nx_ + i] =
            is_safe(cell_center(i, j), footprint_radius) ? 1 : 0;
    it = cache_->rasters.emplace(key, std::move(r)).first;
  }
  return it->second[static_cast<size_t>(iy) * raster_nx_ + ix] != 0;
}

TerrainWorld generate_world(uint64_t seed, const WorldParams& params) {
  if (params.bounds.area() < 4.0)
    throw ParamError("world bounds area must be at least 4 m^2");
  if (params.tree_density < 0 || params.rock_density < 0 ||
      params.water_density < 0)
    throw ParamError("obstacle densities must be non-negative");

  TerrainWorld w;
  w.seed = seed;
  w.params = params;
  w.start = params.start_set ? params.start : params.bounds.center();
  w.start_heading = params.start_heading;
  w.build_heightmap();

  std::mt19937_64 rng(hash_combine(seed, 0x0b57ac1eULL));
  const double per100 = params.bounds.area() / 100.0;
  const int n_trees = static_cast<int>(std::lround(params.tree_density * per100));
  const int n_rocks = static_cast<int>(std::lround(params.rock_density * per100));
  const int n_water = static_cast<int>(std::lround(params.water_density * per100));
  const Rect& b = params.bounds;
  const double clear = params.start_clear_radius;

  auto sample_point = [&](double margin) {
    return Vec2{uniform_range(rng, b.xmin + margin, b.xmax - margin),
                uniform_range(rng, b.ymin + margin, b.ymax - margin)};
  };

  constexpr int kMaxAttempts = 1000;
  for (int n = 0; n < n_trees; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const double len = uniform_range(rng, params.tree_len_min, params.tree_len_max);
      const double hw = uniform_range(rng, params.tree_hw_min, params.tree_hw_max);
      const double h = uniform_range(rng, params.tree_h_min, params.tree_h_max);
      const Vec2 mid = sample_point(0.5);
      const double ang = uniform_range(rng, -M_PI, M_PI);
      const Vec2 half{0.5 * len * std::cos(ang), 0.5 * len * std::sin(ang)};
      const Vec2 a = mid - half, bb = mid + half;
      if (point_segment_dist(w.start, a, bb) <= hw + clear) continue;
      w.obstacles.push_back(make_tree(a, bb, hw, h, params.h_occlude));
      placed = true;
    }
    if (!placed)
      throw ParamError("could not place fallen tree clear of the start disc");
  }
  for (int n = 0; n < n_rocks; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const double rr = uniform_range(rng, params.rock_r_min, params.rock_r_max);
      const double h = uniform_range(rng, params.rock_h_min, params.rock_h_max);
      const Vec2 c = sample_point(0.5);
      if (dist(w.start, c) <= rr + clear) continue;
      w.obstacles.push_back(make_rock(c, rr, h, params.h_occlude));
      placed = true;
    }
    if (!placed)
      throw ParamError("could not place rock clear of the start disc");
  }
  for (int n = 0; n < n_water; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const double rr = uniform_range(rng, params.water_r_min, params.water_r_max);
      const Vec2 c = sample_point(1.0);
      if (dist(w.start, c) <= rr + clear) continue;
      Polygon poly;
      const int verts = 7;
      const double phase = uniform_range(rng, -M_PI, M_PI);
      for (int k = 0; k < verts; ++k) {
        const double a = phase + 2.0 * M_PI * k / verts;
        const double rv = rr * uniform_range(rng, 0.6, 1.0);
        poly.push_back(c + Vec2{rv * std::cos(a), rv * std::sin(a)});
      }
      bool near_start = false;
      for (const Vec2& v : poly) near_start |= dist(w.start, v) <= clear;
      if (near_start || point_in_polygon(w.start, poly) ||
          point_polygon_boundary_dist(w.start, poly) <= clear)
        continue;
      w.obstacles.push_back(make_water(std::move(poly)));
      placed = true;
    }
    if (!placed)
      throw ParamError("could not place water clear of the start disc");
  }

  w.finalize();
  if (!w.is_safe(w.start, 1.0))
    throw ParamError("start disc is not safe with the given params");
  return w;
}

namespace {

using nlohmann::json;

json obstacle_to_json(const Obstacle& o) {
  json j;
  switch (o.kind) {
    case ObstacleKind::FallenTree:
      j["kind"] = "fallen_tree";
      j["a"] = {o.a.x, o.a.y};
      j["b"] = {o.b.x, o.b.y};
      j["half_width"] = o.half_width;
      j["height"] = o.height;
      break;
    case ObstacleKind::Rock:
      j["kind"] = "rock";
      j["center"] = {o.center.x, o.center.y};
      j["radius"] = o.radius;
      j["height"] = o.height;
      break;
    case ObstacleKind::Water: {
      j["kind"] = "water";
      json pts = json::array();
      for (const Vec2& p : o.polygon) pts.push_back({p.x, p.y});
      j["polygon"] = pts;
      break;
    }
  }
  return j;
}

Obstacle obstacle_from_json(const json& j, double h_occlude) {
  const std::string kind = j.at("kind");
  if (kind == "fallen_tree") {
    return make_tree({j.at("a")[0], j.at("a")[1]}, {j.at("b")[0], j.at("b")[1]},
                     j.at("half_width"), j.at("height"), h_occlude);
  }
  if (kind == "rock") {
    return make_rock({j.at("center")[0], j.at("center")[1]}, j.at("radius"),
                     j.at("height"), h_occlude);
  }
  if (kind == "water") {
    Polygon poly;
    for (const auto& p : j.at("polygon")) poly.push_back({p[0], p[1]});
    return make_water(std::move(poly));
  }
  throw ParamError("unknown obstacle kind: " + kind);
}

}  // namespace

std::string world_to_json(const TerrainWorld& w) {
  json j;
  j["schema_version"] = 1;
  j["seed"] = w.seed;
  j["bounds"] = {{"xmin", w.params.bounds.xmin},
                 {"ymin", w.params.bounds.ymin},
                 {"xmax", w.params.bounds.xmax},
                 {"ymax", w.params.bounds.ymax}};
  j["h_cell"] = w.params.h_cell;
  j["gt_resolution"] = w.params.gt_resolution;
  j["slope_max_deg"] = w.params.slope_max_deg;
  j["h_occlude"] = w.params.h_occlude;
  j["rho"] = w.params.rho;
  j["amplitude"] = w.params.amplitude;
  j["feature_size"] = w.params.feature_size;
  j["start"] = {{"x", w.start.x}, {"y", w.start.y}, {"heading", w.start_heading}};
  json obs = json::array();
  for (const Obstacle& o : w.obstacles) obs.push_back(obstacle_to_json(o));
  j["obstacles"] = obs;
  return j.dump(2);
}

TerrainWorld world_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.value("schema_version", 0) != 1)
    throw ParamError("unsupported world schema_version");
  TerrainWorld w;
  w.seed = j.at("seed");
  w.params.bounds = {j.at("bounds").at("xmin"), j.at("bounds").at("ymin"),
                     j.at("bounds").at("xmax"), j.at("bounds").at("ymax")};
  w.params.h_cell = j.value("h_cell", 0.5);
  w.params.gt_resolution = j.value("gt_resolution", 0.25);
  w.params.slope_max_deg = j.value("slope_max_deg", 30.0);
  w.params.h_occlude = j.value("h_occlude", 0.5);
  w.params.rho = j.value("rho", 10.0);
  w.params.amplitude = j.value("amplitude", 0.0);
  w.params.feature_size = j.value("feature_size", 6.0);
  w.start = {j.at("start").at("x"), j.at("start").at("y")};
  w.start_heading = j.at("start").value("heading", 0.0);
  w.params.start_set = true;
  w.params.start = w.start;
  w.params.start_heading = w.start_heading;
  w.build_heightmap();
  for (const auto& jo : j.at("obstacles"))
    w.obstacles.push_back(obstacle_from_json(jo, w.params.h_occlude));
  w.finalize();
  return w;
}

TerrainWorld load_world_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParamError("cannot open world file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return world_from_json(ss.str());
}

void save_world_file(const TerrainWorld& world, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParamError("cannot write world file: " + path);
  out << world_to_json(world) << "\n";
}

}  // namespace offtrail
