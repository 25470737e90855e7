#include "offtrail/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace offtrail {

using nlohmann::json;

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::string map_to_json(const TopoMap& map) {
  json j;
  j["schema_version"] = 1;
  json nodes = json::array();
  for (NodeId id : map.active_nodes()) {
    const Node& n = map.node(id);
    nodes.push_back({{"id", n.id},
                     {"x", n.pose.position.x},
                     {"y", n.pose.position.y},
                     {"heading", n.pose.heading},
                     {"kind", n.kind == NodeKind::Visited ? "visited" : "frontier"},
                     {"terrain_height", n.terrain_height}});
  }
  j["nodes"] = nodes;
  json edges = json::array();
  for (const auto& [key, e] : map.edges()) {
    edges.push_back({{"a", key.first},
                     {"b", key.second},
                     {"state", edge_state_name(e.state)},
                     {"length", e.length}});
  }
  j["edges"] = edges;
  return j.dump(2);
}

MapData map_data_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("map json parse error: ") + e.what());
  }
  if (j.value("schema_version", 0) != 1)
    throw SchemaError("unsupported map schema_version");
  MapData out;
  try {
    for (const auto& n : j.at("nodes")) {
      out.nodes.push_back({n.at("id"), n.at("x"), n.at("y"), n.at("heading"),
                           n.at("kind"), n.at("terrain_height")});
    }
    for (const auto& e : j.at("edges")) {
      const auto state = edge_state_from_name(e.at("state"));
      if (!state) throw SchemaError("bad edge state in map json");
      out.edges.push_back({e.at("a"), e.at("b"), *state, e.at("length")});
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("map json schema error: ") + e.what());
  }
  return out;
}

MapData map_data_from_map(const TopoMap& map) {
  return map_data_from_json(map_to_json(map));
}

std::string trajectory_to_csv(const std::vector<TrajectoryRow>& rows) {
  std::ostringstream os;
  os << "tick,x,y,heading,v,w,event\n";
  for (const auto& r : rows) {
    os << r.tick << ',' << fmt(r.x) << ',' << fmt(r.y) << ',' << fmt(r.heading)
       << ',' << fmt(r.v) << ',' << fmt(r.w) << ',' << r.event << '\n';
  }
  return os.str();
}

std::vector<TrajectoryRow> trajectory_from_csv(const std::string& text) {
  std::vector<TrajectoryRow> out;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("tick,", 0) != 0)
    throw SchemaError("trajectory csv: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TrajectoryRow r;
    std::istringstream ls(line);
    std::string field;
    auto next = [&]() {
      if (!std::getline(ls, field, ','))
        throw SchemaError("trajectory csv: short row");
      return field;
    };
    r.tick = std::stoull(next());
    r.x = std::stod(next());
    r.y = std::stod(next());
    r.heading = std::stod(next());
    r.v = std::stod(next());
    r.w = std::stod(next());
    std::getline(ls, r.event, ',');
    out.push_back(r);
  }
  return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "seed,p_fp,p_fn,cells_total,cells_visited,distance_m,"
        "n_traversability_errors,n_controller_errors,n_timeouts,ticks,"
        "complete,config_hash\n";
  for (const auto& r : rows) {
    os << r.seed << ',' << fmt(r.p_fp, "%.4f") << ',' << fmt(r.p_fn, "%.4f")
       << ',' << r.cells_total << ',' << r.cells_visited << ','
       << fmt(r.distance_m, "%.3f") << ',' << r.n_traversability_errors << ','
       << r.n_controller_errors << ',' << r.n_timeouts << ',' << r.ticks << ','
       << (r.complete ? 1 : 0) << ',' << r.config_hash << '\n';
  }
  return os.str();
}

std::string confusion_to_csv(const std::vector<ConfusionRow>& rows) {
  std::ostringstream os;
  os << "run_id,p_fp,p_fn,tp,fp,tn,fn\n";
  for (const auto& r : rows) {
    os << r.run_id << ',' << fmt(r.p_fp, "%.4f") << ',' << fmt(r.p_fn, "%.4f")
       << ',' << r.matrix.tp << ',' << r.matrix.fp << ',' << r.matrix.tn << ','
       << r.matrix.fn << '\n';
  }
  return os.str();
}

namespace {

// Blue -> pale yellow -> red ramp over the node height range.
std::string height_color(double h, double lo, double hi) {
  double t = hi > lo ? (h - lo) / (hi - lo) : 0.5;
  t = std::clamp(t, 0.0, 1.0);
  auto lerp = [](int a, int b, double u) {
    return static_cast<int>(std::lround(a + (b - a) * u));
  };
  int r, g, b;
  if (t < 0.5) {
    const double u = t * 2.0;
    r = lerp(0x2c, 0xff, u);
    g = lerp(0x7b, 0xff, u);
    b = lerp(0xb6, 0xbf, u);
  } else {
    const double u = (t - 0.5) * 2.0;
    r = lerp(0xff, 0xd7, u);
    g = lerp(0xff, 0x19, u);
    b = lerp(0xbf, 0x1c, u);
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string render_svg(const MapData& map,
                       const std::vector<TrajectoryRow>& trajectory,
                       const TerrainWorld* world) {
  Rect box{-12, -12, 12, 12};
  if (world) {
    box = world->bounds();
  } else if (!map.nodes.empty()) {
    box = {map.nodes[0].x, map.nodes[0].y, map.nodes[0].x, map.nodes[0].y};
    for (const auto& n : map.nodes) {
      box.xmin = std::min(box.xmin, n.x - 2);
      box.ymin = std::min(box.ymin, n.y - 2);
      box.xmax = std::max(box.xmax, n.x + 2);
      box.ymax = std::max(box.ymax, n.y + 2);
    }
  }
  const double s = 30.0;
  auto px = [&](double x) { return fmt((x - box.xmin) * s, "%.2f"); };
  auto py = [&](double y) { return fmt((box.ymax - y) * s, "%.2f"); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
     << fmt(box.width() * s, "%.0f") << "\" height=\""
     << fmt(box.height() * s, "%.0f") << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#f2efe6\"/>\n";

  if (world) {
    os << "<g id=\"terrain\">\n";
    for (const auto& o : world->obstacles) {
      switch (o.kind) {
        case ObstacleKind::Water: {
          os << "<polygon points=\"";
          for (const auto& p : o.polygon)
            os << px(p.x) << ',' << py(p.y) << ' ';
          os << "\" fill=\"#7ec8e3\" stroke=\"#4f9fc4\"/>\n";
          break;
        }
        case ObstacleKind::FallenTree:
          os << "<line x1=\"" << px(o.a.x) << "\" y1=\"" << py(o.a.y)
             << "\" x2=\"" << px(o.b.x) << "\" y2=\"" << py(o.b.y)
             << "\" stroke=\"#8b5a2b\" stroke-width=\""
             << fmt(2 * o.half_width * s, "%.2f")
             << "\" stroke-linecap=\"round\"/>\n";
          break;
        case ObstacleKind::Rock:
          os << "<circle cx=\"" << px(o.center.x) << "\" cy=\""
             << py(o.center.y) << "\" r=\"" << fmt(o.radius * s, "%.2f")
             << "\" fill=\"#9a9a9a\"/>\n";
          break;
      }
    }
    os << "</g>\n";
  }

  std::map<NodeId, const MapData::NodeRow*> by_id;
  double h_lo = 0, h_hi = 0;
  bool first = true;
  for (const auto& n : map.nodes) {
    by_id[n.id] = &n;
    if (first || n.terrain_height < h_lo) h_lo = n.terrain_height;
    if (first || n.terrain_height > h_hi) h_hi = n.terrain_height;
    first = false;
  }

  os << "<g id=\"edges\">\n";
  for (const auto& e : map.edges) {
    auto ia = by_id.find(e.a);
    auto ib = by_id.find(e.b);
    if (ia == by_id.end() || ib == by_id.end()) continue;
    const char* style;
    switch (e.state) {
      case EdgeState::Traversable:
        style = "stroke=\"#2e7d32\" stroke-width=\"2\"";
        break;
      case EdgeState::Untraversable:
        style = "stroke=\"#c62828\" stroke-width=\"2\" stroke-dasharray=\"8,5\"";
        break;
      default:
        style = "stroke=\"#9e9e9e\" stroke-width=\"1.5\" stroke-dasharray=\"2,4\"";
        break;
    }
    os << "<line x1=\"" << px(ia->second->x) << "\" y1=\"" << py(ia->second->y)
       << "\" x2=\"" << px(ib->second->x) << "\" y2=\"" << py(ib->second->y)
       << "\" " << style << "/>\n";
  }
  os << "</g>\n";

  if (!trajectory.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#1565c0\" stroke-width=\"1.5\" "
          "points=\"";
    for (const auto& r : trajectory) os << px(r.x) << ',' << py(r.y) << ' ';
    os << "\"/>\n";
  }

  os << "<g id=\"nodes\">\n";
  for (const auto& n : map.nodes) {
    if (n.kind == "frontier") {
      os << "<circle cx=\"" << px(n.x) << "\" cy=\"" << py(n.y)
         << "\" r=\"5\" fill=\"none\" stroke=\"#ef6c00\" stroke-width=\"2\"/>\n";
    } else {
      os << "<circle cx=\"" << px(n.x) << "\" cy=\"" << py(n.y)
         << "\" r=\"4\" fill=\"" << height_color(n.terrain_height, h_lo, h_hi)
         << "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
    }
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace offtrail
