#include "offtrail/config.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

namespace offtrail {

namespace {

struct Field {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const uint64_t out = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an unsigned integer, got '" +
                      v + "'");
  }
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> f;
    auto dbl = [&f](const std::string& key, double RunConfig::* member) {
      f[key] = {[member](const RunConfig& c) { return fmt_double(c.*member); },
                [member, key](RunConfig& c, const std::string& v) {
                  c.*member = parse_double(key, v);
                }};
    };
    f["seed"] = {[](const RunConfig& c) { return std::to_string(c.seed); },
                 [](RunConfig& c, const std::string& v) {
                   c.seed = parse_u64("seed", v);
                 }};
    f["run.max_ticks"] = {
        [](const RunConfig& c) { return std::to_string(c.max_ticks); },
        [](RunConfig& c, const std::string& v) {
          c.max_ticks = parse_u64("run.max_ticks", v);
        }};
    f["run.R"] = {[](const RunConfig& c) { return std::to_string(c.R); },
                  [](RunConfig& c, const std::string& v) {
                    c.R = static_cast<int>(parse_u64("run.R", v));
                  }};
    f["control.seq_len"] = {
        [](const RunConfig& c) { return std::to_string(c.seq_len); },
        [](RunConfig& c, const std::string& v) {
          c.seq_len = static_cast<int>(parse_u64("control.seq_len", v));
        }};
    f["world.fixture"] = {
        [](const RunConfig& c) { return c.world_fixture; },
        [](RunConfig& c, const std::string& v) { c.world_fixture = v; }};
    f["run.policy"] = {[](const RunConfig& c) { return c.policy; },
                       [](RunConfig& c, const std::string& v) { c.policy = v; }};
    dbl("world.extent", &RunConfig::world_extent);
    dbl("world.amplitude", &RunConfig::amplitude);
    dbl("world.feature_size", &RunConfig::feature_size);
    dbl("world.tree_density", &RunConfig::tree_density);
    dbl("world.rock_density", &RunConfig::rock_density);
    dbl("world.water_density", &RunConfig::water_density);
    dbl("world.gt_resolution", &RunConfig::gt_resolution);
    dbl("world.h_cell", &RunConfig::h_cell);
    dbl("world.slope_max_deg", &RunConfig::slope_max_deg);
    dbl("world.h_occlude", &RunConfig::h_occlude);
    dbl("world.rho", &RunConfig::rho);
    dbl("run.d", &RunConfig::d);
    dbl("run.r", &RunConfig::r);
    dbl("run.lambda", &RunConfig::lambda);
    dbl("run.fov_deg", &RunConfig::fov_deg);
    dbl("run.footprint", &RunConfig::footprint);
    dbl("run.p_fp", &RunConfig::p_fp);
    dbl("run.p_fn", &RunConfig::p_fn);
    dbl("control.v_max", &RunConfig::v_max);
    dbl("control.w_max", &RunConfig::w_max);
    dbl("control.tick", &RunConfig::tick);
    dbl("control.k_w", &RunConfig::k_w);
    dbl("control.goal_tol", &RunConfig::goal_tol);
    dbl("control.timeout_factor", &RunConfig::timeout_factor);
    return f;
  }();
  return table;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = fields().find(key);
    if (it == fields().end())
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    it->second.set(cfg, value);
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_overrides(
    RunConfig& cfg,
    const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [key, value] : kv) {
    auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("unknown key '" + key + "'");
    it->second.set(cfg, value);
  }
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.d > 0)) throw ConfigError("run.d must be positive");
  if (!(cfg.r > cfg.d)) throw ConfigError("r must exceed d");
  if (!(cfg.lambda > 0)) throw ConfigError("run.lambda must be positive");
  if (cfg.R < 2) throw ConfigError("run.R must be at least 2");
  if (cfg.p_fp < 0 || cfg.p_fp > 1) throw ConfigError("run.p_fp must be in [0,1]");
  if (cfg.p_fn < 0 || cfg.p_fn > 1) throw ConfigError("run.p_fn must be in [0,1]");
  if (!(cfg.v_max > 0)) throw ConfigError("control.v_max must be positive");
  if (!(cfg.w_max > 0)) throw ConfigError("control.w_max must be positive");
  if (!(cfg.tick > 0)) throw ConfigError("control.tick must be positive");
  if (cfg.seq_len < 1) throw ConfigError("control.seq_len must be at least 1");
  if (!(cfg.footprint >= 0)) throw ConfigError("run.footprint must be >= 0");
  if (!(cfg.fov_deg > 0 && cfg.fov_deg <= 180))
    throw ConfigError("run.fov_deg must be in (0,180]");
  if (cfg.policy != "kinematic" && cfg.policy != "euclidean")
    throw ConfigError("run.policy must be 'kinematic' or 'euclidean'");
  if (cfg.world_fixture.empty()) {
    if (cfg.tree_density < 0 || cfg.rock_density < 0 || cfg.water_density < 0)
      throw ConfigError("world densities must be non-negative");
    if (!(cfg.world_extent * cfg.world_extent >= 4.0))
      throw ConfigError("world.extent too small");
  }
}

std::string config_to_text(const RunConfig& cfg) {
  std::ostringstream os;
  for (const auto& [key, field] : fields())
    os << key << " = " << field.get(cfg) << "\n";
  return os.str();
}

std::string config_hash(const RunConfig& cfg) {
  // FNV-1a 64.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : config_to_text(cfg)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

WorldParams world_params_from_config(const RunConfig& cfg) {
  WorldParams p;
  const double half = cfg.world_extent / 2.0;
  p.bounds = {-half, -half, half, half};
  p.amplitude = cfg.amplitude;
  p.feature_size = cfg.feature_size;
  p.tree_density = cfg.tree_density;
  p.rock_density = cfg.rock_density;
  p.water_density = cfg.water_density;
  p.gt_resolution = cfg.gt_resolution;
  p.h_cell = cfg.h_cell;
  p.slope_max_deg = cfg.slope_max_deg;
  p.h_occlude = cfg.h_occlude;
  p.rho = cfg.rho;
  return p;
}

ExploreParams explore_params_from_config(const RunConfig& cfg) {
  ExploreParams e;
  e.seed = cfg.seed;
  e.d = cfg.d;
  e.r = cfg.r;
  e.lambda = cfg.lambda;
  e.R = cfg.R;
  e.fov_deg = cfg.fov_deg;
  e.p_fp = cfg.p_fp;
  e.p_fn = cfg.p_fn;
  e.max_ticks = cfg.max_ticks;
  e.policy = cfg.policy == "euclidean" ? FrontierPolicy::Euclidean
                                       : FrontierPolicy::KinematicTime;
  e.skid.v_max = cfg.v_max;
  e.skid.w_max = cfg.w_max;
  e.skid.tick = cfg.tick;
  e.skid.footprint_radius = cfg.footprint;
  e.skid.seq_len = cfg.seq_len;
  e.skid.k_w = cfg.k_w;
  e.skid.goal_tol = cfg.goal_tol;
  e.skid.timeout_factor = cfg.timeout_factor;
  return e;
}

}  // namespace offtrail
