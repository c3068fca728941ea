#include "ilio/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <variant>
#include <vector>

namespace ilio {

namespace {

using Target = std::variant<double*, int*, bool*, std::string*, Vec3*>;

struct Binding {
  const char* key;
  Target target;
};

// One flat registry; insertion order is the dump order.
std::vector<Binding> bindings(RunConfig& c) {
  return {
      {"sim.preset", &c.sim.preset},
      {"sim.duration", &c.sim.duration},
      {"sim.still_seconds", &c.sim.still_seconds},
      {"sim.scan_rate", &c.sim.scan_rate},
      {"sim.imu_rate", &c.sim.imu_rate},
      {"sim.points_per_scan", &c.sim.points_per_scan},
      {"sim.lidar_sigma", &c.sim.lidar_sigma},
      {"sim.sigma_gyro", &c.sim.sigma_gyro},
      {"sim.sigma_accel", &c.sim.sigma_accel},
      {"sim.bias_gyro", &c.sim.bias_gyro},
      {"sim.bias_accel", &c.sim.bias_accel},
      {"sim.velocity", &c.sim.velocity},
      {"sim.box_half", &c.sim.box_half},
      {"sim.seed", &c.sim.seed},
      {"init.static_seconds", &c.init.static_seconds},
      {"init.gyro_var_max", &c.init.gyro_var_max},
      {"init.accel_var_max", &c.init.accel_var_max},
      {"imu.sigma_gyro", &c.imu.sigma_gyro},
      {"imu.sigma_accel", &c.imu.sigma_accel},
      {"imu.sigma_bias_gyro", &c.imu.sigma_bias_gyro},
      {"imu.sigma_bias_accel", &c.imu.sigma_bias_accel},
      {"solver.max_outer", &c.solver.max_outer},
      {"solver.max_inner", &c.solver.max_inner},
      {"solver.lambda_init", &c.solver.lambda_init},
      {"solver.step_tol", &c.solver.step_tol},
      {"solver.rel_cost_tol", &c.solver.rel_cost_tol},
      {"solver.bias_threshold", &c.solver.bias_threshold},
      {"solver.min_correspondences", &c.solver.min_correspondences},
      {"solver.one_pass", &c.solver.one_pass},
      {"lidar.sigma", &c.solver.lidar_sigma},
      {"lidar.huber_delta", &c.solver.huber_delta},
      {"lidar.max_match_dist", &c.solver.max_match_dist},
      {"map.voxel_edge", &c.map.voxel_edge},
      {"map.voxel_planar", &c.map.voxel_planar},
      {"map.k_neighbors", &c.map.k_neighbors},
      {"map.max_dist", &c.map.max_dist},
      {"map.eigen_ratio", &c.map.eigen_ratio},
      {"map.plane_fit_max_dist", &c.map.plane_fit_max_dist},
      {"map.plane_rms_max", &c.map.plane_rms_max},
      {"features.window", &c.features.window},
      {"features.sectors", &c.features.sectors},
      {"features.edges_per_sector", &c.features.edges_per_sector},
      {"features.planars_per_sector", &c.features.planars_per_sector},
      {"features.edge_threshold", &c.features.edge_threshold},
      {"features.planar_threshold", &c.features.planar_threshold},
      {"features.min_range", &c.features.min_range},
      {"features.max_range", &c.features.max_range},
  };
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::runtime_error("config key '" + key + "': cannot parse value '" +
                           value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double d = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') bad_value(key, value);
  return d;
}

void assign(const std::string& key, const std::string& value,
            const Target& target) {
  if (std::holds_alternative<double*>(target)) {
    *std::get<double*>(target) = parse_double(key, value);
  } else if (std::holds_alternative<int*>(target)) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') bad_value(key, value);
    *std::get<int*>(target) = static_cast<int>(v);
  } else if (std::holds_alternative<bool*>(target)) {
    if (value == "true" || value == "1") {
      *std::get<bool*>(target) = true;
    } else if (value == "false" || value == "0") {
      *std::get<bool*>(target) = false;
    } else {
      bad_value(key, value);
    }
  } else if (std::holds_alternative<std::string*>(target)) {
    *std::get<std::string*>(target) = value;
  } else {
    std::istringstream in(value);
    Vec3 v;
    if (!(in >> v.x() >> v.y() >> v.z())) bad_value(key, value);
    std::string rest;
    if (in >> rest) bad_value(key, value);
    *std::get<Vec3*>(target) = v;
  }
}

std::string format(const Target& target) {
  char buf[96];
  if (std::holds_alternative<double*>(target)) {
    std::snprintf(buf, sizeof(buf), "%.17g", *std::get<double*>(target));
    return buf;
  }
  if (std::holds_alternative<int*>(target)) {
    return std::to_string(*std::get<int*>(target));
  }
  if (std::holds_alternative<bool*>(target)) {
    return *std::get<bool*>(target) ? "true" : "false";
  }
  if (std::holds_alternative<std::string*>(target)) {
    return *std::get<std::string*>(target);
  }
  const Vec3& v = *std::get<Vec3*>(target);
  std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g", v.x(), v.y(), v.z());
  return buf;
}

}  // namespace

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig c;
  auto binds = bindings(c);

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected 'section.key = value', got '" +
                               line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    bool found = false;
    for (auto& b : binds) {
      if (key == b.key) {
        assign(key, value, b.target);
        found = true;
        break;
      }
    }
    if (!found) throw std::runtime_error("unknown config key '" + key + "'");
  }
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

std::string RunConfig::dump() const {
  // The registry wants mutable pointers; dumping never writes through them.
  auto binds = bindings(const_cast<RunConfig&>(*this));
  std::string out;
  for (const auto& b : binds) {
    out += b.key;
    out += " = ";
    out += format(b.target);
    out += "\n";
  }
  return out;
}

TrajectorySpec trajectory_from(const SimParams& sim) {
  TrajectorySpec spec;
  if (sim.preset == "rest") {
    spec.kind = TrajectoryKind::kRest;
    spec.duration = sim.duration;
  } else if (sim.preset == "constant_velocity") {
    spec.kind = TrajectoryKind::kConstantVelocity;
    spec.duration = sim.duration;
    spec.velocity = sim.velocity;
  } else if (sim.preset == "high_dynamics") {
    spec = high_dynamics_preset(sim.duration, sim.still_seconds);
  } else {
    throw std::runtime_error("unknown sim.preset '" + sim.preset + "'");
  }
  return spec;
}

ImuSynthOptions imu_synth_from(const SimParams& sim) {
  ImuSynthOptions opt;
  opt.rate = sim.imu_rate;
  opt.sigma_gyro = sim.sigma_gyro;
  opt.sigma_accel = sim.sigma_accel;
  opt.bias_gyro = sim.bias_gyro;
  opt.bias_accel = sim.bias_accel;
  opt.seed = static_cast<std::uint64_t>(sim.seed);
  return opt;
}

}  // namespace ilio
