#pragma once

#include <string>

#include "ilio/estimator.hpp"
#include "ilio/imu.hpp"
#include "ilio/map.hpp"
#include "ilio/scan.hpp"
#include "ilio/simulator.hpp"

namespace ilio {

// Simulation block, consumed by the sim command only.
struct SimParams {
  std::string preset = "high_dynamics";  // rest|constant_velocity|high_dynamics
  double duration = 5.0;       // motion seconds (total for the other presets)
  double still_seconds = 1.0;  // rest prefix before the motion phase
  double scan_rate = 10.0;     // sweeps per second
  double imu_rate = 400.0;
  int points_per_scan = 400;
  double lidar_sigma = 0.0;  // isotropic per-point noise, meters
  double sigma_gyro = 0.0;   // IMU measurement noise densities
  double sigma_accel = 0.0;
  Vec3 bias_gyro = Vec3::Zero();
  Vec3 bias_accel = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();  // constant_velocity preset
  double box_half = 5.0;         // room half-extent
  int seed = 0;
};

// Static initialization window, consumed by the run command.
struct InitParams {
  double static_seconds = 1.0;
  double gyro_var_max = 1e-2;
  double accel_var_max = 0.5;
};

// Every tunable, grouped as `section.key`. Field defaults are the effective
// defaults; an empty config file reproduces them exactly.
struct RunConfig {
  SimParams sim;
  InitParams init;
  ImuNoiseParams imu;  // densities assumed by preintegration during a run
  SolverOptions solver;
  MapParams map;
  FeatureExtractionParams features;

  // Parses `section.key = value` lines; `#` starts a comment, blank lines are
  // skipped. Unknown keys and unparsable values throw std::runtime_error
  // naming the offending key.
  static RunConfig from_string(const std::string& text);
  static RunConfig from_file(const std::string& path);

  // Every key with its current value, one per line; re-parses to an identical
  // config.
  std::string dump() const;
};

// Builders for the sim command: translate the sim block into the simulator's
// inputs. Throws std::runtime_error on an unknown preset name.
TrajectorySpec trajectory_from(const SimParams& sim);
ImuSynthOptions imu_synth_from(const SimParams& sim);

}  // namespace ilio
