#pragma once

#include <vector>

#include "ilio/geometry.hpp"

namespace ilio {

inline constexpr double kDefaultGravity = 9.81;

struct ImuSample {
  double t = 0.0;  // seconds
  Vec3 gyro = Vec3::Zero();   // rad/s, body frame
  Vec3 accel = Vec3::Zero();  // m/s^2, body frame (specific force)
};

// Continuous-time noise densities. White noise in (rad/s)/sqrt(Hz) and
// (m/s^2)/sqrt(Hz); bias random walks in (rad/s)*sqrt(Hz) equivalents.
struct ImuNoiseParams {
  double sigma_gyro = 1e-3;
  double sigma_accel = 1e-2;
  double sigma_bias_gyro = 1e-5;
  double sigma_bias_accel = 1e-4;

  // Throws std::invalid_argument unless every density is strictly positive.
  void validate() const;
};

struct ImuState {
  Vec3 bias_accel = Vec3::Zero();
  Vec3 bias_gyro = Vec3::Zero();
  Vec3 gravity = Vec3(0, 0, kDefaultGravity);  // +z up, never estimated
};

struct StaticInitParams {
  double min_duration = 10.0;       // seconds of rest required
  double gyro_var_max = 1e-2;       // per-axis gyro variance gate, (rad/s)^2
  double accel_var_max = 0.5;       // accel-norm variance gate, (m/s^2)^2
  double gravity_magnitude = kDefaultGravity;
};

struct StaticInitResult {
  ImuState state;
  Quat orientation = Quat::Identity();  // body-to-world at the window end
};

// True when the window looks motionless: per-axis gyro variance and the
// variance of the accelerometer norm stay under the gates.
bool is_stationary(const std::vector<ImuSample>& window,
                   const StaticInitParams& params);

// Gravity-aligned initialization from a rest window: gyro bias from the mean
// rate, accel bias left at zero, orientation chosen so the mean specific
// force maps to (0, 0, g) with yaw fixed to zero. Throws std::runtime_error
// when the window is too short or fails the stationarity gates.
StaticInitResult static_initialize(const std::vector<ImuSample>& window,
                                   const StaticInitParams& params);

// ZYX yaw of a rotation, in radians.
double yaw_of(const Quat& q);

// Linear interpolation between two samples at time t (t inside [a.t, b.t]).
ImuSample interpolate_sample(const ImuSample& a, const ImuSample& b, double t);

}  // namespace ilio
