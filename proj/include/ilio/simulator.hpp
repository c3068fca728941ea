#pragma once

#include <cstdint>
#include <vector>

#include "ilio/geometry.hpp"
#include "ilio/imu.hpp"
#include "ilio/scan.hpp"

namespace ilio {

// Bounded plane patch: points are origin + u*su + v*sv with su in
// [-u_half, u_half], sv in [-v_half, v_half]; u, v, normal orthonormal.
struct PlanePrimitive {
  Vec3 origin = Vec3::Zero();
  Vec3 u = Vec3::UnitX();
  Vec3 v = Vec3::UnitY();
  Vec3 normal = Vec3::UnitZ();
  double u_half = 1.0;
  double v_half = 1.0;
};

// Line segment: anchor + s*direction, s in [-half_extent, half_extent].
struct EdgePrimitive {
  Vec3 anchor = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();
  double half_extent = 1.0;
};

struct SimWorld {
  std::vector<PlanePrimitive> planes;
  std::vector<EdgePrimitive> edges;
};

// Cubic room of side 2*half centered at the origin: six walls plus the four
// vertical corner edges. Enough geometry to constrain all six degrees of
// freedom.
SimWorld box_room(double half = 5.0);

// Distance from a world point to a primitive; id indexes planes first, then
// edges (id >= planes.size() selects an edge).
double point_primitive_distance(const SimWorld& world, int primitive_id,
                                const Vec3& p);

enum class TrajectoryKind { kRest, kConstantVelocity, kSinusoid };

// Analytic trajectory with exact derivatives.
//  - rest: identity forever.
//  - constant_velocity: p = velocity*t, optional constant body rate about
//    rotation_axis (a constant twist).
//  - sinusoid: at rest for still_seconds, then per-axis sinusoidal
//    translation and a sinusoidal rotation angle about a fixed axis, both
//    faded in by a C2 smoothstep envelope over ramp_seconds.
struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::kRest;
  double duration = 5.0;        // motion phase, seconds
  double still_seconds = 11.0;  // rest prefix (sinusoid only)
  double ramp_seconds = 0.5;    // envelope rise time (sinusoid only)

  Vec3 velocity = Vec3::Zero();       // constant_velocity
  double rotation_rate = 0.0;         // rad/s about rotation_axis

  Vec3 translation_amplitude = Vec3::Zero();  // sinusoid, meters per axis
  double translation_frequency = 1.0;         // Hz
  Vec3 translation_phase = Vec3::Zero();      // rad per axis
  Vec3 rotation_axis = Vec3::UnitZ();
  double rotation_amplitude = 0.0;  // rad
  double rotation_frequency = 1.0;  // Hz

  double total_duration() const {
    return kind == TrajectoryKind::kSinusoid ? still_seconds + duration
                                             : duration;
  }
};

// The preset exercised by the accuracy tests: ~3.1 rad/s peak rotation rate
// and 0.5 m translation amplitude on every axis.
TrajectorySpec high_dynamics_preset(double motion_seconds = 5.0,
                                    double still_seconds = 11.0);

struct TrajectorySample {
  RigidTransform pose;          // body-to-world
  Vec3 v = Vec3::Zero();        // world velocity
  Vec3 a_w = Vec3::Zero();      // world acceleration (without gravity)
  Vec3 omega_body = Vec3::Zero();
};

// Closed-form kinematics; throws std::out_of_range outside [0, total].
TrajectorySample truth_at(const TrajectorySpec& spec, double t);

struct ImuSynthOptions {
  double rate = 400.0;     // Hz, >= 100
  double sigma_gyro = 0.0;   // continuous densities; discrete sd = sigma*sqrt(rate)
  double sigma_accel = 0.0;
  double walk_gyro = 0.0;    // bias random-walk densities; 0 freezes the bias
  double walk_accel = 0.0;
  Vec3 bias_gyro = Vec3::Zero();
  Vec3 bias_accel = Vec3::Zero();
  Vec3 gravity = Vec3(0, 0, kDefaultGravity);
  std::uint64_t seed = 0;
};

// Samples the trajectory at the IMU rate over [0, total_duration] and forms
// rate and specific-force measurements with seeded noise and optional bias
// walk.
std::vector<ImuSample> synthesize_imu(const TrajectorySpec& spec,
                                      const ImuSynthOptions& options);

struct SyntheticScan {
  RawScan scan;                    // body-frame points, labeled
  std::vector<Vec3> world_points;  // ground-truth world position per point
  std::vector<int> primitive_ids;  // generating primitive per point
};

// Samples points uniformly on world primitives with evenly spaced timestamps
// across [t_start, t_end]; each point is expressed in the body frame at the
// true pose of its own timestamp (the motion distortion), with optional
// isotropic noise. Roughly a quarter of the points land on edges.
SyntheticScan synthesize_scan(const SimWorld& world, const TrajectorySpec& spec,
                              double t_start, double t_end,
                              int points_per_scan, double noise_sigma,
                              std::uint64_t seed);

}  // namespace ilio
