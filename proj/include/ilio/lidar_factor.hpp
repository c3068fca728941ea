#pragma once

#include <utility>

#include "ilio/map.hpp"
#include "ilio/preintegration.hpp"
#include "ilio/state.hpp"

namespace ilio {

// A-priori per-point undistortion: the motion between the point's capture
// time t_j and the scan end t_k, reconstructed from the sub-preintegration
// and the current estimate of the scan-end state.
struct UndistortionTerms {
  Vec3 p_bar = Vec3::Zero();       // translation of b_j expressed in b_k
  Quat q_bar = Quat::Identity();   // rotation from b_j into b_k
  double mu = 0.0;                 // (t_k - t_j)/(t_k - t_{k-1}) in [0,1]
  double dt = 0.0;                 // t_k - t_j
  Preintegration sub;              // raw sub-window preintegration at t_j
};

// Everything a point residual needs besides the state being optimized.
// `terms` must have been computed at the same state that is passed to the
// residual/jacobian calls (the undistortion is part of the iteration).
struct LidarResidualContext {
  Correspondence corr;
  UndistortionTerms terms;
  Vec3 point = Vec3::Zero();  // raw point in the body frame at t_j
  const State* prev = nullptr;
  const Preintegration* full = nullptr;  // spans [t_{k-1}, t_k]
  Vec3 gravity = Vec3(0, 0, kDefaultGravity);
  double sigma = 0.02;  // isotropic point noise, meters
};

// Reconstructs (p_bar, q_bar) at t_j from the cache and the current scan-end
// state; biases are taken from x_k. Throws std::out_of_range when t_j is
// outside the cache window.
UndistortionTerms apriori_undistort(const PreintegrationCache& cache,
                                    const State& x_k, const Vec3& gravity,
                                    double t_j);

// The interpolated correction transform: the discrepancy between the motion
// the states imply and the motion the preintegration measured, scaled by mu
// (translation linearly, rotation through the scaled quaternion vector part).
RigidTransform correction(const State& x_k, const State& x_prev,
                          const Preintegration& full, const Vec3& gravity,
                          double mu);

// Applies the correction on the left: p = dR*p_bar + dp, q = dq*q_bar.
std::pair<Vec3, Quat> corrected_undistort(const UndistortionTerms& terms,
                                          const RigidTransform& dT);

// World position of the undistorted point at the given state.
Vec3 undistorted_world_point(const LidarResidualContext& ctx, const State& x_k);

// Point-line residual n x (P_w - p0); zero iff the point is on the line.
Vec3 line_residual(const LidarResidualContext& ctx, const State& x_k);

// Signed point-plane distance n . (P_w - p0).
double plane_residual(const LidarResidualContext& ctx, const State& x_k);

// Analytic derivatives with respect to the 15-dim error state of x_k,
// through the full undistortion chain (sub-preintegration, correction,
// bias first-order updates).
Eigen::Matrix<double, 3, 15> line_jacobian(const LidarResidualContext& ctx,
                                           const State& x_k);
Eigen::Matrix<double, 1, 15> plane_jacobian(const LidarResidualContext& ctx,
                                            const State& x_k);

}  // namespace ilio
