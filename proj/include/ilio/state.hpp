#pragma once

#include "ilio/geometry.hpp"

namespace ilio {

using Vec15 = Eigen::Matrix<double, 15, 1>;
using Mat15 = Eigen::Matrix<double, 15, 15>;

// Navigation state at a scan end time. q rotates body vectors into the
// world frame; v and p are world-frame.
struct State {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Quat q = Quat::Identity();
  Vec3 bias_accel = Vec3::Zero();
  Vec3 bias_gyro = Vec3::Zero();
};

// Error-state ordering [dp, dv, dtheta, dba, dbg]. The pose part is a right
// perturbation: dp applies in the body frame (p + R dp) and dtheta through
// the quaternion boxplus; v and the biases are plain additive.
inline State boxplus(const State& x, const Vec15& dx) {
  State r = x;
  r.p = x.p + x.q * dx.segment<3>(0);
  r.v = x.v + dx.segment<3>(3);
  r.q = boxplus(x.q, Vec3(dx.segment<3>(6)));
  r.bias_accel = x.bias_accel + dx.segment<3>(9);
  r.bias_gyro = x.bias_gyro + dx.segment<3>(12);
  return r;
}

}  // namespace ilio
