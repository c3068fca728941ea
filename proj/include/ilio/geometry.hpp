#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace ilio {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Quat = Eigen::Quaterniond;

// Below this rotation angle the exp/log maps switch to their second-order
// Taylor expansions.
inline constexpr double kSmallAngle = 1e-8;

// skew(v) * w == v x w
Mat3 skew(const Vec3& v);

// Quaternion kinematics matrix: q_dot = 0.5 * omega_matrix(w) * q, with the
// quaternion laid out vector-first [x, y, z, w].
Mat4 omega_matrix(const Vec3& w);

// Hamilton product, renormalized.
Quat quat_multiply(const Quat& a, const Quat& b);

// Normalized representative of the double cover with w >= 0.
Quat canonical(const Quat& q);

// Rotation vector (axis * angle) to unit quaternion and back. quat_log
// returns the shortest-arc vector, norm <= pi.
Quat quat_exp(const Vec3& theta);
Vec3 quat_log(const Quat& q);

// Right Jacobian of the SO(3) exponential:
// quat_exp(v + d) == quat_exp(v) * quat_exp(so3_right_jacobian(v) * d) + O(|d|^2).
Mat3 so3_right_jacobian(const Vec3& v);

// Right-perturbation retraction on SO(3) and its inverse:
// boxminus(boxplus(q, d), q) == d for |d| < pi.
Quat boxplus(const Quat& q, const Vec3& dtheta);
Vec3 boxminus(const Quat& a, const Quat& b);

// Geodesic angle between two rotations, in [0, pi].
double rotation_distance(const Quat& a, const Quat& b);

Quat quat_slerp(const Quat& a, const Quat& b, double u);

struct RigidTransform {
  Quat q = Quat::Identity();
  Vec3 t = Vec3::Zero();

  static RigidTransform Identity() { return {}; }

  RigidTransform inverse() const;
  RigidTransform operator*(const RigidTransform& o) const;
  Vec3 operator*(const Vec3& p) const;
};

// Screw-free interpolation: slerp on rotation, lerp on translation.
// u = 0 gives a, u = 1 gives b.
RigidTransform interpolate(const RigidTransform& a, const RigidTransform& b,
                           double u);

}  // namespace ilio
