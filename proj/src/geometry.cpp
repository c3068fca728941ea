#include "ilio/geometry.hpp"

#include <cmath>

namespace ilio {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return m;
}

Mat4 omega_matrix(const Vec3& w) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = -skew(w);
  m.topRightCorner<3, 1>() = w;
  m.bottomLeftCorner<1, 3>() = -w.transpose();
  return m;
}

Quat quat_multiply(const Quat& a, const Quat& b) {
  Quat r = a * b;
  r.normalize();
  return r;
}

Quat canonical(const Quat& q) {
  Quat r = q.normalized();
  if (r.w() < 0.0) r.coeffs() = -r.coeffs();
  return r;
}

Quat quat_exp(const Vec3& theta) {
  const double angle = theta.norm();
  double w, s;  // scalar part, vector scale
  if (angle < kSmallAngle) {
    w = 1.0 - angle * angle / 8.0;
    s = 0.5 - angle * angle / 48.0;
  } else {
    w = std::cos(0.5 * angle);
    s = std::sin(0.5 * angle) / angle;
  }
  Quat q(w, s * theta.x(), s * theta.y(), s * theta.z());
  q.normalize();
  return q;
}

Vec3 quat_log(const Quat& q) {
  const Quat c = canonical(q);
  const double vn = c.vec().norm();
  if (vn < kSmallAngle) {
    // atan(x)/x expansion around 0; c.w() ~ 1 here.
    return (2.0 / c.w()) * (1.0 - vn * vn / (3.0 * c.w() * c.w())) * c.vec();
  }
  const double angle = 2.0 * std::atan2(vn, c.w());
  return (angle / vn) * c.vec();
}

Mat3 so3_right_jacobian(const Vec3& v) {
  const double a = v.norm();
  const Mat3 vx = skew(v);
  double c1, c2;  // coefficients of vx and vx^2
  if (a < 1e-4) {
    c1 = 0.5 - a * a / 24.0;
    c2 = 1.0 / 6.0 - a * a / 120.0;
  } else {
    c1 = (1.0 - std::cos(a)) / (a * a);
    c2 = (a - std::sin(a)) / (a * a * a);
  }
  return Mat3::Identity() - c1 * vx + c2 * vx * vx;
}

Quat boxplus(const Quat& q, const Vec3& dtheta) {
  return quat_multiply(q, quat_exp(dtheta));
}

Vec3 boxminus(const Quat& a, const Quat& b) {
  return quat_log(b.conjugate() * a);
}

double rotation_distance(const Quat& a, const Quat& b) {
  return boxminus(a, b).norm();
}

Quat quat_slerp(const Quat& a, const Quat& b, double u) {
  double d = a.dot(b);
  Quat bb = b;
  if (d < 0.0) {  // take the short arc
    bb.coeffs() = -bb.coeffs();
    d = -d;
  }
  if (d > 1.0) d = 1.0;
  const double angle = std::acos(d);
  double wa, wb;
  if (angle < kSmallAngle) {
    wa = 1.0 - u;
    wb = u;
  } else {
    const double s = std::sin(angle);
    wa = std::sin((1.0 - u) * angle) / s;
    wb = std::sin(u * angle) / s;
  }
  Quat r;
  r.coeffs() = wa * a.coeffs() + wb * bb.coeffs();
  r.normalize();
  return r;
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform r;
  r.q = q.conjugate();
  r.t = -(r.q * t);
  return r;
}

RigidTransform RigidTransform::operator*(const RigidTransform& o) const {
  RigidTransform r;
  r.q = quat_multiply(q, o.q);
  r.t = q * o.t + t;
  return r;
}

Vec3 RigidTransform::operator*(const Vec3& p) const { return q * p + t; }

RigidTransform interpolate(const RigidTransform& a, const RigidTransform& b,
                           double u) {
  RigidTransform r;
  r.q = quat_slerp(a.q, b.q, u);
  r.t = (1.0 - u) * a.t + u * b.t;
  return r;
}

}  // namespace ilio
