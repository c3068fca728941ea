#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ilio/geometry.hpp"

using namespace ilio;

namespace {

std::mt19937_64 rng(42);

double uniform(double lo, double hi) {
  return lo + (hi - lo) * (double(rng() >> 11) * 0x1.0p-53);
}

Vec3 random_vec(double scale = 1.0) {
  return Vec3(uniform(-scale, scale), uniform(-scale, scale),
              uniform(-scale, scale));
}

Quat random_quat() {
  Vec3 axis = random_vec().normalized();
  return quat_exp(axis * uniform(-3.0, 3.0));
}

}  // namespace

TEST_CASE("skew reproduces the cross product and is antisymmetric") {
  for (int i = 0; i < 100; ++i) {
    Vec3 a = random_vec(10.0), b = random_vec(10.0);
    CHECK((skew(a) * b - a.cross(b)).norm() == doctest::Approx(0.0));
    CHECK((skew(a) + skew(a).transpose()).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("omega_matrix matches the quaternion derivative identity") {
  // 0.5 * Omega(w) * q equals the vector-first layout of q * [0, w/2].
  for (int i = 0; i < 100; ++i) {
    Quat q = random_quat();
    Vec3 w = random_vec(5.0);
    Vec4 qv;  // [x, y, z, w]
    qv << q.x(), q.y(), q.z(), q.w();
    Vec4 lhs = 0.5 * omega_matrix(w) * qv;

    Quat half(0.0, 0.5 * w.x(), 0.5 * w.y(), 0.5 * w.z());
    Quat prod = q * half;
    Vec4 rhs;
    rhs << prod.x(), prod.y(), prod.z(), prod.w();
    CHECK((lhs - rhs).norm() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("quat_multiply composes rotations and keeps unit norm") {
  Quat z90 = quat_exp(Vec3(0, 0, M_PI / 2));
  Quat z180 = quat_multiply(z90, z90);
  CHECK(rotation_distance(z180, quat_exp(Vec3(0, 0, M_PI))) < 1e-12);

  for (int i = 0; i < 100; ++i) {
    Quat a = random_quat(), b = random_quat(), c = random_quat();
    Quat ab_c = quat_multiply(quat_multiply(a, b), c);
    Quat a_bc = quat_multiply(a, quat_multiply(b, c));
    CHECK(std::abs(ab_c.norm() - 1.0) < 1e-12);
    CHECK(rotation_distance(ab_c, a_bc) < 1e-12);
    Quat id = quat_multiply(a, a.conjugate());
    CHECK(rotation_distance(id, Quat::Identity()) < 1e-12);
  }
}

TEST_CASE("canonical forces a nonnegative scalar part") {
  for (int i = 0; i < 100; ++i) {
    Quat q = random_quat();
    q.coeffs() *= -1.0;
    Quat c = canonical(q);
    CHECK(c.w() >= 0.0);
    CHECK(rotation_distance(c, q) < 1e-12);
  }
}

TEST_CASE("quat_exp / quat_log round trip") {
  for (int i = 0; i < 200; ++i) {
    Vec3 theta = random_vec().normalized() * uniform(1e-14, 3.1);
    Vec3 back = quat_log(quat_exp(theta));
    CHECK((back - theta).norm() < 1e-9 * std::max(1.0, theta.norm()));
  }
  // Exactly zero and exactly pi-magnitude vectors.
  CHECK(quat_log(quat_exp(Vec3::Zero())).norm() == 0.0);
  Vec3 pi_vec(0, 0, M_PI);
  CHECK((quat_log(quat_exp(pi_vec)) - pi_vec).norm() < 1e-9);
}

TEST_CASE("boxplus with a 1e-12 step moves the rotation by at most 1e-9") {
  Quat q = random_quat();
  Quat moved = boxplus(q, Vec3(1e-12, 0, 0));
  CHECK(rotation_distance(moved, q) <= 1e-9);
  CHECK(rotation_distance(moved, q) > 0.0);
}

TEST_CASE("boxminus inverts boxplus") {
  for (int i = 0; i < 100; ++i) {
    Quat q = random_quat();
    Vec3 d = random_vec().normalized() * uniform(0.0, 3.0);
    CHECK((boxminus(boxplus(q, d), q) - d).norm() < 1e-10);
  }
}

TEST_CASE("quat_slerp endpoints, midpoint, and antipodal handling") {
  Quat a = Quat::Identity();
  Quat b = quat_exp(Vec3(0, 0, 170.0 * M_PI / 180.0));
  CHECK(rotation_distance(quat_slerp(a, b, 0.0), a) < 1e-12);
  CHECK(rotation_distance(quat_slerp(a, b, 1.0), b) < 1e-12);
  Quat mid = quat_slerp(a, b, 0.5);
  CHECK(rotation_distance(mid, quat_exp(Vec3(0, 0, 85.0 * M_PI / 180.0))) <
        1e-12);

  // Negating one endpoint must not change the interpolated rotation.
  Quat bneg = b;
  bneg.coeffs() *= -1.0;
  for (double u : {0.25, 0.5, 0.75}) {
    CHECK(rotation_distance(quat_slerp(a, b, u), quat_slerp(a, bneg, u)) <
          1e-12);
  }
}

TEST_CASE("RigidTransform inverse and composition") {
  for (int i = 0; i < 100; ++i) {
    RigidTransform T{random_quat(), random_vec(10.0)};
    RigidTransform I = T * T.inverse();
    CHECK(rotation_distance(I.q, Quat::Identity()) < 1e-12);
    CHECK(I.t.norm() < 1e-12);

    RigidTransform A{random_quat(), random_vec(5.0)},
        B{random_quat(), random_vec(5.0)};
    Vec3 p = random_vec(5.0);
    // Composition agrees with the homogeneous-matrix oracle.
    Eigen::Matrix4d Ma = Eigen::Matrix4d::Identity(),
                    Mb = Eigen::Matrix4d::Identity();
    Ma.topLeftCorner<3, 3>() = A.q.toRotationMatrix();
    Ma.topRightCorner<3, 1>() = A.t;
    Mb.topLeftCorner<3, 3>() = B.q.toRotationMatrix();
    Mb.topRightCorner<3, 1>() = B.t;
    Vec4 ph;
    ph << p, 1.0;
    Vec3 expect = (Ma * Mb * ph).head<3>();
    CHECK(((A * B) * p - expect).norm() < 1e-10);
  }
}

TEST_CASE("interpolate is identity-consistent at the endpoints") {
  RigidTransform A{random_quat(), random_vec(2.0)};
  RigidTransform B{random_quat(), random_vec(2.0)};
  RigidTransform at0 = interpolate(A, B, 0.0);
  RigidTransform at1 = interpolate(A, B, 1.0);
  CHECK(rotation_distance(at0.q, A.q) < 1e-12);
  CHECK((at0.t - A.t).norm() < 1e-12);
  CHECK(rotation_distance(at1.q, B.q) < 1e-12);
  CHECK((at1.t - B.t).norm() < 1e-12);
  RigidTransform mid = interpolate(A, B, 0.5);
  CHECK((mid.t - 0.5 * (A.t + B.t)).norm() < 1e-12);
}
