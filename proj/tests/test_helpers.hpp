#pragma once

#include <vector>

#include "ilio/geometry.hpp"
#include "ilio/imu.hpp"
#include "ilio/rng.hpp"
#include "ilio/state.hpp"

namespace ilio::testutil {

// Forward mid-point strapdown integration, the mirror of the backward
// recursion: quaternion steps on the averaged rate, trapezoidal velocity and
// position updates. Used as the discrete-consistency oracle.
inline State forward_integrate(const State& x0,
                               const std::vector<ImuSample>& samples,
                               const Vec3& gravity) {
  State x = x0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const ImuSample& s0 = samples[i];
    const ImuSample& s1 = samples[i + 1];
    const double dt = s1.t - s0.t;
    const Vec3 w_mid = 0.5 * (s0.gyro + s1.gyro) - x.bias_gyro;
    const Quat q_next = quat_multiply(x.q, quat_exp(w_mid * dt));
    const Vec3 aw0 = x.q * (s0.accel - x.bias_accel) - gravity;
    const Vec3 aw1 = q_next * (s1.accel - x.bias_accel) - gravity;
    const Vec3 v_next = x.v + 0.5 * (aw0 + aw1) * dt;
    x.p += 0.5 * (x.v + v_next) * dt;
    x.v = v_next;
    x.q = q_next;
    x.t = s1.t;
  }
  return x;
}

// Closed forms for constant-rate, constant-force, zero-bias inputs:
// beta(tau) = -const_rate_m1(w, tau) * a, alpha(tau) = const_rate_m2(w, tau) * a,
// gamma(tau) = quat_exp(-w * tau).
inline Mat3 const_rate_m1(const Vec3& w, double tau) {
  const double n = w.norm();
  if (n < 1e-12) return tau * Mat3::Identity();
  const Mat3 K = skew(w / n);
  const double s = std::sin(n * tau), c = std::cos(n * tau);
  return tau * Mat3::Identity() - ((1.0 - c) / n) * K + (tau - s / n) * K * K;
}

inline Mat3 const_rate_m2(const Vec3& w, double tau) {
  const double n = w.norm();
  if (n < 1e-12) return 0.5 * tau * tau * Mat3::Identity();
  const Mat3 K = skew(w / n);
  const double s = std::sin(n * tau), c = std::cos(n * tau);
  return 0.5 * tau * tau * Mat3::Identity() -
         (tau / n - s / (n * n)) * K +
         (0.5 * tau * tau - (1.0 - c) / (n * n)) * K * K;
}

// Constant-input sample train at a given rate over [0, duration].
inline std::vector<ImuSample> constant_samples(const Vec3& gyro,
                                               const Vec3& accel, double rate,
                                               double duration) {
  std::vector<ImuSample> v;
  const int n = int(std::llround(duration * rate));
  for (int i = 0; i <= n; ++i) {
    v.push_back({double(i) / rate, gyro, accel});
  }
  return v;
}

// Smooth synthetic measurement train for generic tests (not a physical
// trajectory; exercises every term).
inline std::vector<ImuSample> wiggly_samples(double rate, double duration,
                                             std::uint64_t seed) {
  GaussianRng rng(seed);
  const Vec3 w0(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
  const Vec3 w1(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
  const Vec3 a0(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(4, 12));
  const Vec3 a1(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
  std::vector<ImuSample> v;
  const int n = int(std::llround(duration * rate));
  for (int i = 0; i <= n; ++i) {
    const double t = double(i) / rate;
    ImuSample s;
    s.t = t;
    s.gyro = w0 + w1 * std::sin(2.0 * M_PI * 1.3 * t);
    s.accel = a0 + a1 * std::sin(2.0 * M_PI * 0.9 * t + 0.4);
    v.push_back(s);
  }
  return v;
}

inline Quat random_quat(GaussianRng& rng) {
  Vec3 ax(rng.normal(), rng.normal(), rng.normal());
  if (ax.norm() < 1e-12) ax = Vec3(1, 0, 0);
  return quat_exp(ax.normalized() * rng.uniform(-2.5, 2.5));
}

inline State random_state(GaussianRng& rng, double t = 0.0) {
  State x;
  x.t = t;
  x.p = Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
  x.v = Vec3(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
  x.q = random_quat(rng);
  x.bias_accel = 0.05 * rng.normal3();
  x.bias_gyro = 0.02 * rng.normal3();
  return x;
}

// Central finite-difference Jacobian of a residual functional with respect
// to the 15-dim error state of x (retraction via boxplus).
template <typename F>
Eigen::MatrixXd fd_jacobian(const F& f, const State& x, int rows,
                            double h = 1e-6) {
  Eigen::MatrixXd J(rows, 15);
  for (int c = 0; c < 15; ++c) {
    Vec15 d = Vec15::Zero();
    d[c] = h;
    const Eigen::VectorXd hi = f(boxplus(x, d));
    d[c] = -h;
    const Eigen::VectorXd lo = f(boxplus(x, d));
    J.col(c) = (hi - lo) / (2.0 * h);
  }
  return J;
}

inline double relative_error(const Eigen::MatrixXd& a,
                             const Eigen::MatrixXd& b) {
  const double denom = std::max(1e-12, b.norm());
  return (a - b).norm() / denom;
}

}  // namespace ilio::testutil
