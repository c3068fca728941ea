#include "ilio/imu.hpp"

#include <cmath>
#include <stdexcept>

namespace ilio {

void ImuNoiseParams::validate() const {
  if (!(sigma_gyro > 0.0) || !(sigma_accel > 0.0) ||
      !(sigma_bias_gyro > 0.0) || !(sigma_bias_accel > 0.0)) {
    throw std::invalid_argument(
        "ImuNoiseParams: all noise densities must be strictly positive");
  }
}

namespace {

Vec3 mean_gyro(const std::vector<ImuSample>& w) {
  Vec3 m = Vec3::Zero();
  for (const auto& s : w) m += s.gyro;
  return m / double(w.size());
}

Vec3 mean_accel(const std::vector<ImuSample>& w) {
  Vec3 m = Vec3::Zero();
  for (const auto& s : w) m += s.accel;
  return m / double(w.size());
}

}  // namespace

bool is_stationary(const std::vector<ImuSample>& window,
                   const StaticInitParams& params) {
  if (window.size() < 2) return false;
  const Vec3 gm = mean_gyro(window);
  Vec3 gyro_var = Vec3::Zero();
  double an_mean = 0.0;
  for (const auto& s : window) {
    gyro_var += (s.gyro - gm).cwiseAbs2();
    an_mean += s.accel.norm();
  }
  gyro_var /= double(window.size());
  an_mean /= double(window.size());
  double an_var = 0.0;
  for (const auto& s : window) {
    const double d = s.accel.norm() - an_mean;
    an_var += d * d;
  }
  an_var /= double(window.size());
  return gyro_var.maxCoeff() < params.gyro_var_max &&
         an_var < params.accel_var_max;
}

double yaw_of(const Quat& q) {
  const Mat3 R = q.toRotationMatrix();
  return std::atan2(R(1, 0), R(0, 0));
}

StaticInitResult static_initialize(const std::vector<ImuSample>& window,
                                   const StaticInitParams& params) {
  if (window.size() < 2) {
    throw std::runtime_error("static_initialize: window has fewer than 2 samples");
  }
  const double duration = window.back().t - window.front().t;
  if (duration < params.min_duration) {
    throw std::runtime_error(
        "static_initialize: rest window covers " + std::to_string(duration) +
        " s, need " + std::to_string(params.min_duration) + " s");
  }
  if (!is_stationary(window, params)) {
    throw std::runtime_error(
        "static_initialize: motion detected in the init window "
        "(variance gates exceeded)");
  }

  StaticInitResult out;
  out.state.bias_gyro = mean_gyro(window);
  out.state.bias_accel = Vec3::Zero();
  out.state.gravity = Vec3(0, 0, params.gravity_magnitude);

  // Orientation: map the mean specific force onto +z, then remove yaw so the
  // world frame is pinned (yaw is unobservable from gravity).
  const Vec3 am = mean_accel(window);
  if (am.norm() < 0.5 * params.gravity_magnitude) {
    throw std::runtime_error(
        "static_initialize: mean specific force is far from gravity magnitude");
  }
  Quat q_align = Quat::FromTwoVectors(am, Vec3(0, 0, 1));
  const double psi = yaw_of(q_align);
  Quat q0 = quat_multiply(quat_exp(Vec3(0, 0, -psi)), q_align);
  out.orientation = canonical(q0);
  return out;
}

ImuSample interpolate_sample(const ImuSample& a, const ImuSample& b,
                             double t) {
  ImuSample s;
  s.t = t;
  const double span = b.t - a.t;
  const double u = span > 0.0 ? (t - a.t) / span : 0.0;
  s.gyro = (1.0 - u) * a.gyro + u * b.gyro;
  s.accel = (1.0 - u) * a.accel + u * b.accel;
  return s;
}

}  // namespace ilio
