#include "ilio/preintegration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ilio {

namespace {

// First-order bias update without the re-linearization gate; the gate is the
// caller's concern (the estimator re-integrates when it trips).
BiasCorrected correct_unchecked(const Preintegration& p, const Vec3& ba,
                                const Vec3& bg) {
  const Vec3 dba = ba - p.bias_accel_ref;
  const Vec3 dbg = bg - p.bias_gyro_ref;
  BiasCorrected c;
  c.alpha = p.alpha + p.dalpha_dba * dba + p.dalpha_dbg * dbg;
  c.beta = p.beta + p.dbeta_dba * dba + p.dbeta_dbg * dbg;
  c.gamma = quat_multiply(p.gamma, quat_exp(p.dtheta_dbg * dbg));
  return c;
}

}  // namespace

void backward_step(Preintegration& p, const ImuSample& newer,
                   const ImuSample& older, const ImuNoiseParams& noise) {
  const double dt = newer.t - older.t;
  const Vec3 a1 = newer.accel - p.bias_accel_ref;
  const Vec3 a0 = older.accel - p.bias_accel_ref;
  const Vec3 w_mid = 0.5 * (newer.gyro + older.gyro) - p.bias_gyro_ref;

  const Quat q_step = quat_exp(-w_mid * dt);
  const Mat3 R1 = p.gamma.toRotationMatrix();
  const Quat gamma_new = quat_multiply(p.gamma, q_step);
  const Mat3 R0 = gamma_new.toRotationMatrix();

  const Vec3 beta_new = p.beta - 0.5 * (R1 * a1 + R0 * a0) * dt;
  const Vec3 alpha_new = p.alpha - 0.5 * (p.beta + beta_new) * dt;

  // Per-step transition blocks; Jr keeps the theta/bias coupling exact for
  // this discrete recursion.
  const Mat3 RQt = q_step.toRotationMatrix().transpose();
  const Mat3 Jr = so3_right_jacobian(-w_mid * dt);
  const Mat3 Tw = dt * Jr;
  const Mat3 S = 0.5 * dt * (R1 * skew(a1) + R0 * skew(a0) * RQt);
  const Mat3 Ba = 0.5 * dt * (R1 + R0);
  const Mat3 Bw = 0.5 * dt * R0 * skew(a0) * Tw;

  const Mat3 Jtheta_old = p.dtheta_dbg;
  const Mat3 dbeta_dba_inc = Ba;
  const Mat3 dbeta_dbg_inc = S * Jtheta_old + Bw;
  p.dtheta_dbg = RQt * Jtheta_old + Tw;
  p.dalpha_dba += -dt * p.dbeta_dba - 0.5 * dt * dbeta_dba_inc;
  p.dalpha_dbg += -dt * p.dbeta_dbg - 0.5 * dt * dbeta_dbg_inc;
  p.dbeta_dba += dbeta_dba_inc;
  p.dbeta_dbg += dbeta_dbg_inc;

  Mat15 F = Mat15::Identity();
  F.block<3, 3>(0, 3) = -dt * Mat3::Identity();
  F.block<3, 3>(0, 6) = -0.5 * dt * S;
  F.block<3, 3>(0, 9) = -0.5 * dt * Ba;
  F.block<3, 3>(0, 12) = -0.5 * dt * Bw;
  F.block<3, 3>(3, 6) = S;
  F.block<3, 3>(3, 9) = Ba;
  F.block<3, 3>(3, 12) = Bw;
  F.block<3, 3>(6, 6) = RQt;
  F.block<3, 3>(6, 12) = Tw;

  // One noise input per channel per step, covariance sigma^2 / dt
  // (continuous density discretized at the local rate).
  Eigen::Matrix<double, 15, 12> G = Eigen::Matrix<double, 15, 12>::Zero();
  G.block<3, 3>(0, 0) = -0.5 * dt * Ba;
  G.block<3, 3>(0, 3) = -0.5 * dt * Bw;
  G.block<3, 3>(3, 0) = Ba;
  G.block<3, 3>(3, 3) = Bw;
  G.block<3, 3>(6, 3) = Tw;
  G.block<3, 3>(9, 6) = dt * Mat3::Identity();
  G.block<3, 3>(12, 9) = dt * Mat3::Identity();

  Eigen::Matrix<double, 12, 1> qdiag;
  qdiag.segment<3>(0).setConstant(noise.sigma_accel * noise.sigma_accel / dt);
  qdiag.segment<3>(3).setConstant(noise.sigma_gyro * noise.sigma_gyro / dt);
  qdiag.segment<3>(6).setConstant(noise.sigma_bias_accel *
                                  noise.sigma_bias_accel / dt);
  qdiag.segment<3>(9).setConstant(noise.sigma_bias_gyro *
                                  noise.sigma_bias_gyro / dt);

  p.covariance = F * p.covariance * F.transpose() +
                 G * qdiag.asDiagonal() * G.transpose();

  p.alpha = alpha_new;
  p.beta = beta_new;
  p.gamma = gamma_new;
  p.dt += dt;
}

PreintegrationCache::PreintegrationCache(std::vector<ImuSample> samples,
                                         const Vec3& bias_accel,
                                         const Vec3& bias_gyro,
                                         const ImuNoiseParams& noise,
                                         const PreintegrationOptions& options)
    : samples_(std::move(samples)),
      bias_accel_ref_(bias_accel),
      bias_gyro_ref_(bias_gyro),
      noise_(noise) {
  noise_.validate();
  if (samples_.size() < 2) {
    throw std::invalid_argument(
        "integrate_backward: need at least 2 samples, got " +
        std::to_string(samples_.size()));
  }
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    const double dt = samples_[i].t - samples_[i - 1].t;
    if (dt <= 0.0) {
      throw std::invalid_argument(
          "integrate_backward: non-increasing timestamps at index " +
          std::to_string(i));
    }
    if (dt > options.max_gap) {
      throw std::invalid_argument(
          "integrate_backward: sample gap " + std::to_string(dt) +
          " s exceeds max_gap " + std::to_string(options.max_gap) + " s");
    }
  }

  checkpoints_.reserve(samples_.size());
  Preintegration p;
  p.bias_accel_ref = bias_accel_ref_;
  p.bias_gyro_ref = bias_gyro_ref_;
  checkpoints_.push_back(p);  // identity at t_end
  for (std::size_t i = samples_.size() - 1; i > 0; --i) {
    backward_step(p, samples_[i], samples_[i - 1], noise_);
    checkpoints_.push_back(p);
  }
}

Preintegration PreintegrationCache::at(double t) const {
  if (t < t_begin() - 1e-12 || t > t_end() + 1e-12) {
    throw std::out_of_range("sub_preintegration: time " + std::to_string(t) +
                            " outside window [" + std::to_string(t_begin()) +
                            ", " + std::to_string(t_end()) + "]");
  }
  t = std::clamp(t, t_begin(), t_end());
  // First sample with time >= t, searching the ascending list.
  const auto it = std::lower_bound(
      samples_.begin(), samples_.end(), t,
      [](const ImuSample& s, double v) { return s.t < v; });
  const std::size_t j = std::size_t(it - samples_.begin());
  const std::size_t n = samples_.size();
  if (it != samples_.end() && it->t == t) {
    return checkpoints_[n - 1 - j];  // exact checkpoint
  }
  // t lies strictly between samples j-1 and j: one partial step from the
  // checkpoint at sample j down to t, with the older measurement
  // interpolated.
  Preintegration p = checkpoints_[n - 1 - j];
  const ImuSample mid = interpolate_sample(samples_[j - 1], samples_[j], t);
  backward_step(p, samples_[j], mid, noise_);
  return p;
}

PreintegrationCache integrate_backward(std::vector<ImuSample> samples,
                                       const Vec3& bias_accel,
                                       const Vec3& bias_gyro,
                                       const ImuNoiseParams& noise,
                                       const PreintegrationOptions& options) {
  return PreintegrationCache(std::move(samples), bias_accel, bias_gyro, noise,
                             options);
}

std::vector<ImuSample> slice_window(const std::vector<ImuSample>& samples,
                                    double t0, double t1) {
  constexpr double kTimeEps = 1e-9;
  if (!(t1 > t0)) {
    throw std::invalid_argument("slice_window: empty window");
  }
  if (samples.empty() || samples.front().t > t0 + kTimeEps ||
      samples.back().t < t1 - kTimeEps) {
    throw std::invalid_argument(
        "slice_window: samples do not cover [" + std::to_string(t0) + ", " +
        std::to_string(t1) + "]");
  }
  std::vector<ImuSample> out;
  // Bracketing index for t0: last sample with t <= t0 (+eps).
  auto lo = std::upper_bound(
      samples.begin(), samples.end(), t0 + kTimeEps,
      [](double v, const ImuSample& s) { return v < s.t; });
  std::size_t i = std::size_t(lo - samples.begin());  // first sample after t0
  if (std::abs(samples[i - 1].t - t0) <= kTimeEps) {
    out.push_back(samples[i - 1]);
    out.back().t = t0;
  } else {
    out.push_back(interpolate_sample(samples[i - 1], samples[i], t0));
  }
  while (i < samples.size() && samples[i].t < t1 - kTimeEps) {
    out.push_back(samples[i]);
    ++i;
  }
  if (i < samples.size() && std::abs(samples[i].t - t1) <= kTimeEps) {
    out.push_back(samples[i]);
    out.back().t = t1;
  } else {
    out.push_back(interpolate_sample(samples[i - 1], samples[i], t1));
  }
  return out;
}

bool bias_within_threshold(const Preintegration& p, const Vec3& bias_accel,
                           const Vec3& bias_gyro, double threshold) {
  return (bias_accel - p.bias_accel_ref).norm() <= threshold &&
         (bias_gyro - p.bias_gyro_ref).norm() <= threshold;
}

BiasCorrected bias_corrected(const Preintegration& p, const Vec3& bias_accel,
                             const Vec3& bias_gyro, double threshold) {
  if (!bias_within_threshold(p, bias_accel, bias_gyro, threshold)) {
    throw std::runtime_error(
        "bias_corrected: bias moved beyond the first-order trust region; "
        "re-integration required");
  }
  return correct_unchecked(p, bias_accel, bias_gyro);
}

Vec15 imu_residual(const State& curr, const State& prev,
                   const Preintegration& pre, const Vec3& gravity) {
  const Mat3 Rt = curr.q.conjugate().toRotationMatrix();
  const double T = pre.dt;
  const BiasCorrected c =
      correct_unchecked(pre, curr.bias_accel, curr.bias_gyro);

  Vec15 r;
  r.segment<3>(0) =
      Rt * (curr.p - curr.v * T - 0.5 * gravity * T * T - prev.p) + c.alpha;
  r.segment<3>(3) = Rt * (curr.v + gravity * T - prev.v) + c.beta;
  const Quat d = canonical(curr.q.conjugate() * prev.q * c.gamma.conjugate());
  r.segment<3>(6) = 2.0 * d.vec();
  r.segment<3>(9) = curr.bias_accel - prev.bias_accel;
  r.segment<3>(12) = curr.bias_gyro - prev.bias_gyro;
  return r;
}

Mat15 imu_residual_jacobian(const State& curr, const State& prev,
                            const Preintegration& pre, const Vec3& gravity) {
  const Mat3 Rt = curr.q.conjugate().toRotationMatrix();
  const double T = pre.dt;
  const BiasCorrected c =
      correct_unchecked(pre, curr.bias_accel, curr.bias_gyro);
  const Quat d = canonical(curr.q.conjugate() * prev.q * c.gamma.conjugate());

  const Vec3 s = Rt * (curr.p - curr.v * T - 0.5 * gravity * T * T - prev.p);
  const Vec3 y = Rt * (curr.v + gravity * T - prev.v);

  Mat15 J = Mat15::Zero();
  J.block<3, 3>(0, 0) = Mat3::Identity();
  J.block<3, 3>(0, 3) = -T * Rt;
  J.block<3, 3>(0, 6) = skew(s);
  J.block<3, 3>(0, 9) = pre.dalpha_dba;
  J.block<3, 3>(0, 12) = pre.dalpha_dbg;
  J.block<3, 3>(3, 3) = Rt;
  J.block<3, 3>(3, 6) = skew(y);
  J.block<3, 3>(3, 9) = pre.dbeta_dba;
  J.block<3, 3>(3, 12) = pre.dbeta_dbg;
  J.block<3, 3>(6, 6) = -(d.w() * Mat3::Identity() - skew(d.vec()));
  J.block<3, 3>(6, 12) = -(d.w() * Mat3::Identity() + skew(d.vec())) *
                         c.gamma.toRotationMatrix() * pre.dtheta_dbg;
  J.block<3, 3>(9, 9) = Mat3::Identity();
  J.block<3, 3>(12, 12) = Mat3::Identity();
  return J;
}

}  // namespace ilio
