#pragma once

#include <vector>

#include "ilio/geometry.hpp"
#include "ilio/imu.hpp"
#include "ilio/state.hpp"

namespace ilio {

// Relative motion integrated backward from a window end t_end to some time t
// inside the window, expressed in the end frame:
//   gamma : rotation taking vectors from the frame at t into the end frame,
//   beta  : integral of the rotated bias-free specific force (negative going
//           backward),
//   alpha : its double integral.
// The 15x15 covariance is ordered [d_alpha, d_beta, d_theta, d_ba, d_bg],
// where d_theta is a right perturbation of gamma.
struct Preintegration {
  Vec3 alpha = Vec3::Zero();
  Vec3 beta = Vec3::Zero();
  Quat gamma = Quat::Identity();
  double dt = 0.0;  // horizon t_end - t, >= 0

  Vec3 bias_accel_ref = Vec3::Zero();
  Vec3 bias_gyro_ref = Vec3::Zero();

  Mat15 covariance = Mat15::Zero();

  // First-order sensitivities to the reference biases.
  Mat3 dalpha_dba = Mat3::Zero();
  Mat3 dalpha_dbg = Mat3::Zero();
  Mat3 dbeta_dba = Mat3::Zero();
  Mat3 dbeta_dbg = Mat3::Zero();
  Mat3 dtheta_dbg = Mat3::Zero();
};

struct PreintegrationOptions {
  double max_gap = 0.02;  // max spacing between consecutive samples, s
};

// One backward mid-point step extending p (currently at `newer.t`) down to
// `older.t`, updating states, bias sensitivities and covariance.
void backward_step(Preintegration& p, const ImuSample& newer,
                   const ImuSample& older, const ImuNoiseParams& noise);

// Checkpointed backward integration over one scan window. Checkpoints sit at
// every sample time and are indexed newest-first; lookups between samples
// take a single partial step from the nearest newer checkpoint, so per-point
// queries cost O(1) after the O(#samples) build.
class PreintegrationCache {
 public:
  // Samples must cover the window with ascending timestamps and no gap above
  // options.max_gap. Throws std::invalid_argument on malformed input.
  PreintegrationCache(std::vector<ImuSample> samples, const Vec3& bias_accel,
                      const Vec3& bias_gyro, const ImuNoiseParams& noise,
                      const PreintegrationOptions& options = {});

  double t_begin() const { return samples_.front().t; }
  double t_end() const { return samples_.back().t; }

  // Whole window [t_begin, t_end].
  const Preintegration& full() const { return checkpoints_.back(); }

  // Sub-window [t, t_end]. Exact sample times return the stored checkpoint.
  // Throws std::out_of_range outside the window.
  Preintegration at(double t) const;

  // Newest-first: checkpoints()[0] is the identity at t_end.
  const std::vector<Preintegration>& checkpoints() const {
    return checkpoints_;
  }
  const std::vector<ImuSample>& samples() const { return samples_; }
  const Vec3& bias_accel_ref() const { return bias_accel_ref_; }
  const Vec3& bias_gyro_ref() const { return bias_gyro_ref_; }
  const ImuNoiseParams& noise() const { return noise_; }

 private:
  std::vector<ImuSample> samples_;          // ascending
  std::vector<Preintegration> checkpoints_;  // newest-first
  Vec3 bias_accel_ref_;
  Vec3 bias_gyro_ref_;
  ImuNoiseParams noise_;
};

PreintegrationCache integrate_backward(std::vector<ImuSample> samples,
                                       const Vec3& bias_accel,
                                       const Vec3& bias_gyro,
                                       const ImuNoiseParams& noise,
                                       const PreintegrationOptions& options = {});

// Cuts [t0, t1] out of a longer ascending sample stream, synthesizing
// boundary samples by linear interpolation when no sample falls exactly on a
// boundary. Throws std::invalid_argument when the stream does not cover the
// window.
std::vector<ImuSample> slice_window(const std::vector<ImuSample>& samples,
                                    double t0, double t1);

struct BiasCorrected {
  Vec3 alpha;
  Vec3 beta;
  Quat gamma;
};

// First-order update of the integrated quantities to a new bias. Throws
// std::runtime_error when the bias moved further than `threshold` from the
// integration reference, signalling that re-integration is required.
BiasCorrected bias_corrected(const Preintegration& p, const Vec3& bias_accel,
                             const Vec3& bias_gyro, double threshold = 0.1);

// True when the first-order correction is still trusted for this bias.
bool bias_within_threshold(const Preintegration& p, const Vec3& bias_accel,
                           const Vec3& bias_gyro, double threshold = 0.1);

// Whole-window inertial residual, 15 rows ordered like the error state:
// [position, velocity, rotation, accel-bias walk, gyro-bias walk].
// Zero when (prev, curr) are exactly consistent with the integrated motion.
Vec15 imu_residual(const State& curr, const State& prev,
                   const Preintegration& pre, const Vec3& gravity);

// Jacobian of imu_residual with respect to the error state of `curr`
// ([dp body, dv, dtheta, dba, dbg]).
Mat15 imu_residual_jacobian(const State& curr, const State& prev,
                            const Preintegration& pre, const Vec3& gravity);

}  // namespace ilio
