#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "ilio/geometry.hpp"
#include "ilio/imu.hpp"
#include "ilio/lidar_factor.hpp"
#include "ilio/map.hpp"
#include "ilio/preintegration.hpp"
#include "ilio/scan.hpp"
#include "ilio/state.hpp"

namespace ilio {

// IMU-only propagation of `prev` through the window summarized by `pre`.
// Inverts the relative-motion residual exactly: the result has zero residual
// against `pre` by construction.
State predict_state(const State& prev, const Preintegration& pre,
                    const Vec3& gravity);

// One cost term over the 15-dim error state of the scan-end state.
class Factor {
 public:
  virtual ~Factor() = default;

  // Adds this factor's contribution at x to the normal equations (H, g may
  // be null for a pure cost query) and returns the cost: half the weighted
  // squared residual, with the robust loss applied where configured.
  virtual double accumulate(const State& x, Mat15* H, Vec15* g) const = 0;
};

// Relative-motion prior from preintegrated inertial measurements, weighted by
// the inverse of the propagated covariance. The previous state is fixed.
class ImuFactor : public Factor {
 public:
  ImuFactor(const State* prev, const Preintegration* pre, const Vec3& gravity);
  double accumulate(const State& x, Mat15* H, Vec15* g) const override;

 private:
  const State* prev_;
  const Preintegration* pre_;
  Vec3 gravity_;
  Mat15 info_;
};

// Point-to-line / point-to-plane term. In iterated mode the point's
// undistortion is recomputed at every evaluation state, so the residual sees
// the full dependence of the corrected point on pose, velocity and biases.
// In one-pass mode the body-frame point is frozen (classical undistort-once)
// and only the scan-end pose enters.
class LidarFactor : public Factor {
 public:
  // Iterated point-level undistortion.
  LidarFactor(const Correspondence& corr, const Vec3& raw_point, double t_j,
              const PreintegrationCache* cache, const State* prev,
              const Vec3& gravity, double sigma, double huber_delta);

  // One-pass: `frozen_point` is the undistorted body-frame point at the
  // prediction, treated as rigid from then on.
  LidarFactor(const Correspondence& corr, const Vec3& frozen_point,
              double sigma, double huber_delta);

  double accumulate(const State& x, Mat15* H, Vec15* g) const override;

  // Unweighted point-to-primitive distance at x.
  double distance(const State& x) const;

  bool is_line() const { return corr_.kind == Correspondence::Kind::kLine; }

 private:
  LidarResidualContext make_context(const State& x) const;
  void residual_and_jacobian(const State& x, Eigen::VectorXd* r,
                             Eigen::MatrixXd* J) const;

  Correspondence corr_;
  Vec3 point_;  // raw body point (iterated) or frozen undistorted (one-pass)
  double t_j_ = 0.0;
  const PreintegrationCache* cache_ = nullptr;
  const State* prev_ = nullptr;
  Vec3 gravity_ = Vec3::Zero();
  double sigma_ = 0.02;
  double huber_ = 0.1;
  bool one_pass_ = false;
};

struct SolverOptions {
  int max_outer = 3;    // association / re-undistortion rounds
  int max_inner = 10;   // accepted damped steps per round
  double lambda_init = 1e-4;
  double step_tol = 1e-6;      // |dx| below this stops the inner loop
  double rel_cost_tol = 1e-8;  // relative cost drop below this stops it
  double bias_threshold = 0.1;  // re-integrate when biases move further
  int min_correspondences = 20;
  bool one_pass = false;
  double lidar_sigma = 0.02;  // metres
  double huber_delta = 0.1;   // metres; <= 0 disables the robust loss
  // Candidate matches further than this from their fitted primitive at the
  // current iterate are dropped; re-associated every outer round.
  double max_match_dist = 0.1;
};

struct OptimizationReport {
  int outer_iterations = 0;
  int inner_iterations = 0;  // accepted steps, summed over rounds
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int correspondences = 0;    // last association round, lines + planes
  int num_line_factors = 0;   // last association round
  int num_plane_factors = 0;  // last association round
  bool converged = false;
  bool degenerate = false;  // too few correspondences, fell back to prediction
  double point_rms = 0.0;   // point-to-primitive RMS at the solution
};

struct ScanEstimate {
  State state;
  OptimizationReport report;
  // All features undistorted into the world frame at the solution, in the
  // order they appear in the input cloud. Ready for map insertion.
  std::vector<Vec3> edges_world;
  std::vector<Vec3> planars_world;
};

double total_cost(const std::vector<const Factor*>& factors, const State& x);
void normal_equations(const std::vector<const Factor*>& factors,
                      const State& x, Mat15* H, Vec15* g);

// Damped least squares over one state. Accepts only cost-decreasing steps;
// lambda grows tenfold on rejection and shrinks tenfold on acceptance.
State lm_minimize(const std::vector<const Factor*>& factors, State x,
                  const SolverOptions& opt, OptimizationReport* report);

// Full scan-to-map estimation: predict from the IMU window, then alternate
// association (with iterated re-undistortion unless one_pass) and damped
// minimization. Falls back to the prediction when the scan is degenerate.
ScanEstimate estimate_scan(const State& prev, const PreintegrationCache& cache,
                           const FeatureCloud& features, const GlobalMap& map,
                           const SolverOptions& opt,
                           const Vec3& gravity = Vec3(0, 0, kDefaultGravity));

}  // namespace ilio
