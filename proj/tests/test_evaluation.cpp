#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ilio/evaluation.hpp"
#include "ilio/rng.hpp"

using namespace ilio;

namespace {

std::vector<TimedPose> straight_line(int n, double dt, const Vec3& step) {
  std::vector<TimedPose> out;
  for (int i = 0; i < n; ++i) {
    TimedPose tp;
    tp.t = i * dt;
    tp.pose.t = i * step;
    tp.pose.q = Quat::Identity();
    out.push_back(tp);
  }
  return out;
}

}  // namespace

TEST_CASE("identical trajectories evaluate to zero error") {
  const auto gt = straight_line(100, 0.1, Vec3(0.05, 0, 0));
  const EvalResult r = evaluate_trajectories(gt, gt);
  CHECK(r.pairs == 100);
  CHECK(r.ate_rmse == 0.0);
  CHECK(r.rpe_pairs == 99);
  CHECK(r.rpe_trans_rmse == 0.0);
  CHECK(r.rpe_rot_rmse_deg == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("constant world-frame offset shows in ate but not rpe") {
  const auto gt = straight_line(50, 0.1, Vec3(0.1, 0, 0));
  auto est = gt;
  const Vec3 offset(0.3, -0.4, 0.0);  // norm 0.5
  for (auto& tp : est) tp.pose.t += offset;
  const EvalResult r = evaluate_trajectories(gt, est);
  CHECK(r.ate_rmse == doctest::Approx(0.5).epsilon(1e-12));
  // Relative motion between consecutive frames is unchanged by a shared
  // world-frame shift, so the relative error is exactly zero.
  CHECK(r.rpe_trans_rmse == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.rpe_rot_rmse_deg == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("alternating yaw error has a known rpe rotation magnitude") {
  const int n = 40;
  const double theta = 0.02;  // rad
  auto gt = straight_line(n, 0.1, Vec3(0.1, 0, 0));
  auto est = gt;
  for (int i = 0; i < n; ++i) {
    if (i % 2 == 1) {
      est[i].pose.q = Quat(Eigen::AngleAxisd(theta, Vec3::UnitZ()));
    }
  }
  // Every consecutive pair differs by exactly theta about z, so the RMS of
  // the relative rotation angle equals theta.
  const EvalResult r = evaluate_trajectories(gt, est);
  CHECK(r.rpe_rot_rmse_deg ==
        doctest::Approx(theta * 180.0 / M_PI).epsilon(1e-9));
}

TEST_CASE("isotropic position noise gives the expected ate") {
  // Each axis gets N(0, sigma^2), so E[|e|^2] = 3 sigma^2 and the RMSE over
  // many poses concentrates near sigma * sqrt(3).
  const double sigma = 0.05;
  const auto gt = straight_line(1000, 0.1, Vec3(0.02, 0.01, 0));
  auto est = gt;
  GaussianRng rng(42);
  for (auto& tp : est) tp.pose.t += sigma * rng.normal3();
  const EvalResult r = evaluate_trajectories(gt, est);
  const double expected = sigma * std::sqrt(3.0);
  CHECK(r.pairs == 1000);
  CHECK(r.ate_rmse == doctest::Approx(expected).epsilon(0.15));
}

TEST_CASE("association tolerates small timestamp jitter") {
  const auto gt = straight_line(30, 0.1, Vec3(0.1, 0, 0));
  auto est = gt;
  for (auto& tp : est) tp.t += 4e-4;  // inside the 1 ms window
  const EvalResult r = evaluate_trajectories(gt, est);
  CHECK(r.pairs == 30);
  CHECK(r.ate_rmse == 0.0);
}

TEST_CASE("timestamps outside the window do not associate") {
  const auto gt = straight_line(30, 0.1, Vec3(0.1, 0, 0));
  auto est = gt;
  for (auto& tp : est) tp.t += 2e-3;  // outside the 1 ms window
  CHECK_THROWS_AS(evaluate_trajectories(gt, est), std::runtime_error);
}

TEST_CASE("a wider window can be requested") {
  const auto gt = straight_line(30, 0.1, Vec3(0.1, 0, 0));
  auto est = gt;
  for (auto& tp : est) tp.t += 2e-3;
  const EvalResult r = evaluate_trajectories(gt, est, 5e-3);
  CHECK(r.pairs == 30);
  CHECK(r.ate_rmse == 0.0);
}

TEST_CASE("empty trajectories are rejected") {
  const auto gt = straight_line(10, 0.1, Vec3(0.1, 0, 0));
  CHECK_THROWS_AS(evaluate_trajectories({}, gt), std::runtime_error);
  CHECK_THROWS_AS(evaluate_trajectories(gt, {}), std::runtime_error);
}

TEST_CASE("partial overlap evaluates only matched poses") {
  const auto gt = straight_line(100, 0.1, Vec3(0.1, 0, 0));
  // Estimate covers only the second half.
  std::vector<TimedPose> est(gt.begin() + 50, gt.end());
  const EvalResult r = evaluate_trajectories(gt, est);
  CHECK(r.pairs == 50);
  CHECK(r.ate_rmse == 0.0);
}
