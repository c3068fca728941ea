#include "ilio/lidar_factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ilio {

namespace {

constexpr double kNoThreshold = std::numeric_limits<double>::infinity();

// Shared intermediates of the residual/jacobian chain, all evaluated at one
// state. Conventions: R maps b_k to world, Delta = t_k - t_j, DeltaT is the
// full window length.
struct Chain {
  Mat3 R;            // R(q_k)
  Mat3 R2;           // R(q_{k-1})
  Mat3 Rbar_c;       // R(gamma_full corrected)
  BiasCorrected full_c;
  Vec3 w_j;          // -v*Delta - 0.5*g*Delta^2
  Vec3 w_F;          // same over the full window
  Vec3 p_bar_inv;    // translation of the inverted full preintegration
  Vec3 D_p;          // translation discrepancy seen from b_k
  Vec3 d;            // vector part of the rotation discrepancy
  double w_D;        // scalar part
  Quat dq;           // interpolated rotation correction
  Vec3 dp;           // interpolated translation correction
  Vec3 u;            // a-priori undistorted point in b_k
  Vec3 h;            // R(dq)*u
  Vec3 c;            // corrected point in b_k
  Vec3 P_w;          // world point
  double mu;
};

Chain evaluate_chain(const LidarResidualContext& ctx, const State& x_k) {
  Chain ch;
  const Preintegration& full = *ctx.full;
  ch.mu = ctx.terms.mu;
  ch.R = x_k.q.toRotationMatrix();
  ch.R2 = ctx.prev->q.toRotationMatrix();
  ch.full_c =
      bias_corrected(full, x_k.bias_accel, x_k.bias_gyro, kNoThreshold);
  ch.Rbar_c = ch.full_c.gamma.toRotationMatrix();

  const double dT = full.dt;
  ch.w_j = -x_k.v * ctx.terms.dt - 0.5 * ctx.gravity * ctx.terms.dt * ctx.terms.dt;
  ch.w_F = -x_k.v * dT - 0.5 * ctx.gravity * dT * dT;

  const Vec3 p_bar_full = ch.R.transpose() * ch.w_F + ch.full_c.alpha;
  ch.p_bar_inv = -(ch.Rbar_c.transpose() * p_bar_full);

  const Vec3 m = ch.R2 * ch.p_bar_inv + ctx.prev->p;
  ch.D_p = ch.R.transpose() * (m - x_k.p);

  const Quat D_q = canonical(quat_multiply(
      quat_multiply(x_k.q.conjugate(), ctx.prev->q),
      ch.full_c.gamma.conjugate()));
  ch.d = D_q.vec();
  ch.w_D = D_q.w();

  ch.dp = ch.mu * ch.D_p;
  Quat dq(1.0, ch.mu * ch.d.x(), ch.mu * ch.d.y(), ch.mu * ch.d.z());
  dq.normalize();
  ch.dq = dq;

  ch.u = ctx.terms.q_bar * ctx.point + ctx.terms.p_bar;
  ch.h = ch.dq * ch.u;
  ch.c = ch.h + ch.dp;
  ch.P_w = ch.R * ch.c + x_k.p;
  return ch;
}

// d(P_w)/d(error state), the common core of both residual types.
Eigen::Matrix<double, 3, 15> world_point_jacobian(
    const LidarResidualContext& ctx, const State& x_k) {
  const Chain ch = evaluate_chain(ctx, x_k);
  const Preintegration& full = *ctx.full;
  const Preintegration& sub = ctx.terms.sub;
  const double mu = ch.mu;
  const double dT = full.dt;
  const Mat3 Rdq = ch.dq.toRotationMatrix();
  const Mat3 Rqbar = ctx.terms.q_bar.toRotationMatrix();

  // Sensitivities of the correction's rotation vector d.
  const Mat3 dd_dtheta = -0.5 * (ch.w_D * Mat3::Identity() - skew(ch.d));
  const Mat3 dd_dbg = -0.5 * (ch.w_D * Mat3::Identity() + skew(ch.d)) *
                      ch.Rbar_c * full.dtheta_dbg;

  // Derivative of R(dq(d))*u with respect to d, through the normalization.
  const double N = 1.0 + mu * mu * ch.d.squaredNorm();
  Mat3 H_d = (1.0 / N) *
             (-2.0 * mu * mu * ch.u * ch.d.transpose() +
              2.0 * mu * mu * ch.d.dot(ch.u) * Mat3::Identity() +
              2.0 * mu * mu * ch.d * ch.u.transpose() - 2.0 * mu * skew(ch.u));
  H_d -= (2.0 * mu * mu / N) * ch.h * ch.d.transpose();

  // Sensitivities of the a-priori point u.
  const Mat3 du_dtheta = skew(ch.R.transpose() * ch.w_j);
  const Mat3 du_dv = -ctx.terms.dt * ch.R.transpose();
  const Mat3& du_dba = sub.dalpha_dba;
  const Mat3 du_dbg = sub.dalpha_dbg - Rqbar * skew(ctx.point) * sub.dtheta_dbg;

  // Sensitivities of the translation discrepancy D_p.
  const Mat3 A = ch.R.transpose() * ch.R2 * ch.Rbar_c.transpose();
  const Mat3 dDp_dtheta = skew(ch.D_p) - A * skew(ch.R.transpose() * ch.w_F);
  const Mat3 dDp_dv = dT * A * ch.R.transpose();
  const Mat3 dDp_dba = -A * full.dalpha_dba;
  const Mat3 dDp_dbg = ch.R.transpose() * ch.R2 *
                       (-ch.Rbar_c.transpose() * full.dalpha_dbg +
                        skew(ch.p_bar_inv) * full.dtheta_dbg);

  Eigen::Matrix<double, 3, 15> J;
  J.block<3, 3>(0, 0) = (1.0 - mu) * ch.R;
  J.block<3, 3>(0, 3) = ch.R * (Rdq * du_dv + mu * dDp_dv);
  J.block<3, 3>(0, 6) =
      -ch.R * skew(ch.c) +
      ch.R * (Rdq * du_dtheta + H_d * dd_dtheta + mu * dDp_dtheta);
  J.block<3, 3>(0, 9) = ch.R * (Rdq * du_dba + mu * dDp_dba);
  J.block<3, 3>(0, 12) = ch.R * (Rdq * du_dbg + H_d * dd_dbg + mu * dDp_dbg);
  return J;
}

}  // namespace

UndistortionTerms apriori_undistort(const PreintegrationCache& cache,
                                    const State& x_k, const Vec3& gravity,
                                    double t_j) {
  UndistortionTerms terms;
  terms.sub = cache.at(t_j);
  const double t_k = cache.t_end();
  terms.dt = t_k - t_j;
  const double span = t_k - cache.t_begin();
  terms.mu = std::clamp(terms.dt / span, 0.0, 1.0);

  const BiasCorrected corr = bias_corrected(terms.sub, x_k.bias_accel,
                                            x_k.bias_gyro, kNoThreshold);
  const Mat3 Rt = x_k.q.toRotationMatrix().transpose();
  terms.p_bar = Rt * (-x_k.v * terms.dt -
                      0.5 * gravity * terms.dt * terms.dt) +
                corr.alpha;
  terms.q_bar = corr.gamma;
  return terms;
}

RigidTransform correction(const State& x_k, const State& x_prev,
                          const Preintegration& full, const Vec3& gravity,
                          double mu) {
  const BiasCorrected full_c =
      bias_corrected(full, x_k.bias_accel, x_k.bias_gyro, kNoThreshold);
  const Mat3 R = x_k.q.toRotationMatrix();
  const Mat3 Rbar = full_c.gamma.toRotationMatrix();
  const double dT = full.dt;

  const Vec3 w_F = -x_k.v * dT - 0.5 * gravity * dT * dT;
  const Vec3 p_bar_full = R.transpose() * w_F + full_c.alpha;
  const Vec3 p_bar_inv = -(Rbar.transpose() * p_bar_full);
  const Vec3 m = x_prev.q * p_bar_inv + x_prev.p;
  const Vec3 D_p = R.transpose() * (m - x_k.p);
  const Quat D_q = canonical(quat_multiply(
      quat_multiply(x_k.q.conjugate(), x_prev.q), full_c.gamma.conjugate()));

  RigidTransform dT_j;
  dT_j.t = mu * D_p;
  Quat dq(1.0, mu * D_q.x(), mu * D_q.y(), mu * D_q.z());
  dq.normalize();
  dT_j.q = dq;
  return dT_j;
}

std::pair<Vec3, Quat> corrected_undistort(const UndistortionTerms& terms,
                                          const RigidTransform& dT) {
  return {dT.q * terms.p_bar + dT.t, quat_multiply(dT.q, terms.q_bar)};
}

Vec3 undistorted_world_point(const LidarResidualContext& ctx,
                             const State& x_k) {
  const Chain ch = evaluate_chain(ctx, x_k);
  return ch.P_w;
}

Vec3 line_residual(const LidarResidualContext& ctx, const State& x_k) {
  const Chain ch = evaluate_chain(ctx, x_k);
  return ctx.corr.n.cross(ch.P_w - ctx.corr.p0);
}

double plane_residual(const LidarResidualContext& ctx, const State& x_k) {
  const Chain ch = evaluate_chain(ctx, x_k);
  return ctx.corr.n.dot(ch.P_w - ctx.corr.p0);
}

Eigen::Matrix<double, 3, 15> line_jacobian(const LidarResidualContext& ctx,
                                           const State& x_k) {
  return skew(ctx.corr.n) * world_point_jacobian(ctx, x_k);
}

Eigen::Matrix<double, 1, 15> plane_jacobian(const LidarResidualContext& ctx,
                                            const State& x_k) {
  return ctx.corr.n.transpose() * world_point_jacobian(ctx, x_k);
}

}  // namespace ilio
