#include "ilio/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace ilio {

namespace {
constexpr double kNoThreshold = std::numeric_limits<double>::infinity();
}

State predict_state(const State& prev, const Preintegration& pre,
                    const Vec3& gravity) {
  const BiasCorrected c =
      bias_corrected(pre, prev.bias_accel, prev.bias_gyro, kNoThreshold);
  const double T = pre.dt;

  State x;
  x.t = prev.t + T;
  x.q = quat_multiply(prev.q, c.gamma.conjugate());
  const Mat3 R = x.q.toRotationMatrix();
  x.v = prev.v - gravity * T - R * c.beta;
  x.p = prev.p + x.v * T + 0.5 * gravity * T * T - R * c.alpha;
  x.bias_accel = prev.bias_accel;
  x.bias_gyro = prev.bias_gyro;
  return x;
}

ImuFactor::ImuFactor(const State* prev, const Preintegration* pre,
                     const Vec3& gravity)
    : prev_(prev), pre_(pre), gravity_(gravity) {
  const Eigen::LDLT<Mat15> ldlt(pre_->covariance);
  info_ = ldlt.solve(Mat15::Identity());
  info_ = (0.5 * (info_ + info_.transpose())).eval();
}

double ImuFactor::accumulate(const State& x, Mat15* H, Vec15* g) const {
  const Vec15 r = imu_residual(x, *prev_, *pre_, gravity_);
  if (H != nullptr) {
    const Mat15 J = imu_residual_jacobian(x, *prev_, *pre_, gravity_);
    const Mat15 WJ = info_ * J;
    *H += J.transpose() * WJ;
    *g += J.transpose() * (info_ * r);
  }
  return 0.5 * r.dot(info_ * r);
}

LidarFactor::LidarFactor(const Correspondence& corr, const Vec3& raw_point,
                         double t_j, const PreintegrationCache* cache,
                         const State* prev, const Vec3& gravity, double sigma,
                         double huber_delta)
    : corr_(corr),
      point_(raw_point),
      t_j_(t_j),
      cache_(cache),
      prev_(prev),
      gravity_(gravity),
      sigma_(sigma),
      huber_(huber_delta),
      one_pass_(false) {}

LidarFactor::LidarFactor(const Correspondence& corr, const Vec3& frozen_point,
                         double sigma, double huber_delta)
    : corr_(corr),
      point_(frozen_point),
      sigma_(sigma),
      huber_(huber_delta),
      one_pass_(true) {}

LidarResidualContext LidarFactor::make_context(const State& x) const {
  LidarResidualContext ctx;
  ctx.corr = corr_;
  ctx.terms = apriori_undistort(*cache_, x, gravity_, t_j_);
  ctx.point = point_;
  ctx.prev = prev_;
  ctx.full = &cache_->full();
  ctx.gravity = gravity_;
  ctx.sigma = sigma_;
  return ctx;
}

void LidarFactor::residual_and_jacobian(const State& x, Eigen::VectorXd* r,
                                        Eigen::MatrixXd* J) const {
  const bool line = corr_.kind == Correspondence::Kind::kLine;
  if (one_pass_) {
    const Mat3 R = x.q.toRotationMatrix();
    const Vec3 P_w = R * point_ + x.p;
    if (line) {
      *r = skew(corr_.n) * (P_w - corr_.p0);
      if (J != nullptr) {
        J->setZero(3, 15);
        J->block<3, 3>(0, 0) = skew(corr_.n) * R;
        J->block<3, 3>(0, 6) = -skew(corr_.n) * R * skew(point_);
      }
    } else {
      r->resize(1);
      (*r)[0] = corr_.n.dot(P_w - corr_.p0);
      if (J != nullptr) {
        J->setZero(1, 15);
        J->block<1, 3>(0, 0) = corr_.n.transpose() * R;
        J->block<1, 3>(0, 6) = -corr_.n.transpose() * R * skew(point_);
      }
    }
    return;
  }

  const LidarResidualContext ctx = make_context(x);
  if (line) {
    *r = line_residual(ctx, x);
    if (J != nullptr) *J = line_jacobian(ctx, x);
  } else {
    r->resize(1);
    (*r)[0] = plane_residual(ctx, x);
    if (J != nullptr) *J = plane_jacobian(ctx, x);
  }
}

double LidarFactor::accumulate(const State& x, Mat15* H, Vec15* g) const {
  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  residual_and_jacobian(x, &r, H != nullptr ? &J : nullptr);

  const double nrm = r.norm();
  const double inv_s2 = corr_.weight / (sigma_ * sigma_);
  double w = inv_s2;
  double cost = 0.5 * inv_s2 * nrm * nrm;
  if (huber_ > 0.0 && nrm > huber_) {
    w = inv_s2 * huber_ / nrm;
    cost = inv_s2 * (huber_ * nrm - 0.5 * huber_ * huber_);
  }
  if (H != nullptr) {
    *H += w * J.transpose() * J;
    *g += w * J.transpose() * r;
  }
  return cost;
}

double LidarFactor::distance(const State& x) const {
  Eigen::VectorXd r;
  residual_and_jacobian(x, &r, nullptr);
  return r.norm();
}

double total_cost(const std::vector<const Factor*>& factors, const State& x) {
  double c = 0.0;
  for (const Factor* f : factors) c += f->accumulate(x, nullptr, nullptr);
  return c;
}

void normal_equations(const std::vector<const Factor*>& factors,
                      const State& x, Mat15* H, Vec15* g) {
  H->setZero();
  g->setZero();
  for (const Factor* f : factors) f->accumulate(x, H, g);
}

State lm_minimize(const std::vector<const Factor*>& factors, State x,
                  const SolverOptions& opt, OptimizationReport* report) {
  double lambda = opt.lambda_init;
  double cost = total_cost(factors, x);
  if (report != nullptr) {
    report->initial_cost = cost;
    report->inner_iterations = 0;
    report->converged = false;
  }

  Mat15 H;
  Vec15 g;
  for (int it = 0; it < opt.max_inner; ++it) {
    normal_equations(factors, x, &H, &g);
    if (g.norm() < 1e-12) {
      if (report != nullptr) report->converged = true;
      break;
    }

    bool accepted = false;
    bool converged = false;
    for (int tries = 0; tries < 8 && !accepted; ++tries) {
      Mat15 A = H;
      // Relative damping plus an absolute floor so directions the factors do
      // not constrain stay put instead of blowing up the solve.
      A.diagonal() += lambda * H.diagonal();
      A.diagonal().array() += 1e-12;
      const Vec15 dx = Eigen::LDLT<Mat15>(A).solve(-g);
      const State cand = boxplus(x, dx);
      const double cand_cost = total_cost(factors, cand);
      if (cand_cost <= cost) {
        accepted = true;
        const double drop = cost - cand_cost;
        x = cand;
        cost = cand_cost;
        lambda = std::max(lambda * 0.1, 1e-12);
        if (report != nullptr) ++report->inner_iterations;
        if (dx.norm() < opt.step_tol ||
            drop <= opt.rel_cost_tol * std::max(cost, 1e-300)) {
          converged = true;
        }
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted) {
      // Damping maxed out without progress: we are at a (numerical) minimum.
      if (report != nullptr) report->converged = true;
      break;
    }
    if (converged) {
      if (report != nullptr) report->converged = true;
      break;
    }
  }
  if (report != nullptr) report->final_cost = cost;
  return x;
}

ScanEstimate estimate_scan(const State& prev, const PreintegrationCache& cache,
                           const FeatureCloud& features, const GlobalMap& map,
                           const SolverOptions& opt, const Vec3& gravity) {
  ScanEstimate out;
  OptimizationReport& rep = out.report;

  const State x_pred = predict_state(prev, cache.full(), gravity);
  State x = x_pred;

  // Re-integrated windows, built only if the bias iterate leaves the
  // linearization trust region of the cached one. Earlier generations stay
  // alive because factors from the previous round point into them.
  std::vector<std::unique_ptr<PreintegrationCache>> owned;
  const PreintegrationCache* active = &cache;

  // One-pass mode: undistort every feature once, at the prediction, and keep
  // the resulting body-frame points fixed for the whole solve.
  std::vector<Vec3> frozen_edges, frozen_planars;
  if (opt.one_pass) {
    auto freeze = [&](const std::vector<FeaturePoint>& pts,
                      std::vector<Vec3>* dst) {
      dst->reserve(pts.size());
      for (const FeaturePoint& f : pts) {
        const UndistortionTerms t =
            apriori_undistort(cache, x_pred, gravity, f.t);
        dst->push_back(t.q_bar * f.p + t.p_bar);
      }
    };
    freeze(features.edges, &frozen_edges);
    freeze(features.planars, &frozen_planars);
  }

  const auto world_point = [&](const FeaturePoint& f, std::size_t idx,
                               bool edge, const State& at) -> Vec3 {
    if (opt.one_pass) {
      const Vec3& c0 = edge ? frozen_edges[idx] : frozen_planars[idx];
      return at.q * c0 + at.p;
    }
    LidarResidualContext ctx;
    ctx.terms = apriori_undistort(*active, at, gravity, f.t);
    ctx.point = f.p;
    ctx.prev = &prev;
    ctx.full = &active->full();
    ctx.gravity = gravity;
    return undistorted_world_point(ctx, at);
  };

  std::vector<std::unique_ptr<LidarFactor>> lidar;
  std::unique_ptr<ImuFactor> imu;
  std::vector<const Factor*> flist;

  bool converged = false;
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    if (!bias_within_threshold(active->full(), x.bias_accel, x.bias_gyro,
                               opt.bias_threshold)) {
      owned.push_back(std::make_unique<PreintegrationCache>(
          cache.samples(), x.bias_accel, x.bias_gyro, cache.noise(),
          PreintegrationOptions{}));
      active = owned.back().get();
    }

    std::vector<std::unique_ptr<LidarFactor>> fresh;
    auto associate = [&](const std::vector<FeaturePoint>& pts, bool edge) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3 P_w = world_point(pts[i], i, edge, x);
        std::optional<Correspondence> c =
            edge ? map.find_line(P_w) : map.find_plane(P_w);
        if (!c) continue;
        const double d = c->kind == Correspondence::Kind::kLine
                             ? c->n.cross(P_w - c->p0).norm()
                             : std::abs(c->n.dot(P_w - c->p0));
        if (d > opt.max_match_dist) continue;
        c->point_index = static_cast<int>(i);
        if (opt.one_pass) {
          const Vec3& c0 = edge ? frozen_edges[i] : frozen_planars[i];
          fresh.push_back(std::make_unique<LidarFactor>(
              *c, c0, opt.lidar_sigma, opt.huber_delta));
        } else {
          fresh.push_back(std::make_unique<LidarFactor>(
              *c, pts[i].p, pts[i].t, active, &prev, gravity, opt.lidar_sigma,
              opt.huber_delta));
        }
      }
    };
    associate(features.edges, true);
    associate(features.planars, false);

    if (static_cast<int>(fresh.size()) < opt.min_correspondences) {
      if (outer == 0) {
        // Nothing to match against: hand back the inertial prediction.
        rep.correspondences = static_cast<int>(fresh.size());
        rep.degenerate = true;
        rep.converged = false;
        x = x_pred;
      }
      // Later rounds keep the previous round's solution and factors.
      break;
    }

    lidar = std::move(fresh);
    rep.correspondences = static_cast<int>(lidar.size());
    rep.num_line_factors = 0;
    for (const auto& f : lidar) rep.num_line_factors += f->is_line() ? 1 : 0;
    rep.num_plane_factors = rep.correspondences - rep.num_line_factors;
    flist.clear();
    imu = std::make_unique<ImuFactor>(&prev, &active->full(), gravity);
    flist.push_back(imu.get());
    for (const auto& f : lidar) flist.push_back(f.get());

    OptimizationReport inner;
    x = lm_minimize(flist, x, opt, &inner);
    if (outer == 0) rep.initial_cost = inner.initial_cost;
    rep.inner_iterations += inner.inner_iterations;
    converged = inner.converged;
    ++rep.outer_iterations;
  }

  if (!rep.degenerate) {
    rep.converged = converged;
    rep.final_cost = total_cost(flist, x);
    double ss = 0.0;
    for (const auto& f : lidar) {
      const double d = f->distance(x);
      ss += d * d;
    }
    rep.point_rms = lidar.empty() ? 0.0 : std::sqrt(ss / lidar.size());
  }

  out.state = x;
  out.edges_world.reserve(features.edges.size());
  for (std::size_t i = 0; i < features.edges.size(); ++i) {
    out.edges_world.push_back(world_point(features.edges[i], i, true, x));
  }
  out.planars_world.reserve(features.planars.size());
  for (std::size_t i = 0; i < features.planars.size(); ++i) {
    out.planars_world.push_back(world_point(features.planars[i], i, false, x));
  }
  return out;
}

}  // namespace ilio
