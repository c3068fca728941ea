#include "ilio/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ilio {

EvalResult evaluate_trajectories(const std::vector<TimedPose>& gt,
                                 const std::vector<TimedPose>& est,
                                 double max_dt) {
  if (gt.empty() || est.empty()) {
    throw std::runtime_error("evaluate_trajectories: empty trajectory");
  }
  std::vector<TimedPose> ref = gt;
  std::sort(ref.begin(), ref.end(),
            [](const TimedPose& a, const TimedPose& b) { return a.t < b.t; });

  std::vector<std::pair<const TimedPose*, const TimedPose*>> matched;
  for (const TimedPose& e : est) {
    auto it = std::lower_bound(
        ref.begin(), ref.end(), e.t,
        [](const TimedPose& a, double t) { return a.t < t; });
    const TimedPose* best = nullptr;
    if (it != ref.end()) best = &*it;
    if (it != ref.begin()) {
      const TimedPose* prev = &*std::prev(it);
      if (best == nullptr ||
          std::abs(prev->t - e.t) < std::abs(best->t - e.t)) {
        best = prev;
      }
    }
    if (best != nullptr && std::abs(best->t - e.t) <= max_dt) {
      matched.push_back({best, &e});
    }
  }
  if (matched.empty()) {
    throw std::runtime_error(
        "evaluate_trajectories: no timestamps associate within the window");
  }

  EvalResult r;
  r.pairs = static_cast<int>(matched.size());
  double ss = 0.0;
  for (const auto& [g, e] : matched) {
    ss += (g->pose.t - e->pose.t).squaredNorm();
  }
  r.ate_rmse = std::sqrt(ss / matched.size());

  double ss_t = 0.0, ss_r = 0.0;
  for (std::size_t i = 1; i < matched.size(); ++i) {
    const RigidTransform dg =
        matched[i - 1].first->pose.inverse() * matched[i].first->pose;
    const RigidTransform de =
        matched[i - 1].second->pose.inverse() * matched[i].second->pose;
    const RigidTransform err = dg.inverse() * de;
    ss_t += err.t.squaredNorm();
    const double ang = rotation_distance(err.q, Quat::Identity());
    ss_r += ang * ang;
    ++r.rpe_pairs;
  }
  if (r.rpe_pairs > 0) {
    r.rpe_trans_rmse = std::sqrt(ss_t / r.rpe_pairs);
    r.rpe_rot_rmse_deg = std::sqrt(ss_r / r.rpe_pairs) * 180.0 / M_PI;
  }
  return r;
}

}  // namespace ilio
