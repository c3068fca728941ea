#pragma once

#include <vector>

#include "ilio/io.hpp"

namespace ilio {

struct EvalResult {
  int pairs = 0;                 // timestamp-associated pose pairs
  double ate_rmse = 0.0;         // meters, shared world frame, no alignment
  int rpe_pairs = 0;             // consecutive associated pairs
  double rpe_trans_rmse = 0.0;   // meters
  double rpe_rot_rmse_deg = 0.0;
};

// Associates every estimated pose with the nearest ground-truth timestamp
// within max_dt (default 1 ms), then computes ATE-RMSE over absolute
// translation errors (the frames are shared by construction, so no alignment
// step) and RPE over consecutive associated pairs: the relative transform
// error (gt_i^-1 gt_j)^-1 (est_i^-1 est_j), reported as translation RMS and
// rotation-angle RMS. Throws std::runtime_error when nothing associates.
EvalResult evaluate_trajectories(const std::vector<TimedPose>& gt,
                                 const std::vector<TimedPose>& est,
                                 double max_dt = 1e-3);

}  // namespace ilio
