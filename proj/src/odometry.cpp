#include "ilio/odometry.hpp"

#include <stdexcept>

#include "ilio/preintegration.hpp"

namespace ilio {

namespace {

bool has_labels(const RawScan& scan) {
  for (const ScanPoint& p : scan.points) {
    if (p.label >= 0) return true;
  }
  return false;
}

}  // namespace

OdometryParams odometry_params_from(const RunConfig& config) {
  OdometryParams p;
  p.init = config.init;
  p.noise = config.imu;
  p.solver = config.solver;
  p.map = config.map;
  p.features = config.features;
  return p;
}

OdometryResult run_odometry(const std::vector<ImuSample>& imu,
                            const std::vector<RawScan>& scans,
                            const OdometryParams& params) {
  if (imu.size() < 2) {
    throw std::invalid_argument("run_odometry: need at least two IMU samples");
  }
  if (scans.empty()) {
    throw std::invalid_argument("run_odometry: no scans");
  }
  for (std::size_t i = 1; i < scans.size(); ++i) {
    if (scans[i].t_start < scans[i - 1].t_start) {
      throw std::invalid_argument("run_odometry: scans out of order");
    }
  }

  OdometryResult out;
  out.map = GlobalMap(params.map);

  StaticInitParams sip;
  sip.min_duration = params.init.static_seconds;
  sip.gyro_var_max = params.init.gyro_var_max;
  sip.accel_var_max = params.init.accel_var_max;
  sip.gravity_magnitude = params.gravity_magnitude;

  const double t_init_end = imu.front().t + params.init.static_seconds;
  std::vector<ImuSample> init_window;
  for (const ImuSample& s : imu) {
    if (s.t <= t_init_end + 1e-9) init_window.push_back(s);
  }
  out.init = static_initialize(init_window, sip);

  const Vec3 gravity(0, 0, params.gravity_magnitude);

  State x;
  x.q = out.init.orientation;
  x.bias_gyro = out.init.state.bias_gyro;
  x.bias_accel = out.init.state.bias_accel;
  // p = 0 and v = 0: the window was verified stationary, and the init pose
  // defines the world origin.

  bool started = false;
  for (std::size_t i = 0; i < scans.size(); ++i) {
    const RawScan& scan = scans[i];
    if (scan.points.empty() || scan.t_start < t_init_end - 1e-6) {
      ++out.skipped_scans;
      continue;
    }
    if (scan.t_end > imu.back().t + 1e-9) break;  // beyond IMU coverage
    if (!started) {
      x.t = scan.t_start;
      started = true;
    }

    PreintegrationCache cache(slice_window(imu, x.t, scan.t_end),
                              x.bias_accel, x.bias_gyro, params.noise,
                              PreintegrationOptions{});
    const FeatureCloud features =
        has_labels(scan) ? features_from_labels(scan, params.features)
                         : extract_features(scan, params.features);

    ScanEstimate est =
        estimate_scan(x, cache, features, out.map, params.solver, gravity);
    x = est.state;

    const bool bootstrap = out.map.empty();
    if (bootstrap || (est.report.converged && !est.report.degenerate)) {
      out.map.insert(est.edges_world, est.planars_world);
    }

    TimedPose tp;
    tp.t = x.t;
    tp.pose.q = x.q;
    tp.pose.t = x.p;
    out.trajectory.push_back(tp);
    out.records.push_back({static_cast<int>(i), x.t, x, est.report});
    if (params.keep_clouds) {
      out.clouds.push_back(
          {std::move(est.edges_world), std::move(est.planars_world)});
    }
  }
  if (!started) {
    throw std::runtime_error(
        "run_odometry: no scans remain after the init window");
  }
  out.final_state = x;
  return out;
}

}  // namespace ilio
