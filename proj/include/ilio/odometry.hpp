#pragma once

#include <vector>

#include "ilio/config.hpp"
#include "ilio/estimator.hpp"
#include "ilio/io.hpp"
#include "ilio/map.hpp"

namespace ilio {

struct OdometryParams {
  InitParams init;
  ImuNoiseParams noise;  // densities assumed by preintegration
  SolverOptions solver;
  MapParams map;
  FeatureExtractionParams features;
  double gravity_magnitude = kDefaultGravity;
  bool keep_clouds = false;  // retain per-scan undistorted world clouds
};

OdometryParams odometry_params_from(const RunConfig& config);

struct ScanRecord {
  int index = 0;  // position in the input scan sequence
  double t_end = 0.0;
  State state;  // converged estimate at t_end
  OptimizationReport report;
};

struct ScanClouds {
  std::vector<Vec3> edges;
  std::vector<Vec3> planars;
};

struct OdometryResult {
  StaticInitResult init;
  State final_state;
  std::vector<TimedPose> trajectory;  // one pose per processed scan, at t_end
  std::vector<ScanRecord> records;    // parallel to trajectory
  std::vector<ScanClouds> clouds;     // parallel to records when kept
  GlobalMap map;                      // final feature map
  int skipped_scans = 0;              // overlapped the init window
};

// The full pipeline over one recording: static initialization on the first
// `init.static_seconds` of IMU data (throws if the window is too short or not
// stationary), then sequential scan-to-map estimation. Scans overlapping the
// init window are skipped; the first processed scan bootstraps the map from
// its prediction-undistorted points, and later scans extend the map whenever
// their solve converges. Scans must arrive in chronological order; points
// with labels use the pre-labeled feature path, unlabeled scans go through
// curvature extraction.
OdometryResult run_odometry(const std::vector<ImuSample>& imu,
                            const std::vector<RawScan>& scans,
                            const OdometryParams& params);

}  // namespace ilio
