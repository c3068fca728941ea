#pragma once

#include <string>
#include <vector>

#include "ilio/geometry.hpp"

namespace ilio {

// One LiDAR return. p is in the frame the scan currently lives in (sensor
// frame on ingest, IMU frame after scan_transform). label: -1 unlabeled,
// 0 edge, 1 planar (matches the scan CSV encoding).
struct ScanPoint {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  int ring = 0;
  int label = -1;
};

struct RawScan {
  std::vector<ScanPoint> points;
  double t_start = 0.0;
  double t_end = 0.0;
};

enum class FeatureLabel { kEdge, kPlanar };

struct FeaturePoint {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  FeatureLabel label = FeatureLabel::kPlanar;
  double curvature = 0.0;
};

struct FeatureCloud {
  std::vector<FeaturePoint> edges;
  std::vector<FeaturePoint> planars;
  // Non-empty when extraction hit a degenerate input (e.g. a ring with too
  // few points); the cloud is still usable, possibly empty.
  std::string warning;
};

struct FeatureExtractionParams {
  int window = 5;        // neighbors on each side entering the curvature sum
  int sectors = 6;       // contiguous index sectors per ring
  int edges_per_sector = 2;
  int planars_per_sector = 4;
  double edge_threshold = 0.01;    // curvature floor for edge candidates
  double planar_threshold = 0.002; // curvature ceiling for planar candidates
  double min_range = 0.5;
  double max_range = 100.0;
};

// Rigidly maps every point (sensor frame -> IMU frame); timestamps, rings
// and labels are untouched.
RawScan scan_transform(const RawScan& scan, const RigidTransform& extrinsic);

// Curvature-based selection: per ring, per index sector, the highest-curvature
// points above the edge threshold become edges and the lowest below the planar
// threshold become planars, with neighbor suppression around every pick.
FeatureCloud extract_features(const RawScan& scan,
                              const FeatureExtractionParams& params);

// Pre-labeled path: trusts point labels (0 edge, 1 planar), applies only the
// range gate. Used whenever the input carries labels.
FeatureCloud features_from_labels(const RawScan& scan,
                                  const FeatureExtractionParams& params);

}  // namespace ilio
