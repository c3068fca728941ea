#pragma once

#include <string>
#include <vector>

#include "ilio/geometry.hpp"
#include "ilio/imu.hpp"
#include "ilio/scan.hpp"

namespace ilio {

struct TimedPose {
  double t = 0.0;
  RigidTransform pose;
};

// All readers throw std::runtime_error naming the file (and the line where it
// applies) on missing files, bad headers or malformed rows. All writers emit
// doubles with 17 significant digits, so a write/read round trip is exact.

// `t,wx,wy,wz,ax,ay,az` with that exact header line.
void write_imu_csv(const std::string& path,
                   const std::vector<ImuSample>& samples);
std::vector<ImuSample> read_imu_csv(const std::string& path);

// `t,x,y,z,ring,label` with that exact header line. Reading reconstructs
// t_start / t_end from the extreme point timestamps.
void write_scan_csv(const std::string& path, const RawScan& scan);
RawScan read_scan_csv(const std::string& path);

// `t x y z qx qy qz qw` per line (quaternion scalar-last), no header.
void write_trajectory(const std::string& path,
                      const std::vector<TimedPose>& poses);
std::vector<TimedPose> read_trajectory(const std::string& path);

// `scan_00000.csv` style name for a sweep index.
std::string scan_file_name(int index);

// Full paths of every scan_*.csv directly under dir, sorted by name (the
// zero-padded indices make that chronological order).
std::vector<std::string> list_scan_files(const std::string& dir);

}  // namespace ilio
