#include "ilio/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ilio {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

void expect_header(std::ifstream& in, const std::string& path,
                   const std::string& expected) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) {
    throw std::runtime_error(path + ": expected header '" + expected +
                             "', got '" + line + "'");
  }
}

[[noreturn]] void bad_row(const std::string& path, int line_no,
                          const std::string& line) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) +
                           ": malformed row '" + line + "'");
}

}  // namespace

void write_imu_csv(const std::string& path,
                   const std::vector<ImuSample>& samples) {
  std::ofstream out = open_out(path);
  out << "t,wx,wy,wz,ax,ay,az\n";
  char buf[256];
  for (const ImuSample& s : samples) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                  s.gyro.x(), s.gyro.y(), s.gyro.z(), s.accel.x(),
                  s.accel.y(), s.accel.z());
    out << buf;
  }
}

std::vector<ImuSample> read_imu_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_header(in, path, "t,wx,wy,wz,ax,ay,az");
  std::vector<ImuSample> samples;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ImuSample s;
    const int got = std::sscanf(
        line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &s.t, &s.gyro.x(),
        &s.gyro.y(), &s.gyro.z(), &s.accel.x(), &s.accel.y(), &s.accel.z());
    if (got != 7) bad_row(path, line_no, line);
    samples.push_back(s);
  }
  return samples;
}

void write_scan_csv(const std::string& path, const RawScan& scan) {
  std::ofstream out = open_out(path);
  out << "t,x,y,z,ring,label\n";
  char buf[192];
  for (const ScanPoint& p : scan.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d,%d\n", p.t,
                  p.p.x(), p.p.y(), p.p.z(), p.ring, p.label);
    out << buf;
  }
}

RawScan read_scan_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  expect_header(in, path, "t,x,y,z,ring,label");
  RawScan scan;
  std::string line;
  int line_no = 1;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ScanPoint p;
    const int got =
        std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%d,%d", &p.t, &p.p.x(),
                    &p.p.y(), &p.p.z(), &p.ring, &p.label);
    if (got != 6) bad_row(path, line_no, line);
    lo = std::min(lo, p.t);
    hi = std::max(hi, p.t);
    scan.points.push_back(p);
  }
  if (!scan.points.empty()) {
    scan.t_start = lo;
    scan.t_end = hi;
  }
  return scan;
}

void write_trajectory(const std::string& path,
                      const std::vector<TimedPose>& poses) {
  std::ofstream out = open_out(path);
  char buf[288];
  for (const TimedPose& tp : poses) {
    const Quat& q = tp.pose.q;
    const Vec3& t = tp.pose.t;
    std::snprintf(buf, sizeof(buf),
                  "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", tp.t,
                  t.x(), t.y(), t.z(), q.x(), q.y(), q.z(), q.w());
    out << buf;
  }
}

std::vector<TimedPose> read_trajectory(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<TimedPose> poses;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    TimedPose tp;
    double qx, qy, qz, qw;
    const int got = std::sscanf(line.c_str(), "%lf %lf %lf %lf %lf %lf %lf %lf",
                                &tp.t, &tp.pose.t.x(), &tp.pose.t.y(),
                                &tp.pose.t.z(), &qx, &qy, &qz, &qw);
    if (got != 8) bad_row(path, line_no, line);
    tp.pose.q = Quat(qw, qx, qy, qz).normalized();
    poses.push_back(tp);
  }
  return poses;
}

std::string scan_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scan_%05d.csv", index);
  return buf;
}

std::vector<std::string> list_scan_files(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("'" + dir + "' is not a directory");
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("scan_", 0) == 0 &&
        name.size() > 4 && name.substr(name.size() - 4) == ".csv") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace ilio
