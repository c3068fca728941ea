#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ilio/io.hpp"
#include "ilio/rng.hpp"

using namespace ilio;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test run.
fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "ilio_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("imu csv round trips exactly") {
  const fs::path dir = scratch();
  GaussianRng rng(7);
  std::vector<ImuSample> samples;
  for (int i = 0; i < 200; ++i) {
    ImuSample s;
    s.t = 0.1 + i / 400.0;  // deliberately non-representable increments
    s.gyro = rng.normal3();
    s.accel = 9.81 * rng.normal3();
    samples.push_back(s);
  }
  const std::string path = (dir / "imu.csv").string();
  write_imu_csv(path, samples);
  const auto back = read_imu_csv(path);
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(back[i].t == samples[i].t);
    CHECK(back[i].gyro == samples[i].gyro);
    CHECK(back[i].accel == samples[i].accel);
  }
}

TEST_CASE("imu csv header is verified") {
  const fs::path dir = scratch();
  write_text(dir / "bad.csv", "time,wx,wy,wz,ax,ay,az\n0,0,0,0,0,0,9.81\n");
  try {
    read_imu_csv((dir / "bad.csv").string());
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("t,wx,wy,wz,ax,ay,az") !=
          std::string::npos);
  }
}

TEST_CASE("malformed rows are reported with their line number") {
  const fs::path dir = scratch();
  write_text(dir / "bad.csv",
             "t,wx,wy,wz,ax,ay,az\n0,0,0,0,0,0,9.81\n0.1,nonsense\n");
  try {
    read_imu_csv((dir / "bad.csv").string());
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
}

TEST_CASE("scan csv round trips exactly with rings and labels") {
  const fs::path dir = scratch();
  GaussianRng rng(8);
  RawScan scan;
  scan.t_start = 0.3;
  scan.t_end = 0.4;
  for (int i = 0; i < 150; ++i) {
    ScanPoint p;
    p.t = 0.3 + 0.1 * i / 149.0;
    p.p = 5.0 * rng.normal3();
    p.ring = i % 16;
    p.label = i % 3 - 1;  // cycles -1, 0, 1
    scan.points.push_back(p);
  }
  const std::string path = (dir / "scan.csv").string();
  write_scan_csv(path, scan);
  const RawScan back = read_scan_csv(path);
  REQUIRE(back.points.size() == scan.points.size());
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    CHECK(back.points[i].t == scan.points[i].t);
    CHECK(back.points[i].p == scan.points[i].p);
    CHECK(back.points[i].ring == scan.points[i].ring);
    CHECK(back.points[i].label == scan.points[i].label);
  }
  // Boundaries reconstructed from the extreme timestamps.
  CHECK(back.t_start == scan.points.front().t);
  CHECK(back.t_end == scan.points.back().t);
}

TEST_CASE("trajectory files are scalar-last and round trip") {
  const fs::path dir = scratch();
  std::vector<TimedPose> poses;
  TimedPose tp;
  tp.t = 1.5;
  tp.pose.t = Vec3(1, 2, 3);
  tp.pose.q = Quat(0.8, 0.6 * 0.5, 0.6 * 0.5, 0.6 * 0.7071067811865476)
                  .normalized();
  poses.push_back(tp);

  const std::string path = (dir / "traj.txt").string();
  write_trajectory(path, poses);

  // Column order on disk: t x y z qx qy qz qw.
  std::ifstream in(path);
  double t, x, y, z, qx, qy, qz, qw;
  in >> t >> x >> y >> z >> qx >> qy >> qz >> qw;
  CHECK(t == 1.5);
  CHECK(x == 1.0);
  CHECK(qw == tp.pose.q.w());
  CHECK(qx == tp.pose.q.x());

  const auto back = read_trajectory(path);
  REQUIRE(back.size() == 1);
  CHECK(back[0].t == tp.t);
  CHECK(back[0].pose.t == tp.pose.t);
  CHECK(back[0].pose.q.coeffs() == tp.pose.q.coeffs());
}

TEST_CASE("trajectory rows with missing fields are rejected") {
  const fs::path dir = scratch();
  write_text(dir / "short.txt", "0 1 2 3 0 0 0\n");
  CHECK_THROWS_AS(read_trajectory((dir / "short.txt").string()),
                  std::runtime_error);
}

TEST_CASE("scan file names are zero padded and listed in order") {
  CHECK(scan_file_name(0) == "scan_00000.csv");
  CHECK(scan_file_name(123) == "scan_00123.csv");

  const fs::path dir = scratch();
  // Created deliberately out of order; listing must sort.
  for (int idx : {7, 0, 12, 3}) {
    write_text(dir / scan_file_name(idx), "t,x,y,z,ring,label\n");
  }
  write_text(dir / "notes.txt", "ignore me");
  write_text(dir / "scan_bad.txt", "ignore me too");

  const auto files = list_scan_files(dir.string());
  REQUIRE(files.size() == 4);
  CHECK(fs::path(files[0]).filename() == "scan_00000.csv");
  CHECK(fs::path(files[1]).filename() == "scan_00003.csv");
  CHECK(fs::path(files[2]).filename() == "scan_00007.csv");
  CHECK(fs::path(files[3]).filename() == "scan_00012.csv");

  CHECK_THROWS_AS(list_scan_files((dir / "missing").string()),
                  std::runtime_error);
}

TEST_CASE("missing files are reported by name") {
  try {
    read_imu_csv("/nonexistent/imu.csv");
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent/imu.csv") !=
          std::string::npos);
  }
}
