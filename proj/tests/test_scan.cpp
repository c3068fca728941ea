#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ilio/rng.hpp"
#include "ilio/scan.hpp"
#include "test_helpers.hpp"

using namespace ilio;
using namespace ilio::testutil;

namespace {

RawScan grid_on_plane() {
  // One ring sweeping y on the plane x = 2, z = 0.5.
  RawScan scan;
  scan.t_start = 0.0;
  scan.t_end = 0.1;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    ScanPoint pt;
    pt.t = scan.t_start + 0.1 * i / (n - 1);
    pt.p = Vec3(2.0, -3.0 + 6.0 * i / (n - 1), 0.5);
    scan.points.push_back(pt);
  }
  return scan;
}

// Rays from the origin at z=0 hitting the walls x=2 (azimuth < 45 deg) and
// y=2 (azimuth > 45 deg); the crease is at 45 deg = index 50, safely inside
// its index sector.
RawScan crease_scan(int n = 120) {
  RawScan scan;
  scan.t_start = 0.0;
  scan.t_end = 0.1;
  for (int i = 0; i < n; ++i) {
    const double deg = 5.0 + 0.8 * i;
    const double th = deg * M_PI / 180.0;
    const double r = deg <= 45.0 ? 2.0 / std::cos(th) : 2.0 / std::sin(th);
    ScanPoint pt;
    pt.t = scan.t_start + 0.1 * i / (n - 1);
    pt.p = r * Vec3(std::cos(th), std::sin(th), 0.0);
    scan.points.push_back(pt);
  }
  return scan;
}

}  // namespace

TEST_CASE("scan_transform applies the extrinsic rigidly") {
  auto scan = crease_scan();

  RigidTransform id;
  auto same = scan_transform(scan, id);
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    CHECK(same.points[i].p == scan.points[i].p);
    CHECK(same.points[i].t == scan.points[i].t);
  }

  RigidTransform lift;
  lift.t = Vec3(0, 0, 0.1);
  auto lifted = scan_transform(scan, lift);
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    CHECK((lifted.points[i].p - scan.points[i].p - Vec3(0, 0, 0.1)).norm() <
          1e-15);
  }

  GaussianRng rng(5);
  RigidTransform ext;
  ext.q = random_quat(rng);
  ext.t = Vec3(0.3, -0.2, 0.7);
  auto fwd = scan_transform(scan, ext);
  auto back = scan_transform(fwd, ext.inverse());
  double worst = 0.0;
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    worst = std::max(worst, (back.points[i].p - scan.points[i].p).norm());
    for (std::size_t j = i + 1; j < scan.points.size(); j += 17) {
      const double before = (scan.points[i].p - scan.points[j].p).norm();
      const double after = (fwd.points[i].p - fwd.points[j].p).norm();
      CHECK(std::abs(before - after) < 1e-12);
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("a single plane yields planar features and no edges") {
  auto scan = grid_on_plane();
  FeatureExtractionParams params;
  auto cloud = extract_features(scan, params);

  CHECK(cloud.edges.empty());
  CHECK(!cloud.planars.empty());
  for (const auto& f : cloud.planars) {
    CHECK(f.curvature < 1e-6);
  }
  CHECK(int(cloud.planars.size()) <=
        params.sectors * params.planars_per_sector);
}

TEST_CASE("crease points dominate curvature and come out as edges") {
  auto scan = crease_scan();
  FeatureExtractionParams params;
  auto cloud = extract_features(scan, params);

  // The crease lives at azimuth 45 deg = index 50 of 120.
  const int crease = 50;
  const double t_crease = scan.points[crease].t;

  REQUIRE(!cloud.edges.empty());
  bool crease_selected = false;
  for (const auto& e : cloud.edges) {
    if (std::abs(e.t - t_crease) < 0.1 * (params.window + 0.5) / 119.0) {
      crease_selected = true;
    }
  }
  CHECK(crease_selected);

  // Its curvature strictly dominates every other selected feature's.
  double crease_curv = 0.0, other = 0.0;
  for (const auto& e : cloud.edges) {
    if (e.t == t_crease) crease_curv = e.curvature;
    else other = std::max(other, e.curvature);
  }
  for (const auto& p : cloud.planars) other = std::max(other, p.curvature);
  CHECK(crease_curv > other);
}

TEST_CASE("collinear points are all planar candidates") {
  RawScan scan;
  scan.t_start = 0.0;
  scan.t_end = 0.1;
  for (int i = 0; i < 100; ++i) {
    ScanPoint pt;
    pt.t = 0.001 * i;
    pt.p = Vec3(1.0, 0.02 * i, 0.0);
    scan.points.push_back(pt);
  }
  auto cloud = extract_features(scan, FeatureExtractionParams{});
  CHECK(cloud.edges.empty());
  CHECK(!cloud.planars.empty());
  for (const auto& f : cloud.planars) CHECK(f.curvature < 1e-10);
}

TEST_CASE("extraction is invariant under a global rotation") {
  auto scan = crease_scan();
  auto base = extract_features(scan, FeatureExtractionParams{});

  GaussianRng rng(77);
  RigidTransform rot;
  rot.q = random_quat(rng);
  auto rotated = extract_features(scan_transform(scan, rot),
                                  FeatureExtractionParams{});

  REQUIRE(base.edges.size() == rotated.edges.size());
  REQUIRE(base.planars.size() == rotated.planars.size());
  for (std::size_t i = 0; i < base.edges.size(); ++i) {
    CHECK(base.edges[i].t == rotated.edges[i].t);
    CHECK(std::abs(base.edges[i].curvature - rotated.edges[i].curvature) <
          1e-12);
  }
  for (std::size_t i = 0; i < base.planars.size(); ++i) {
    CHECK(base.planars[i].t == rotated.planars[i].t);
  }
}

TEST_CASE("rings with too few points produce a warning and nothing else") {
  RawScan scan;
  scan.t_start = 0.0;
  scan.t_end = 0.1;
  for (int i = 0; i < 7; ++i) {
    ScanPoint pt;
    pt.t = 0.01 * i;
    pt.p = Vec3(1.0 + 0.1 * i, 2.0, 0.0);
    scan.points.push_back(pt);
  }
  auto cloud = extract_features(scan, FeatureExtractionParams{});
  CHECK(cloud.edges.empty());
  CHECK(cloud.planars.empty());
  CHECK(!cloud.warning.empty());
}

TEST_CASE("labeled scans bypass extraction with a range gate") {
  RawScan scan;
  scan.t_start = 0.0;
  scan.t_end = 0.1;
  auto add = [&](Vec3 p, int label) {
    ScanPoint pt;
    pt.t = 0.01 * scan.points.size();
    pt.p = p;
    pt.label = label;
    scan.points.push_back(pt);
  };
  add(Vec3(1, 0, 0), 0);
  add(Vec3(0, 2, 0), 1);
  add(Vec3(0, 0, 3), 1);
  add(Vec3(0.1, 0, 0), 1);   // below min range, dropped
  add(Vec3(500, 0, 0), 0);   // beyond max range, dropped
  add(Vec3(4, 4, 0), -1);    // unlabeled, dropped by this path

  auto cloud = features_from_labels(scan, FeatureExtractionParams{});
  REQUIRE(cloud.edges.size() == 1);
  REQUIRE(cloud.planars.size() == 2);
  CHECK(cloud.edges[0].p == Vec3(1, 0, 0));
  CHECK(cloud.edges[0].label == FeatureLabel::kEdge);
  CHECK(cloud.planars[0].label == FeatureLabel::kPlanar);
}
