#include "ilio/scan.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ilio {

RawScan scan_transform(const RawScan& scan, const RigidTransform& extrinsic) {
  RawScan out = scan;
  for (ScanPoint& pt : out.points) {
    pt.p = extrinsic * pt.p;
  }
  return out;
}

namespace {

struct RingView {
  std::vector<int> order;  // indices into scan.points, time-ascending
};

std::map<int, RingView> split_rings(const RawScan& scan) {
  std::map<int, RingView> rings;
  for (int i = 0; i < int(scan.points.size()); ++i) {
    rings[scan.points[i].ring].order.push_back(i);
  }
  for (auto& [ring, view] : rings) {
    std::stable_sort(view.order.begin(), view.order.end(),
                     [&](int a, int b) {
                       return scan.points[a].t < scan.points[b].t;
                     });
  }
  return rings;
}

}  // namespace

FeatureCloud extract_features(const RawScan& scan,
                              const FeatureExtractionParams& params) {
  FeatureCloud cloud;
  const int w = params.window;
  auto rings = split_rings(scan);

  for (const auto& [ring, view] : rings) {
    const int n = int(view.order.size());
    if (n < 2 * w + 1) {
      cloud.warning = "ring " + std::to_string(ring) + " has " +
                      std::to_string(n) + " points, need " +
                      std::to_string(2 * w + 1);
      continue;
    }

    // Curvature of interior, in-range points; -1 marks ineligible slots.
    std::vector<double> curv(n, -1.0);
    for (int r = w; r < n - w; ++r) {
      const Vec3& pj = scan.points[view.order[r]].p;
      const double range = pj.norm();
      if (range < params.min_range || range > params.max_range) continue;
      Vec3 sum = Vec3::Zero();
      for (int o = -w; o <= w; ++o) {
        if (o == 0) continue;
        sum += scan.points[view.order[r + o]].p - pj;
      }
      curv[r] = sum.norm() / (2.0 * w * range);
    }

    std::vector<char> edge_sup(n, 0), planar_sup(n, 0);
    for (int s = 0; s < params.sectors; ++s) {
      const int lo = int(std::int64_t(n) * s / params.sectors);
      const int hi = int(std::int64_t(n) * (s + 1) / params.sectors);
      std::vector<int> cand;
      for (int r = lo; r < hi; ++r) {
        if (curv[r] >= 0.0) cand.push_back(r);
      }

      auto pick = [&](bool edges) {
        std::vector<int> sorted = cand;
        std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
          if (curv[a] != curv[b])
            return edges ? curv[a] > curv[b] : curv[a] < curv[b];
          return a < b;
        });
        std::vector<char>& sup = edges ? edge_sup : planar_sup;
        const int budget = edges ? params.edges_per_sector
                                 : params.planars_per_sector;
        int taken = 0;
        for (int r : sorted) {
          if (taken >= budget) break;
          if (sup[r]) continue;
          if (edges && curv[r] <= params.edge_threshold) break;
          if (!edges && curv[r] >= params.planar_threshold) break;
          const ScanPoint& pt = scan.points[view.order[r]];
          FeaturePoint f;
          f.t = pt.t;
          f.p = pt.p;
          f.curvature = curv[r];
          f.label = edges ? FeatureLabel::kEdge : FeatureLabel::kPlanar;
          (edges ? cloud.edges : cloud.planars).push_back(f);
          for (int o = std::max(0, r - w); o <= std::min(n - 1, r + w); ++o) {
            sup[o] = 1;
          }
          ++taken;
        }
      };
      pick(true);
      pick(false);
    }
  }
  return cloud;
}

FeatureCloud features_from_labels(const RawScan& scan,
                                  const FeatureExtractionParams& params) {
  FeatureCloud cloud;
  for (const ScanPoint& pt : scan.points) {
    if (pt.label != 0 && pt.label != 1) continue;
    const double range = pt.p.norm();
    if (range < params.min_range || range > params.max_range) continue;
    FeaturePoint f;
    f.t = pt.t;
    f.p = pt.p;
    f.label = pt.label == 0 ? FeatureLabel::kEdge : FeatureLabel::kPlanar;
    (pt.label == 0 ? cloud.edges : cloud.planars).push_back(f);
  }
  return cloud;
}

}  // namespace ilio
