#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ilio/kdtree.hpp"

namespace ilio {

struct MapParams {
  double voxel_edge = 0.2;    // downsampling voxel for edge points, meters
  double voxel_planar = 0.4;  // downsampling voxel for planar points
  int k_neighbors = 5;
  double max_dist = 1.0;          // neighbor search radius
  double eigen_ratio = 3.0;       // line acceptance: lambda_max > ratio*lambda_mid
  double plane_fit_max_dist = 0.1;  // every neighbor within this of the plane
  double plane_rms_max = 0.01;      // out-of-plane rms of the neighbor set
};

struct Correspondence {
  enum class Kind { kLine, kPlane };
  Kind kind = Kind::kPlane;
  Vec3 n = Vec3::UnitZ();   // line direction or plane normal, unit
  Vec3 p0 = Vec3::Zero();   // point on the line / plane (neighbor centroid)
  int point_index = -1;     // caller's feature index
  double weight = 1.0;
};

// World-frame feature map with separate edge and planar stores. Inserts are
// voxel-deduplicated; queries are read-only and deterministic (ties broken by
// insertion order).
class GlobalMap {
 public:
  explicit GlobalMap(MapParams params = MapParams{});

  // Batch insert; points closer than half the class voxel to any stored (or
  // earlier accepted) point are dropped.
  void insert(const std::vector<Vec3>& edge_points,
              const std::vector<Vec3>& planar_points);

  std::optional<Correspondence> find_line(const Vec3& query) const;
  std::optional<Correspondence> find_plane(const Vec3& query) const;

  std::size_t edge_size() const { return edge_store_.points.size(); }
  std::size_t planar_size() const { return planar_store_.points.size(); }
  bool empty() const { return edge_size() == 0 && planar_size() == 0; }
  const std::vector<Vec3>& edge_points() const { return edge_store_.points; }
  const std::vector<Vec3>& planar_points() const {
    return planar_store_.points;
  }
  const MapParams& params() const { return params_; }

 private:
  struct Store {
    std::vector<Vec3> points;
    std::unordered_map<std::uint64_t, std::vector<int>> grid;
    KdTree tree;  // rebuilt at the end of every batch insert
    double voxel = 0.2;

    bool try_insert(const Vec3& p);
  };

  MapParams params_;
  Store edge_store_;
  Store planar_store_;
};

}  // namespace ilio
