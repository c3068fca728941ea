#include "ilio/map.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace ilio {

namespace {

std::uint64_t cell_key(int ix, int iy, int iz) {
  // 21 bits per axis, offset to keep coordinates positive.
  const std::uint64_t bias = 1u << 20;
  return ((std::uint64_t(ix) + bias) << 42) |
         ((std::uint64_t(iy) + bias) << 21) |
         (std::uint64_t(iz) + bias);
}

int cell_of(double x, double voxel) { return int(std::floor(x / voxel)); }

// Deterministic sign: make the largest-magnitude component positive.
Vec3 canonical_direction(const Vec3& n) {
  int imax = 0;
  n.cwiseAbs().maxCoeff(&imax);
  return n[imax] < 0.0 ? Vec3(-n) : n;
}

}  // namespace

bool GlobalMap::Store::try_insert(const Vec3& p) {
  const double min_sep = 0.5 * voxel;
  const double min_sep2 = min_sep * min_sep;
  const int cx = cell_of(p.x(), voxel);
  const int cy = cell_of(p.y(), voxel);
  const int cz = cell_of(p.z(), voxel);
  // min_sep is half the cell edge, so any conflicting point lives in the
  // 27-cell neighborhood.
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dz = -1; dz <= 1; ++dz) {
        auto it = grid.find(cell_key(cx + dx, cy + dy, cz + dz));
        if (it == grid.end()) continue;
        for (int idx : it->second) {
          if ((points[idx] - p).squaredNorm() < min_sep2) return false;
        }
      }
    }
  }
  grid[cell_key(cx, cy, cz)].push_back(int(points.size()));
  points.push_back(p);
  return true;
}

GlobalMap::GlobalMap(MapParams params) : params_(params) {
  edge_store_.voxel = params_.voxel_edge;
  planar_store_.voxel = params_.voxel_planar;
}

void GlobalMap::insert(const std::vector<Vec3>& edge_points,
                       const std::vector<Vec3>& planar_points) {
  bool edges_changed = false, planars_changed = false;
  for (const Vec3& p : edge_points) edges_changed |= edge_store_.try_insert(p);
  for (const Vec3& p : planar_points) {
    planars_changed |= planar_store_.try_insert(p);
  }
  if (edges_changed) edge_store_.tree = KdTree(edge_store_.points);
  if (planars_changed) planar_store_.tree = KdTree(planar_store_.points);
}

std::optional<Correspondence> GlobalMap::find_line(const Vec3& query) const {
  const int k = params_.k_neighbors;
  auto nn = edge_store_.tree.knn(query, k, params_.max_dist);
  if (int(nn.size()) < k) return std::nullopt;

  Vec3 centroid = Vec3::Zero();
  for (const auto& n : nn) centroid += edge_store_.points[n.index];
  centroid /= double(k);
  Mat3 cov = Mat3::Zero();
  for (const auto& n : nn) {
    const Vec3 d = edge_store_.points[n.index] - centroid;
    cov += d * d.transpose();
  }
  cov /= double(k);

  Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
  const Vec3 evals = es.eigenvalues();  // ascending
  if (evals[2] <= params_.eigen_ratio * evals[1]) return std::nullopt;

  Correspondence c;
  c.kind = Correspondence::Kind::kLine;
  c.n = canonical_direction(es.eigenvectors().col(2).normalized());
  c.p0 = centroid;
  return c;
}

std::optional<Correspondence> GlobalMap::find_plane(const Vec3& query) const {
  const int k = params_.k_neighbors;
  auto nn = planar_store_.tree.knn(query, k, params_.max_dist);
  if (int(nn.size()) < k) return std::nullopt;

  Vec3 centroid = Vec3::Zero();
  for (const auto& n : nn) centroid += planar_store_.points[n.index];
  centroid /= double(k);
  Mat3 cov = Mat3::Zero();
  for (const auto& n : nn) {
    const Vec3 d = planar_store_.points[n.index] - centroid;
    cov += d * d.transpose();
  }
  cov /= double(k);

  Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
  const Vec3 evals = es.eigenvalues();  // ascending
  // A patch must spread in two directions. When all neighbors come from a
  // single map row, every plane through that row fits them exactly, so the
  // per-point residual check below cannot reject the (arbitrary) normal.
  // Inserted points sit at least half a voxel apart, so a genuine second
  // dimension shows up well above a quarter of that separation.
  const double min_spread = 0.25 * (0.5 * params_.voxel_planar);
  if (evals[1] <= min_spread * min_spread ||
      evals[1] <= params_.eigen_ratio * evals[0]) {
    return std::nullopt;
  }
  // Neighborhoods straddling a dihedral (two walls meeting) can satisfy the
  // per-point residual gate below while fitting a plane that cuts the fold;
  // their out-of-plane variance betrays them. lambda_0 is that variance, so
  // gate its rms absolutely.
  if (evals[0] > params_.plane_rms_max * params_.plane_rms_max) {
    return std::nullopt;
  }

  const Vec3 normal = es.eigenvectors().col(0).normalized();
  for (const auto& n : nn) {
    const double dist =
        std::abs(normal.dot(planar_store_.points[n.index] - centroid));
    if (dist >= params_.plane_fit_max_dist) return std::nullopt;
  }

  Correspondence c;
  c.kind = Correspondence::Kind::kPlane;
  c.n = canonical_direction(normal);
  c.p0 = centroid;
  return c;
}

}  // namespace ilio
