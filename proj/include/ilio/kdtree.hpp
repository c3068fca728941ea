#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "ilio/geometry.hpp"

namespace ilio {

// Exact static 3-d tree. Neighbor queries return indices into the point
// array ordered by (squared distance, index), so results are deterministic
// even under distance ties.
class KdTree {
 public:
  KdTree() = default;

  explicit KdTree(std::vector<Vec3> points) : points_(std::move(points)) {
    std::vector<int> idx(points_.size());
    std::iota(idx.begin(), idx.end(), 0);
    nodes_.reserve(points_.size());
    root_ = build(idx, 0, int(idx.size()));
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<Vec3>& points() const { return points_; }

  struct Neighbor {
    double d2;
    int index;
    bool operator<(const Neighbor& o) const {
      return d2 != o.d2 ? d2 < o.d2 : index < o.index;
    }
  };

  // Up to k nearest points within max_dist, sorted by (distance, index).
  std::vector<Neighbor> knn(const Vec3& query, int k, double max_dist) const {
    std::vector<Neighbor> heap;  // max-heap on operator<
    if (k > 0 && root_ >= 0) {
      search(root_, query, k, max_dist * max_dist, heap);
    }
    std::sort_heap(heap.begin(), heap.end());
    return heap;
  }

 private:
  struct Node {
    int point = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  int build(std::vector<int>& idx, int lo, int hi) {
    if (lo >= hi) return -1;
    Vec3 mn = points_[idx[lo]], mx = mn;
    for (int i = lo + 1; i < hi; ++i) {
      mn = mn.cwiseMin(points_[idx[i]]);
      mx = mx.cwiseMax(points_[idx[i]]);
    }
    int axis = 0;
    (mx - mn).maxCoeff(&axis);
    const int mid = (lo + hi) / 2;
    std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                     [&](int a, int b) {
                       const double da = points_[a][axis], db = points_[b][axis];
                       return da != db ? da < db : a < b;
                     });
    Node node;
    node.point = idx[mid];
    node.axis = axis;
    const int self = int(nodes_.size());
    nodes_.push_back(node);
    const int left = build(idx, lo, mid);
    const int right = build(idx, mid + 1, hi);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
  }

  void consider(const Vec3& query, int point, int k, double max_d2,
                std::vector<Neighbor>& heap) const {
    const double d2 = (points_[point] - query).squaredNorm();
    if (d2 > max_d2) return;
    const Neighbor cand{d2, point};
    if (int(heap.size()) < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end());
    } else if (cand < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end());
    }
  }

  void search(int node_id, const Vec3& query, int k, double max_d2,
              std::vector<Neighbor>& heap) const {
    const Node& node = nodes_[node_id];
    consider(query, node.point, k, max_d2, heap);
    const double delta = query[node.axis] - points_[node.point][node.axis];
    const int near = delta < 0 ? node.left : node.right;
    const int far = delta < 0 ? node.right : node.left;
    if (near >= 0) search(near, query, k, max_d2, heap);
    // The far half-space can only help if the splitting plane is closer than
    // the current worst (or the heap is not yet full).
    const double plane_d2 = delta * delta;
    if (far >= 0 && plane_d2 <= max_d2 &&
        (int(heap.size()) < k || plane_d2 <= heap.front().d2)) {
      search(far, query, k, max_d2, heap);
    }
  }

  std::vector<Vec3> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace ilio
