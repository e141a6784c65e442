#pragma once

#include <array>
#include <utility>

#include "screwgrasp/point_cloud.hpp"

namespace screwgrasp {

// Oriented bounding box.  Columns of `orientation` are the box axes, ordered
// by decreasing extent; the first two axes have their first nonzero component
// positive and the third completes a right-handed frame.
struct BoundingBox {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Zero();
  Mat3 orientation = Mat3::Identity();

  // Corner i has axis-k sign set by bit k of i.
  std::array<Vec3, 8> corners() const;

  // The 12 edges as corner-index pairs.
  static const std::array<std::pair<int, int>, 12>& edge_pairs();

  bool contains(const Vec3& p, double tol = 1e-6) const;
  double volume() const { return 8.0 * half_extents.prod(); }
};

// Minimum-volume box over candidate orientations drawn from the cloud's
// normal directions plus the covariance eigenframe; each candidate up-axis
// is refined in-plane by rotating calipers.  Face-flush optima (anything
// box-like) are found exactly.  Collinear or coincident input raises
// degenerate_geometry.
BoundingBox oriented_bounding_box(const PointCloud& cloud);

BoundingBox transform_box(const BoundingBox& box, const Pose& g);

}  // namespace screwgrasp
