#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "screwgrasp/pose.hpp"

namespace screwgrasp {

// Indexed point set with unit outward normals.  Point indices are stable
// through every rigid transform in the pipeline, which is what lets grasping
// regions from different motion segments be intersected directly.
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  std::string frame_tag;

  int size() const { return static_cast<int>(points.size()); }
  bool has_normals() const { return !points.empty() && normals.size() == points.size(); }
};

// ASCII PLY loader.  Normals come from nx/ny/nz properties when present,
// otherwise they are estimated from the k nearest neighbors.  Malformed
// input raises parse_error with the offending line number; a vertex count
// of zero raises empty_cloud.
PointCloud load_ply(const std::string& path, int k_neighbors = 20);

struct Color {
  uint8_t r = 0, g = 0, b = 0;
};

// ASCII PLY writer; pass per-point colors to get uchar red/green/blue
// properties in the output.
void save_ply(const PointCloud& cloud, const std::string& path,
              const std::vector<Color>* colors = nullptr);

// Covariance-based normal estimation: smallest eigenvector of the
// k-neighborhood scatter, oriented away from the cloud centroid.  Degenerate
// neighborhoods (coincident or collinear samples) fall back to the
// centroid-outward direction.
void estimate_normals(PointCloud& cloud, int k_neighbors = 20);

PointCloud apply_pose(const PointCloud& cloud, const Pose& g, std::string frame_tag);

// One cloud per plan pose, all expressed in the frame of plan[0]:
// element i places the object as plan[i] does, via plan[0]^-1 * plan[i].
// Element 0 is a verbatim copy of the input.
std::vector<PointCloud> transform_point_cloud(const PointCloud& cloud,
                                              const std::vector<Pose>& plan);

}  // namespace screwgrasp
