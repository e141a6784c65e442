#include "screwgrasp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "screwgrasp/errors.hpp"

namespace screwgrasp {
namespace {

int odd_count(double length, double linear_density) {
  int n = std::max(1, static_cast<int>(std::lround(length * linear_density)));
  return n % 2 == 0 ? n + 1 : n;
}

int even_count(double length, double linear_density, int floor_count) {
  int n = std::max(floor_count, static_cast<int>(std::lround(length * linear_density)));
  return n % 2 == 0 ? n : n + 1;
}

void shuffle_points(PointCloud& cloud, unsigned seed) {
  std::vector<int> perm(cloud.points.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Vec3> points(perm.size()), normals(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    points[i] = cloud.points[perm[i]];
    normals[i] = cloud.normals[perm[i]];
  }
  cloud.points = std::move(points);
  cloud.normals = std::move(normals);
}

}  // namespace

PointCloud generate_box_cloud(const Vec3& extents, double samples_per_unit_area,
                              unsigned seed) {
  if (!(extents.minCoeff() > 0.0)) {
    raise(Errc::invalid_argument, "box extents must be positive");
  }
  if (!(samples_per_unit_area > 0.0)) {
    raise(Errc::invalid_argument, "sample density must be positive");
  }
  const double linear = std::sqrt(samples_per_unit_area);
  PointCloud cloud;
  cloud.frame_tag = "body";
  for (int k = 0; k < 3; ++k) {
    const int u = (k + 1) % 3;
    const int v = (k + 2) % 3;
    const int nu = odd_count(extents[u], linear);
    const int nv = odd_count(extents[v], linear);
    for (int side = 0; side < 2; ++side) {
      const double sk = side == 0 ? -1.0 : 1.0;
      Vec3 normal = Vec3::Zero();
      normal[k] = sk;
      for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
          Vec3 p;
          p[k] = sk * 0.5 * extents[k];
          p[u] = ((i + 0.5) / nu - 0.5) * extents[u];
          p[v] = ((j + 0.5) / nv - 0.5) * extents[v];
          cloud.points.push_back(p);
          cloud.normals.push_back(normal);
        }
      }
    }
  }
  shuffle_points(cloud, seed);
  return cloud;
}

PointCloud generate_cylinder_cloud(double radius, double height,
                                   double samples_per_unit_area, unsigned seed) {
  if (!(radius > 0.0) || !(height > 0.0)) {
    raise(Errc::invalid_argument, "cylinder radius and height must be positive");
  }
  if (!(samples_per_unit_area > 0.0)) {
    raise(Errc::invalid_argument, "sample density must be positive");
  }
  const double linear = std::sqrt(samples_per_unit_area);
  PointCloud cloud;
  cloud.frame_tag = "body";

  const int n_theta = even_count(2.0 * M_PI * radius, linear, 8);
  const int n_z = odd_count(height, linear);
  for (int i = 0; i < n_z; ++i) {
    const double z = ((i + 0.5) / n_z - 0.5) * height;
    for (int j = 0; j < n_theta; ++j) {
      const double theta = 2.0 * M_PI * j / n_theta;
      const Vec3 n(std::cos(theta), std::sin(theta), 0.0);
      cloud.points.push_back(Vec3(radius * n.x(), radius * n.y(), z));
      cloud.normals.push_back(n);
    }
  }

  const int n_r = std::max(1, static_cast<int>(std::lround(radius * linear)));
  for (int side = 0; side < 2; ++side) {
    const double sz = side == 0 ? -1.0 : 1.0;
    const Vec3 normal(0.0, 0.0, sz);
    cloud.points.push_back(Vec3(0.0, 0.0, sz * 0.5 * height));
    cloud.normals.push_back(normal);
    for (int i = 0; i < n_r; ++i) {
      const double r = (i + 0.5) / n_r * radius;
      const int m = even_count(2.0 * M_PI * r, linear, 4);
      for (int j = 0; j < m; ++j) {
        const double theta = 2.0 * M_PI * j / m;
        cloud.points.push_back(
            Vec3(r * std::cos(theta), r * std::sin(theta), sz * 0.5 * height));
        cloud.normals.push_back(normal);
      }
    }
  }
  shuffle_points(cloud, seed);
  return cloud;
}

}  // namespace screwgrasp
