#include "screwgrasp/bounding_box.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "screwgrasp/errors.hpp"

namespace screwgrasp {

std::array<Vec3, 8> BoundingBox::corners() const {
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    Vec3 s((i & 1) ? 1.0 : -1.0, (i & 2) ? 1.0 : -1.0, (i & 4) ? 1.0 : -1.0);
    out[i] = center + orientation * s.cwiseProduct(half_extents);
  }
  return out;
}

const std::array<std::pair<int, int>, 12>& BoundingBox::edge_pairs() {
  static const std::array<std::pair<int, int>, 12> pairs = {{
      {0, 1}, {2, 3}, {4, 5}, {6, 7},  // along axis 0
      {0, 2}, {1, 3}, {4, 6}, {5, 7},  // along axis 1
      {0, 4}, {1, 5}, {2, 6}, {3, 7},  // along axis 2
  }};
  return pairs;
}

bool BoundingBox::contains(const Vec3& p, double tol) const {
  Vec3 local = orientation.transpose() * (p - center);
  return (local.cwiseAbs() - half_extents).maxCoeff() <= tol;
}

namespace {

struct Vec2 {
  double x, y;
};

// Andrew monotone chain; returns the hull counterclockwise without the
// closing point.  Collinear inputs collapse to 2 points, coincident to 1.
std::vector<Vec2> convex_hull_2d(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  const int n = static_cast<int>(pts.size());
  if (n <= 2) return pts;

  auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Vec2> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

struct Rect {
  double area;
  double cos_a, sin_a;  // direction of the rectangle's first side
};

// Minimum-area enclosing rectangle; one side is flush with a hull edge.
Rect min_area_rect(const std::vector<Vec2>& hull) {
  const int h = static_cast<int>(hull.size());
  if (h == 1) return {0.0, 1.0, 0.0};
  if (h == 2) {
    double dx = hull[1].x - hull[0].x, dy = hull[1].y - hull[0].y;
    double len = std::hypot(dx, dy);
    return {0.0, dx / len, dy / len};
  }

  Rect best{std::numeric_limits<double>::infinity(), 1.0, 0.0};
  for (int i = 0; i < h; ++i) {
    int j = (i + 1) % h;
    double dx = hull[j].x - hull[i].x, dy = hull[j].y - hull[i].y;
    double len = std::hypot(dx, dy);
    if (len < 1e-15) continue;
    double c = dx / len, s = dy / len;
    double lo_u = 0, hi_u = 0, lo_v = 0, hi_v = 0;
    for (int m = 0; m < h; ++m) {
      double u = c * (hull[m].x - hull[i].x) + s * (hull[m].y - hull[i].y);
      double v = -s * (hull[m].x - hull[i].x) + c * (hull[m].y - hull[i].y);
      lo_u = std::min(lo_u, u), hi_u = std::max(hi_u, u);
      lo_v = std::min(lo_v, v), hi_v = std::max(hi_v, v);
    }
    double area = (hi_u - lo_u) * (hi_v - lo_v);
    if (area < best.area) best = {area, c, s};
  }
  return best;
}

// Any unit vector orthogonal to w, chosen deterministically.
Vec3 orthogonal_to(const Vec3& w) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(w[i]) < std::abs(w[k])) k = i;
  return w.cross(Vec3::Unit(k)).normalized();
}

}  // namespace

BoundingBox oriented_bounding_box(const PointCloud& cloud) {
  const int n = cloud.size();
  if (n == 0) raise(Errc::empty_cloud, "cannot bound an empty cloud");

  // Candidate up-axes: deduplicated surface normals (for box-like objects
  // these are the face directions, which makes the face-flush optimum
  // reachable) plus the covariance eigenframe and the coordinate axes.
  std::vector<Vec3> candidates;
  auto add_candidate = [&](const Vec3& d) {
    double len = d.norm();
    if (len < 1e-12) return;
    Vec3 u = d / len;
    for (const Vec3& c : candidates)
      if (std::abs(c.dot(u)) > 0.9962) return;  // within ~5 degrees
    candidates.push_back(u);
  };

  if (cloud.has_normals())
    for (const Vec3& nrm : cloud.normals) {
      if (candidates.size() >= 32) break;
      add_candidate(nrm);
    }

  Vec3 mean = Vec3::Zero();
  for (const Vec3& p : cloud.points) mean += p;
  mean /= n;
  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : cloud.points) {
    Vec3 d = p - mean;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  for (int i = 0; i < 3; ++i) add_candidate(eig.eigenvectors().col(i));
  for (int i = 0; i < 3; ++i) add_candidate(Vec3::Unit(i));

  double best_volume = std::numeric_limits<double>::infinity();
  BoundingBox best;

  std::vector<Vec2> projected(n);
  for (const Vec3& w : candidates) {
    Vec3 u0 = orthogonal_to(w);
    Vec3 v0 = w.cross(u0);
    for (int i = 0; i < n; ++i)
      projected[i] = {cloud.points[i].dot(u0), cloud.points[i].dot(v0)};

    Rect rect = min_area_rect(convex_hull_2d(projected));
    Vec3 u = rect.cos_a * u0 + rect.sin_a * v0;
    Vec3 v = w.cross(u);

    Vec3 lo(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const Vec3& p : cloud.points) {
      Vec3 q(p.dot(u), p.dot(v), p.dot(w));
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
    Vec3 extent = 0.5 * (hi - lo);
    double volume = 8.0 * extent.prod();

    if (volume < best_volume * (1.0 - 1e-12)) {
      best_volume = volume;
      Vec3 mid = 0.5 * (hi + lo);
      best.center = mid.x() * u + mid.y() * v + mid.z() * w;
      best.half_extents = extent;
      best.orientation.col(0) = u;
      best.orientation.col(1) = v;
      best.orientation.col(2) = w;
    }
  }

  // Canonical form: axes by decreasing extent, first nonzero component of
  // the leading two axes positive, right-handed.
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (best.half_extents[a] != best.half_extents[b])
      return best.half_extents[a] > best.half_extents[b];
    return a < b;
  });
  Mat3 axes;
  Vec3 extents;
  for (int i = 0; i < 3; ++i) {
    axes.col(i) = best.orientation.col(order[i]);
    extents[i] = best.half_extents[order[i]];
  }
  if (extents[1] <= 1e-9)
    raise(Errc::degenerate_geometry, "points are collinear or coincident");

  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 3; ++k) {
      if (std::abs(axes(k, i)) <= 1e-9) continue;
      if (axes(k, i) < 0.0) axes.col(i) = -axes.col(i);
      break;
    }
  axes.col(2) = axes.col(0).cross(axes.col(1));

  return {best.center, extents, axes};
}

BoundingBox transform_box(const BoundingBox& box, const Pose& g) {
  return {g.apply(box.center), box.half_extents, g.rotation * box.orientation};
}

}  // namespace screwgrasp
