#include "screwgrasp/contact_pairs.hpp"

#include <algorithm>
#include <cmath>

#include "screwgrasp/errors.hpp"

namespace screwgrasp {

std::vector<ContactPair> antipodal_pairs(const PointCloud& cloud, const PairParams& params) {
  if (!cloud.has_normals()) raise(Errc::invalid_argument, "cloud has no normals");
  if (params.max_gripper_width <= 0.0 || params.antipodal_tolerance <= 0.0)
    raise(Errc::invalid_argument, "gripper width and tolerance must be positive");

  const int n = cloud.size();
  const double w2 = params.max_gripper_width * params.max_gripper_width;
  // angle(n_a, -u) <= tol and angle(n_b, u) <= tol, u the a->b direction
  const double min_cos = std::cos(params.antipodal_tolerance);

  struct Best {
    double defect = std::numeric_limits<double>::infinity();
    int partner = -1;
  };
  std::vector<Best> best(n);

  auto offer = [&](int i, int j, double defect) {
    Best& b = best[i];
    if (defect < b.defect || (defect == b.defect && j < b.partner)) b = {defect, j};
  };

  for (int a = 0; a < n; ++a) {
    const Vec3& pa = cloud.points[a];
    const Vec3& na = cloud.normals[a];
    for (int b = a + 1; b < n; ++b) {
      Vec3 d = cloud.points[b] - pa;
      double d2 = d.squaredNorm();
      if (d2 > w2 || d2 < 1e-18) continue;
      Vec3 u = d / std::sqrt(d2);
      double ca = -na.dot(u);
      double cb = cloud.normals[b].dot(u);
      if (ca < min_cos || cb < min_cos) continue;
      double defect = std::acos(std::clamp(std::min(ca, cb), -1.0, 1.0));
      offer(a, b, defect);
      offer(b, a, defect);
    }
  }

  std::vector<ContactPair> pairs;
  pairs.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (best[i].partner < 0) continue;
    int a = std::min(i, best[i].partner), b = std::max(i, best[i].partner);
    pairs.push_back({a, b, best[i].defect});
  }
  std::sort(pairs.begin(), pairs.end(), [](const ContactPair& x, const ContactPair& y) {
    return x.index_a < y.index_a || (x.index_a == y.index_a && x.index_b < y.index_b);
  });
  pairs.erase(std::unique(pairs.begin(), pairs.end(),
                          [](const ContactPair& x, const ContactPair& y) {
                            return x.index_a == y.index_a && x.index_b == y.index_b;
                          }),
              pairs.end());
  return pairs;
}

}  // namespace screwgrasp
