#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>
#include <cstdio>
#include <fstream>
#include <random>

#include "screwgrasp/bounding_box.hpp"
#include "screwgrasp/contact_pairs.hpp"
#include "screwgrasp/errors.hpp"
#include "screwgrasp/point_cloud.hpp"

using namespace screwgrasp;

namespace {

// Grid-sampled box surface centered at the origin, outward analytic normals.
PointCloud grid_box(const Vec3& extents, int per_edge) {
  PointCloud cloud;
  cloud.frame_tag = "object";
  Vec3 h = 0.5 * extents;
  for (int axis = 0; axis < 3; ++axis) {
    int u = (axis + 1) % 3, v = (axis + 2) % 3;
    for (int side = -1; side <= 1; side += 2) {
      for (int i = 0; i < per_edge; ++i)
        for (int j = 0; j < per_edge; ++j) {
          Vec3 p;
          p[axis] = side * h[axis];
          p[u] = -h[u] + (2.0 * h[u] * (i + 0.5)) / per_edge;
          p[v] = -h[v] + (2.0 * h[v] * (j + 0.5)) / per_edge;
          cloud.points.push_back(p);
          Vec3 n = Vec3::Zero();
          n[axis] = side;
          cloud.normals.push_back(n);
        }
    }
  }
  return cloud;
}

std::string temp_path(const char* name) {
  return std::string("/tmp/screwgrasp_test_") + name;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("ply round trip preserves points and normals") {
  PointCloud cloud = grid_box(Vec3(0.2, 0.1, 0.3), 4);
  std::string path = temp_path("roundtrip.ply");
  save_ply(cloud, path);
  PointCloud back = load_ply(path);

  REQUIRE(back.size() == cloud.size());
  for (int i = 0; i < cloud.size(); ++i) {
    CHECK((back.points[i] - cloud.points[i]).norm() == 0.0);
    CHECK((back.normals[i] - cloud.normals[i]).norm() == 0.0);
  }
  std::remove(path.c_str());
}

TEST_CASE("ply parse failures carry line numbers") {
  std::string path = temp_path("bad.ply");

  write_file(path, "ply\nformat ascii 1.0\nelement vertex 2\nproperty double x\n"
                   "property double y\nproperty double z\nend_header\n0 0 0\n0 oops 0\n");
  try {
    load_ply(path);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find("line 9") != std::string::npos);
  }

  write_file(path, "ply\nformat ascii 1.0\nelement vertex 0\nproperty double x\n"
                   "property double y\nproperty double z\nend_header\n");
  try {
    load_ply(path);
    FAIL("expected empty_cloud");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_cloud);
  }

  write_file(path, "not a ply\n");
  CHECK_THROWS_AS(load_ply(path), Error);
  std::remove(path.c_str());
}

TEST_CASE("ply loader estimates normals when absent") {
  PointCloud cloud = grid_box(Vec3(0.2, 0.2, 0.2), 8);
  PointCloud stripped = cloud;
  stripped.normals.clear();
  std::string path = temp_path("nonormals.ply");
  save_ply(stripped, path);

  PointCloud loaded = load_ply(path, 8);
  REQUIRE(loaded.has_normals());
  const double spacing = 0.2 / 8;
  int interior = 0;
  for (int i = 0; i < loaded.size(); ++i) {
    CHECK(loaded.normals[i].dot(loaded.points[i]) >= 0.0);  // outward
    // points well inside a face have purely planar neighborhoods
    const Vec3& p = loaded.points[i];
    const Vec3& n = cloud.normals[i];
    bool deep = true;
    for (int k = 0; k < 3; ++k)
      if (n[k] == 0.0 && std::abs(p[k]) > 0.1 - 2.0 * spacing) deep = false;
    if (deep) {
      ++interior;
      CHECK(loaded.normals[i].dot(n) > 0.99);
    }
  }
  CHECK(interior == 6 * 4 * 4);
  std::remove(path.c_str());
}

TEST_CASE("transform_point_cloud is index-stable and exact on the base pose") {
  PointCloud cloud = grid_box(Vec3(0.1, 0.2, 0.3), 3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  std::vector<Pose> plan;
  for (int i = 0; i < 3; ++i) {
    Mat3 r = Eigen::AngleAxisd(0.3 + i, Vec3(u(rng), u(rng), u(rng)).normalized())
                 .toRotationMatrix();
    plan.push_back({r, Vec3(u(rng), u(rng), u(rng))});
  }

  auto clouds = transform_point_cloud(cloud, plan);
  REQUIRE(clouds.size() == 3);

  for (int i = 0; i < cloud.size(); ++i) {
    CHECK(std::memcmp(clouds[0].points[i].data(), cloud.points[i].data(),
                      3 * sizeof(double)) == 0);
  }

  Pose rel = pose_compose(pose_inverse(plan[0]), plan[2]);
  for (int i = 0; i < cloud.size(); ++i) {
    CHECK((clouds[2].points[i] - rel.apply(cloud.points[i])).norm() <= 1e-12);
    CHECK((clouds[2].normals[i] - rel.rotate(cloud.normals[i])).norm() <= 1e-12);
    CHECK(clouds[2].normals[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("oriented bounding box") {
  SUBCASE("axis aligned") {
    PointCloud cloud = grid_box(Vec3(0.16, 0.06, 0.21), 6);
    BoundingBox box = oriented_bounding_box(cloud);
    CHECK(box.center.norm() <= 1e-9);
    CHECK(box.half_extents[0] == doctest::Approx(0.105).epsilon(1e-9));
    CHECK(box.half_extents[1] == doctest::Approx(0.08).epsilon(1e-9));
    CHECK(box.half_extents[2] == doctest::Approx(0.03).epsilon(1e-9));
    CHECK(std::abs(box.orientation.determinant() - 1.0) <= 1e-9);
    for (const Vec3& p : cloud.points) CHECK(box.contains(p, 1e-6));
  }

  SUBCASE("rotated box recovers the tight volume") {
    PointCloud cloud = grid_box(Vec3(0.16, 0.06, 0.21), 6);
    Mat3 r = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
    PointCloud spun = apply_pose(cloud, {r, Vec3(0.4, -0.2, 0.9)}, "spun");

    BoundingBox box = oriented_bounding_box(spun);
    CHECK(box.half_extents[0] == doctest::Approx(0.105).epsilon(1e-6));
    CHECK(box.half_extents[1] == doctest::Approx(0.08).epsilon(1e-6));
    CHECK(box.half_extents[2] == doctest::Approx(0.03).epsilon(1e-6));
    CHECK((box.center - Vec3(0.4, -0.2, 0.9)).norm() <= 1e-6);
    for (const Vec3& p : spun.points) CHECK(box.contains(p, 1e-6));
  }

  SUBCASE("transform_box composes with apply_pose") {
    PointCloud cloud = grid_box(Vec3(0.1, 0.05, 0.2), 4);
    BoundingBox box = oriented_bounding_box(cloud);
    Pose g{Eigen::AngleAxisd(1.1, Vec3::UnitY()).toRotationMatrix(), Vec3(1, 2, 3)};
    BoundingBox moved = transform_box(box, g);
    PointCloud shifted = apply_pose(cloud, g, "moved");
    for (const Vec3& p : shifted.points) CHECK(moved.contains(p, 1e-6));
    CHECK(moved.volume() == doctest::Approx(box.volume()).epsilon(1e-12));
  }

  SUBCASE("degenerate input") {
    PointCloud line;
    for (int i = 0; i < 10; ++i) line.points.push_back(Vec3(0.01 * i, 0, 0));
    line.normals.assign(10, Vec3::UnitZ());
    CHECK_THROWS_AS(oriented_bounding_box(line), Error);

    PointCloud empty;
    CHECK_THROWS_AS(oriented_bounding_box(empty), Error);
  }

  SUBCASE("corners and edges are consistent") {
    PointCloud cloud = grid_box(Vec3(0.2, 0.1, 0.3), 4);
    BoundingBox box = oriented_bounding_box(cloud);
    auto corners = box.corners();
    for (const Vec3& c : corners) CHECK(box.contains(c, 1e-9));
    int along[3] = {0, 0, 0};
    for (auto [a, b] : BoundingBox::edge_pairs()) {
      Vec3 d = corners[b] - corners[a];
      for (int k = 0; k < 3; ++k)
        if (std::abs(d.dot(box.orientation.col(k))) > 1e-9) {
          CHECK(std::abs(d.norm() - 2.0 * box.half_extents[k]) <= 1e-9);
          ++along[k];
        }
    }
    CHECK(along[0] == 4);
    CHECK(along[1] == 4);
    CHECK(along[2] == 4);
  }
}

TEST_CASE("antipodal pairs") {
  SUBCASE("parallel plates pair up, distant plates do not") {
    PointCloud plates;
    const int per_side = 25;
    for (int side = 0; side < 2; ++side)
      for (int i = 0; i < per_side; ++i)
        for (int j = 0; j < per_side; ++j) {
          double y = -0.05 + 0.1 * i / (per_side - 1);
          double z = -0.05 + 0.1 * j / (per_side - 1);
          plates.points.push_back(Vec3(side ? 0.03 : -0.03, y, z));
          plates.normals.push_back(side ? Vec3(Vec3::UnitX()) : Vec3(-Vec3::UnitX()));
        }

    auto pairs = antipodal_pairs(plates);
    CHECK(!pairs.empty());
    for (const auto& p : pairs) {
      CHECK(p.index_a < p.index_b);
      Vec3 d = plates.points[p.index_b] - plates.points[p.index_a];
      CHECK(d.norm() <= 0.08 + 1e-12);
      // best partner is the directly opposite sample: zero defect
      CHECK(p.defect <= 1e-9);
    }
    // every point found its mirror
    CHECK(static_cast<int>(pairs.size()) == per_side * per_side);

    PointCloud far = plates;
    for (auto& p : far.points) p.x() = p.x() > 0 ? 0.06 : -0.06;
    CHECK(antipodal_pairs(far).empty());
  }

  SUBCASE("normal misalignment beyond tolerance is rejected") {
    PointCloud two;
    two.points = {Vec3(-0.02, 0, 0), Vec3(0.02, 0, 0)};
    double tilt = 20.0 * M_PI / 180.0;
    two.normals = {-Vec3::UnitX(),
                   Vec3(std::cos(tilt), std::sin(tilt), 0.0)};
    CHECK(antipodal_pairs(two).empty());

    two.normals[1] = Vec3(std::cos(0.1), std::sin(0.1), 0.0);
    auto pairs = antipodal_pairs(two);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].defect == doctest::Approx(0.1).epsilon(1e-9));
  }
}
