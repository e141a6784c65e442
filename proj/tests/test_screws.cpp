#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "screwgrasp/errors.hpp"
#include "screwgrasp/screw.hpp"

using namespace screwgrasp;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v;
  do {
    v = Vec3(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

Pose random_pose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, M_PI);
  Mat3 r = Eigen::AngleAxisd(ang(rng), random_unit(rng)).toRotationMatrix();
  return {r, random_vec(rng, 2.0)};
}

// Distance between two screw axis lines, assuming directions already agree.
double axis_line_distance(const UnitScrew& a, const UnitScrew& b) {
  Vec3 d = b.axis_point() - a.axis_point();
  return (d - d.dot(a.direction) * a.direction).norm();
}

}  // namespace

TEST_CASE("pose compose and inverse") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    Pose g = random_pose(rng);
    Pose id = pose_compose(g, pose_inverse(g));
    CHECK((id.rotation - Mat3::Identity()).norm() <= 1e-12);
    CHECK(id.translation.norm() <= 1e-12);
    CHECK(is_valid_rotation(g.rotation));
  }
}

TEST_CASE("pose json round trip and validation") {
  std::mt19937_64 rng(11);
  Pose g = random_pose(rng);
  Pose back = pose_from_json(pose_to_json(g));
  CHECK((back.rotation - g.rotation).norm() <= 1e-9);
  CHECK((back.translation - g.translation).norm() <= 1e-12);

  auto j = pose_to_json(g);
  j["quaternion"][0] = j["quaternion"][0].get<double>() + 0.01;
  CHECK_THROWS_AS(pose_from_json(j), Error);

  nlohmann::json nearly = {{"position", {0, 0, 0}},
                           {"quaternion", {1.0 + 5e-7, 0, 0, 0}}};
  Pose p = pose_from_json(nearly);  // renormalized, not rejected
  CHECK(is_valid_rotation(p.rotation));
}

TEST_CASE("screw decomposition basics") {
  SUBCASE("identity displacement is an error") {
    CHECK_THROWS_AS(screw_from_poses(Pose::identity(), Pose::identity()), Error);
    Pose wiggle{Mat3::Identity(), Vec3(1e-12, 0, 0)};
    CHECK_THROWS_AS(screw_from_poses(Pose::identity(), wiggle), Error);
  }

  SUBCASE("pure translation") {
    Pose b = Pose::from_translation(Vec3(0.3, -0.4, 1.2));
    auto [s, mag] = screw_from_poses(Pose::identity(), b);
    CHECK(s.pure_translation());
    CHECK(s.moment == Vec3::Zero());
    CHECK(mag == doctest::Approx(b.translation.norm()).epsilon(1e-12));
    CHECK((s.direction - b.translation.normalized()).norm() <= 1e-12);
    CHECK(is_valid_screw(s));
  }

  SUBCASE("pure rotation about an off-origin axis") {
    Vec3 axis = Vec3(0, 0, 1);
    Vec3 point(1.0, 2.0, -0.5);
    Pose b = pose_rotation_about_line(axis, point, 0.8);
    auto [s, mag] = screw_from_poses(Pose::identity(), b);
    CHECK(mag == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(s.pitch == doctest::Approx(0.0));
    CHECK((s.direction - axis).norm() <= 1e-12);
    Vec3 expected_r = point - point.dot(axis) * axis;
    CHECK((s.axis_point() - expected_r).norm() <= 1e-9);
  }

  SUBCASE("half turn gets a canonical axis sign") {
    Pose b{Eigen::AngleAxisd(M_PI, Vec3(0, -1, 0)).toRotationMatrix(), Vec3::Zero()};
    auto [s, mag] = screw_from_poses(Pose::identity(), b);
    CHECK(mag == doctest::Approx(M_PI));
    CHECK(s.direction.y() > 0.0);  // first nonzero component positive
  }
}

TEST_CASE("segment interpolation hits both endpoints") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    Pose a = random_pose(rng), b = random_pose(rng);
    ScrewSegment seg = make_segment(a, b);
    CHECK(pose_approx_equal(screw_interpolate(seg, 0.0), a, 1e-12));
    CHECK(pose_approx_equal(screw_interpolate(seg, 1.0), b, 1e-6));

    // midpoint of a constant screw motion: same screw from both halves
    Pose mid = screw_interpolate(seg, 0.5);
    auto [s1, m1] = screw_from_poses(a, mid);
    auto [s2, m2] = screw_from_poses(mid, b);
    CHECK(m1 == doctest::Approx(m2).epsilon(1e-6));
  }
}

TEST_CASE("1000 random screws: exp/log round trip") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> theta_dist(1e-3, M_PI - 1e-3);
  std::uniform_real_distribution<double> pitch_dist(0.0, 1.5);
  std::uniform_real_distribution<double> mag_dist(0.05, 2.0);
  std::uniform_int_distribution<int> kind(0, 9);

  for (int i = 0; i < 1000; ++i) {
    UnitScrew s;
    double mag;
    int k = kind(rng);
    if (k < 2) {  // pure translation
      s = UnitScrew::translation_along(random_unit(rng));
      mag = mag_dist(rng);
    } else {
      s.direction = random_unit(rng);
      s.moment = random_vec(rng, 1.0).cross(s.direction);
      // keep the moment consistent: m = r x l for r = l x m
      s.moment = s.axis_point().cross(s.direction);
      s.pitch = k < 5 ? 0.0 : pitch_dist(rng);
      mag = theta_dist(rng);
    }
    REQUIRE(is_valid_screw(s));

    Pose g = screw_exp(s, mag);
    auto [back, back_mag] = screw_from_poses(Pose::identity(), g);

    if (s.pure_translation()) {
      CHECK(back.pure_translation());
      CHECK((back.direction - s.direction).norm() <= 1e-6);
      CHECK(back_mag == doctest::Approx(mag).epsilon(1e-9));
    } else {
      CHECK(std::abs(back_mag - mag) <= 1e-9);
      CHECK((back.direction - s.direction).norm() <= 1e-6);
      CHECK(axis_line_distance(s, back) <= 1e-6);
      CHECK(std::abs(back.pitch - s.pitch) <= 1e-6);
    }
  }
}

TEST_CASE("1000 random screws: frame conjugation") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> theta_dist(1e-3, M_PI - 1e-3);
  std::uniform_real_distribution<double> pitch_dist(0.0, 1.0);

  for (int i = 0; i < 1000; ++i) {
    UnitScrew s;
    if (i % 5 == 0) {
      s = UnitScrew::translation_along(random_unit(rng));
    } else {
      s.direction = random_unit(rng);
      s.moment = random_vec(rng, 1.0).cross(s.direction);
      s.moment = s.axis_point().cross(s.direction);
      s.pitch = (i % 3 == 0) ? 0.0 : pitch_dist(rng);
    }
    double mag = theta_dist(rng);
    Pose g = random_pose(rng);

    Pose lhs = screw_exp(screw_transform(s, g), mag);
    Pose rhs = pose_compose(pose_compose(g, screw_exp(s, mag)), pose_inverse(g));
    CHECK((lhs.rotation - rhs.rotation).norm() <= 1e-9);
    CHECK((lhs.translation - rhs.translation).norm() <= 1e-9);

    CHECK(is_valid_screw(screw_transform(s, g), 1e-7));
  }
}

TEST_CASE("segment axis equals conjugated segment screw") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 50; ++i) {
    Pose a = random_pose(rng), b = random_pose(rng);
    ScrewSegment seg = make_segment(a, b);
    UnitScrew spatial = segment_axis(seg);
    // applying the spatial screw on the left must map start to end
    Pose lhs = pose_compose(screw_exp(spatial, seg.magnitude), a);
    CHECK(pose_approx_equal(lhs, b, 1e-6));
  }
}
