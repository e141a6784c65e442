#pragma once

#include <Eigen/Dense>
#include <json.hpp>

namespace screwgrasp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Rigid transform on R^3: x -> rotation * x + translation.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose identity() { return {}; }
  static Pose from_translation(const Vec3& t) { return {Mat3::Identity(), t}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 rotate(const Vec3& v) const { return rotation * v; }
};

bool is_valid_rotation(const Mat3& r, double tol = 1e-9);

// Composition acts left to right on points: (a * b)(x) = a(b(x)).
Pose pose_compose(const Pose& a, const Pose& b);
Pose pose_inverse(const Pose& g);

// Rotation about an arbitrary line in space (unit direction through point).
Pose pose_rotation_about_line(const Vec3& direction, const Vec3& point, double angle);

bool pose_approx_equal(const Pose& a, const Pose& b, double tol = 1e-9);

// Wire format: {"position": [x,y,z], "quaternion": [w,x,y,z]}.
// Quaternions are renormalized on load; norms off by more than 1e-6 are
// rejected rather than silently fixed.
nlohmann::json pose_to_json(const Pose& g);
Pose pose_from_json(const nlohmann::json& j);

}  // namespace screwgrasp
