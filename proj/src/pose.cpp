#include "screwgrasp/pose.hpp"

#include <Eigen/Geometry>

#include "screwgrasp/errors.hpp"

namespace screwgrasp {

bool is_valid_rotation(const Mat3& r, double tol) {
  return (r.transpose() * r - Mat3::Identity()).norm() <= tol &&
         std::abs(r.determinant() - 1.0) <= tol;
}

Pose pose_compose(const Pose& a, const Pose& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

Pose pose_inverse(const Pose& g) {
  Mat3 rt = g.rotation.transpose();
  return {rt, -(rt * g.translation)};
}

Pose pose_rotation_about_line(const Vec3& direction, const Vec3& point, double angle) {
  Mat3 r = Eigen::AngleAxisd(angle, direction.normalized()).toRotationMatrix();
  return {r, point - r * point};
}

bool pose_approx_equal(const Pose& a, const Pose& b, double tol) {
  return (a.rotation - b.rotation).norm() <= tol &&
         (a.translation - b.translation).norm() <= tol;
}

nlohmann::json pose_to_json(const Pose& g) {
  Eigen::Quaterniond q(g.rotation);
  if (q.w() < 0.0) q.coeffs() *= -1.0;  // canonical sign for determinism
  return {
      {"position", {g.translation.x(), g.translation.y(), g.translation.z()}},
      {"quaternion", {q.w(), q.x(), q.y(), q.z()}},
  };
}

Pose pose_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("position") || !j.contains("quaternion"))
    raise(Errc::parse_error, "pose requires position and quaternion fields");
  auto pos = j.at("position");
  auto quat = j.at("quaternion");
  if (!pos.is_array() || pos.size() != 3 || !quat.is_array() || quat.size() != 4)
    raise(Errc::parse_error, "pose expects position[3] and quaternion[4] (w,x,y,z)");

  Eigen::Quaterniond q(quat[0].get<double>(), quat[1].get<double>(),
                       quat[2].get<double>(), quat[3].get<double>());
  if (std::abs(q.norm() - 1.0) > 1e-6)
    raise(Errc::parse_error, "quaternion norm deviates from 1 by more than 1e-6");
  q.normalize();

  Pose g;
  g.rotation = q.toRotationMatrix();
  g.translation = Vec3(pos[0].get<double>(), pos[1].get<double>(), pos[2].get<double>());
  return g;
}

}  // namespace screwgrasp
