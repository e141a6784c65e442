#include "screwgrasp/screw.hpp"

#include <Eigen/Geometry>
#include <cmath>

#include "screwgrasp/errors.hpp"

namespace screwgrasp {

UnitScrew UnitScrew::rotation_about(const Vec3& direction, const Vec3& point) {
  Vec3 l = direction.normalized();
  return {l, point.cross(l), 0.0};
}

UnitScrew UnitScrew::translation_along(const Vec3& direction) {
  return {direction.normalized(), Vec3::Zero(), kInfinitePitch};
}

bool is_valid_screw(const UnitScrew& s, double tol) {
  if (std::abs(s.direction.norm() - 1.0) > tol) return false;
  if (s.pure_translation()) return s.moment == Vec3::Zero();
  return std::isfinite(s.pitch) && std::abs(s.direction.dot(s.moment)) <= tol;
}

namespace {

// Direction sign is ambiguous for a half-turn; pin it so equal inputs give
// bit-equal outputs.
void canonicalize_half_turn(UnitScrew& s) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(s.direction[i]) > 1e-12) {
      if (s.direction[i] < 0.0) {
        s.direction = -s.direction;
        s.moment = -s.moment;
        s.pitch = -s.pitch;
      }
      return;
    }
  }
}

}  // namespace

std::pair<UnitScrew, double> screw_from_poses(const Pose& a, const Pose& b) {
  Pose d = pose_compose(pose_inverse(a), b);
  Eigen::Quaterniond q(d.rotation);
  double vec_norm = q.vec().norm();
  double theta = 2.0 * std::atan2(vec_norm, std::abs(q.w()));
  const Vec3& p = d.translation;

  if (theta < 1e-9) {
    double dist = p.norm();
    if (dist < 1e-9)
      raise(Errc::identity_displacement, "poses coincide, screw axis undefined");
    return {UnitScrew::translation_along(p), dist};
  }

  Vec3 l = q.vec() / vec_norm;
  if (q.w() < 0.0) l = -l;  // keep theta in (0, pi]

  // Point on the axis from the perpendicular part of the translation:
  // (I - R) r = p_perp has the closed-form solution below for r orthogonal
  // to the axis.
  Vec3 p_perp = p - p.dot(l) * l;
  Vec3 r = 0.5 * p_perp + 0.5 / std::tan(0.5 * theta) * l.cross(p_perp);

  UnitScrew s{l, r.cross(l), p.dot(l) / theta};
  if (std::abs(theta - M_PI) <= 1e-9) canonicalize_half_turn(s);
  return {s, theta};
}

Pose screw_exp(const UnitScrew& s, double magnitude) {
  if (s.pure_translation())
    return Pose::from_translation(magnitude * s.direction);

  Mat3 rot = Eigen::AngleAxisd(magnitude, s.direction).toRotationMatrix();
  Vec3 r = s.axis_point();
  Vec3 t = (Mat3::Identity() - rot) * r + s.pitch * magnitude * s.direction;
  return {rot, t};
}

ScrewSegment make_segment(const Pose& start, const Pose& end) {
  auto [screw, magnitude] = screw_from_poses(start, end);
  return {start, end, screw, magnitude};
}

Pose screw_interpolate(const ScrewSegment& seg, double t) {
  return pose_compose(seg.start, screw_exp(seg.screw, t * seg.magnitude));
}

UnitScrew screw_transform(const UnitScrew& s, const Pose& g) {
  Vec3 l = g.rotation * s.direction;
  if (s.pure_translation()) return {l, Vec3::Zero(), kInfinitePitch};
  Vec3 m = g.rotation * s.moment + g.translation.cross(l);
  return {l, m, s.pitch};
}

UnitScrew segment_axis(const ScrewSegment& seg) {
  return screw_transform(seg.screw, seg.start);
}

}  // namespace screwgrasp
