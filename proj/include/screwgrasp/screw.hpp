#pragma once

#include <limits>
#include <utility>

#include "screwgrasp/pose.hpp"

namespace screwgrasp {

// Pitch value marking a pure translation (no rotation component).
inline constexpr double kInfinitePitch = std::numeric_limits<double>::infinity();

// Screw axis in Pluecker coordinates: unit direction plus line moment
// m = r x l for any point r on the axis.  Finite pitch is translation per
// radian of rotation; kInfinitePitch encodes a pure translation, in which
// case the moment is fixed to zero (the axis has no meaningful location).
struct UnitScrew {
  Vec3 direction = Vec3::UnitZ();
  Vec3 moment = Vec3::Zero();
  double pitch = 0.0;

  bool pure_translation() const { return std::isinf(pitch); }

  // Point on the axis closest to the origin.
  Vec3 axis_point() const { return direction.cross(moment); }

  static UnitScrew rotation_about(const Vec3& direction, const Vec3& point);
  static UnitScrew translation_along(const Vec3& direction);
};

// Constant screw motion between two poses.  The screw is expressed in the
// body frame of `start`; magnitude is radians for finite pitch, meters for
// a pure translation.
struct ScrewSegment {
  Pose start;
  Pose end;
  UnitScrew screw;
  double magnitude = 0.0;
};

// Unit direction, orthogonal moment, zero moment for pure translations.
bool is_valid_screw(const UnitScrew& s, double tol = 1e-9);

// Screw decomposition of the relative displacement a^{-1} b.  Rotation angle
// falls in (0, pi]; at pi the axis sign is fixed by making the first nonzero
// component of the direction positive.  Throws identity_displacement when
// the poses agree to within 1e-9.
std::pair<UnitScrew, double> screw_from_poses(const Pose& a, const Pose& b);

Pose screw_exp(const UnitScrew& s, double magnitude);

ScrewSegment make_segment(const Pose& start, const Pose& end);

// Pose at fraction t of the segment: start * exp(screw, t * magnitude).
Pose screw_interpolate(const ScrewSegment& seg, double t);

// Re-express a screw under the frame change g (axis direction rotates, the
// moment picks up the translation term).
UnitScrew screw_transform(const UnitScrew& s, const Pose& g);

// Spatial axis of a segment, i.e. the segment screw re-expressed in the
// frame its start/end poses are written in.
UnitScrew segment_axis(const ScrewSegment& seg);

}  // namespace screwgrasp
