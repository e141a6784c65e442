#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "screwgrasp/bounding_box.hpp"
#include "screwgrasp/metric.hpp"
#include "screwgrasp/pose.hpp"
#include "screwgrasp/screw.hpp"

namespace screwgrasp {

// One primitive of a skeleton plan.  Geometric fields are interpreted in the
// working frame of the pose the step starts from, so a selector like
// "min_y_min_z" tracks the object as earlier steps move it.
struct SkeletonStep {
  Primitive type = Primitive::kPivot;

  // kPivot: either a bbox edge selector ("min_y_min_z") or an explicit axis.
  std::string edge;
  bool has_axis = false;
  Vec3 axis_direction = Vec3::UnitX();
  Vec3 axis_point = Vec3::Zero();
  double angle = 1.5707963267948966;  // radians

  // kSlide (direction + distance) and kPickup (distance, always +z).
  Vec3 direction = Vec3::UnitX();
  double distance = 0.0;  // meters

  // kFree: arbitrary constant screw.
  UnitScrew screw;
  double magnitude = 0.0;
};

// A motion plan as read from disk: either explicit waypoint poses or a
// skeleton of primitives to be compiled against the object's bounding box.
// Exactly one of the two lists is populated.
struct PlanSpec {
  std::vector<Pose> poses;
  std::vector<SkeletonStep> skeleton;

  bool explicit_poses() const { return !poses.empty(); }
};

PlanSpec plan_spec_from_json(const nlohmann::json& j);
PlanSpec load_plan_spec(const std::string& path);

// Poses plus one task context and primitive label per segment, ready for
// compute_metric.  Explicit-pose plans get kFree contexts (gravity only).
struct CompiledPlan {
  std::vector<Pose> poses;
  std::vector<TaskContext> contexts;
  std::vector<Primitive> primitives;
};

// Resolves an edge selector against a box.  Tokens name two working-frame
// axes; candidate edges are those perpendicular to both, ranked by midpoint
// coordinate along the first axis (min ascending, max descending) with the
// second axis breaking ties.  Returns unit direction (first nonzero
// component positive) and edge midpoint.  No perpendicular edge, a malformed
// selector, or twice the same axis raises bad_edge_selector.
std::pair<Vec3, Vec3> select_box_edge(const BoundingBox& box,
                                      const std::string& selector);

// Chains the skeleton into a pose list starting at identity and builds a
// context per segment.  Pivot rotations are oriented so a positive angle
// tips the box over the selected edge: resting on a face, the center swings
// toward the edge; balanced on an edge mid-tumble, it keeps leaning the way
// it already leans.  Explicit axes are taken as given.  Steps with zero
// angle, distance, or magnitude raise zero_magnitude.  bbox describes the
// object at the identity pose.
CompiledPlan compile_plan(const PlanSpec& spec, const BoundingBox& bbox,
                          const TaskParams& params = {});

}  // namespace screwgrasp
