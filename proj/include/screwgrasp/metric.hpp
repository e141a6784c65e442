#pragma once

#include <vector>

#include "screwgrasp/bounding_box.hpp"
#include "screwgrasp/contact_pairs.hpp"
#include "screwgrasp/point_cloud.hpp"
#include "screwgrasp/pose.hpp"
#include "screwgrasp/screw.hpp"

namespace screwgrasp {

// A fixed support from the surroundings (table, pivot edge endpoint). The
// normal points into the object: it is the direction the support can push.
struct EnvironmentContact {
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  double mu = 0.3;
};

// Everything the per-pair metric needs for one motion segment. All members
// live in the same frame as the cloud the context is evaluated against.
struct TaskContext {
  UnitScrew task_screw;
  std::vector<EnvironmentContact> environment_contacts;
  Vec6 gravity_wrench = Vec6::Zero();  // about the frame origin
  // Point the task force line passes through when the screw is a pure
  // translation (whose axis carries no location of its own); rotations pin
  // the reference to the axis instead.  build_task_context uses the box
  // center, which keeps the metric independent of the working frame.
  Vec3 task_reference = Vec3::Zero();
  double mu_robot = 0.8;
  int cone_facets = 16;
  double force_cap = 1.0;
};

// Graspable subset of the cloud for one segment. eta holds the normalized
// per-point metric for every point; member_indices are the points at or
// above the threshold, sorted ascending.
struct GraspRegion {
  int segment_index = 0;
  std::vector<int> member_indices;
  std::vector<double> eta;
  double max_raw_eta = 0.0;  // normalization divisor, 0 when all points score 0
  double threshold = 0.75;

  bool empty() const { return member_indices.empty(); }
};

enum class Primitive { kPivot, kSlide, kPickup, kFree };

struct TaskParams {
  double mass = 0.5;
  double mu_robot = 0.8;
  double mu_env = 0.3;
  int cone_facets = 16;
  double force_cap = 1.0;
  double gravity = 9.81;
  double pivot_axis_tolerance = 0.01;
};

// Unit wrench about the axis point l x m that the task asks the grasp to
// produce: pure moment for rotation, pure force for translation, a mixed
// unit 6-vector for finite pitch.
Vec6 unit_task_wrench(const UnitScrew& s);

// Edge directions of the linearized friction cone around an into-object
// normal, each scaled so its component along the normal is exactly 1; any
// nonnegative combination then has total normal force = sum of coefficients.
// Facet angles nest when facets doubles, so the cone grows monotonically.
// A nonzero tangent_seed anchors the first facet along the seed's tangential
// projection; the metric seeds from task and pair geometry so its value is
// independent of the working frame.
Eigen::Matrix3Xd friction_cone_edges(const Vec3& normal, double mu, int facets,
                                     const Vec3& tangent_seed = Vec3::Zero());

// Maximum multiple of the unit task wrench a parallel-jaw grasp at the pair
// can exert together with the environment contacts, balancing gravity, with
// every force inside its friction cone and the summed robot normal force
// capped. 0 when no equilibrium exists for this pair.
double eta_for_pair(const ContactPair& pair, const PointCloud& cloud,
                    const TaskContext& ctx);

// Per-segment grasping regions: every antipodal pair of cloud i is scored
// with context i, each point keeps the best score over its pairs, scores are
// normalized by the segment maximum and thresholded at eta_th.
std::vector<GraspRegion> compute_metric(const std::vector<PointCloud>& clouds,
                                        const std::vector<Pose>& plan,
                                        const std::vector<TaskContext>& contexts,
                                        double eta_th,
                                        const PairParams& pair_params = {});

// Context for one segment: task axis at the segment start, environment
// contacts chosen by the primitive (pivot edge endpoints, bottom face
// center, or none), gravity wrench about the frame origin through the box
// center. segment and bbox must describe the object at the segment start in
// the common working frame.
TaskContext build_task_context(const ScrewSegment& segment,
                               const BoundingBox& bbox, Primitive primitive,
                               const TaskParams& params);

const char* primitive_name(Primitive p);

}  // namespace screwgrasp
