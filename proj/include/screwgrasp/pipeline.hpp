#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "screwgrasp/contact_pairs.hpp"
#include "screwgrasp/metric.hpp"
#include "screwgrasp/plan_spec.hpp"
#include "screwgrasp/point_cloud.hpp"
#include "screwgrasp/regrasp.hpp"

namespace screwgrasp {

struct PipelineParams {
  TaskParams task;
  PairParams pairs;
  double gamma_th = 0.25;
  double eta_th = 0.75;
};

// Everything one end-to-end run produces.  `report` is the stable wire
// format (schema_version 1); object keys serialize alphabetically, so equal
// inputs give byte-identical dumps.
struct PipelineResult {
  std::vector<Pose> poses;
  std::vector<Primitive> primitives;
  std::vector<PointCloud> clouds;    // object at each pose, working frame
  std::vector<ContactPair> pairs;    // antipodal pairs of the canonical cloud
  std::vector<GraspRegion> regions;  // one per motion segment
  RegraspPlan plan;
  std::vector<ContactPair> grasps;   // per group; {-1,-1} when none qualified
  std::vector<double> grasp_etas;    // worst normalized eta of the chosen pair
  std::vector<std::string> warnings;
  nlohmann::json report;
};

// Full pipeline: bounding box, plan compilation, per-segment grasping
// regions, greedy grasp-interval partition, and one contact pair per group.
// Normals are estimated when the cloud has none.  Empty regions and groups
// without a usable pair become warnings, not errors.
PipelineResult run_pipeline(const PointCloud& cloud, const PlanSpec& spec,
                            const PipelineParams& params = {});

// One colored cloud per grasp group, written as stem_group<k>.ply at the
// pose where the group's grasp is applied: region members in the group
// color (dimmed), intersection points at full color, the selected contact
// pair in red and green.  Returns the written paths.
std::vector<std::string> export_group_clouds(const PipelineResult& result,
                                             const std::string& stem);

}  // namespace screwgrasp
