#include "screwgrasp/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "screwgrasp/bounding_box.hpp"
#include "screwgrasp/errors.hpp"

namespace screwgrasp {
namespace {

nlohmann::json screw_to_json(const UnitScrew& s) {
  nlohmann::json j;
  j["direction"] = {s.direction.x(), s.direction.y(), s.direction.z()};
  j["moment"] = {s.moment.x(), s.moment.y(), s.moment.z()};
  if (s.pure_translation()) {
    j["pitch"] = "inf";
  } else {
    j["pitch"] = s.pitch;
  }
  return j;
}

nlohmann::json vec3_to_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

double pair_group_eta(const ContactPair& pair,
                      const std::vector<GraspRegion>& regions, int first,
                      int last) {
  double eta = std::numeric_limits<double>::infinity();
  for (int i = first; i <= last; ++i) {
    eta = std::min(eta, std::min(regions[i].eta[pair.index_a],
                                 regions[i].eta[pair.index_b]));
  }
  return eta;
}

}  // namespace

PipelineResult run_pipeline(const PointCloud& cloud, const PlanSpec& spec,
                            const PipelineParams& params) {
  if (cloud.size() == 0) raise(Errc::empty_cloud, "pipeline input cloud is empty");
  PointCloud canonical = cloud;
  if (!canonical.has_normals()) estimate_normals(canonical);

  PipelineResult out;
  const BoundingBox bbox = oriented_bounding_box(canonical);
  CompiledPlan compiled = compile_plan(spec, bbox, params.task);
  out.poses = std::move(compiled.poses);
  out.primitives = std::move(compiled.primitives);
  out.clouds = transform_point_cloud(canonical, out.poses);
  out.pairs = antipodal_pairs(canonical, params.pairs);
  out.regions = compute_metric(out.clouds, out.poses, compiled.contexts,
                               params.eta_th, params.pairs);

  for (const GraspRegion& region : out.regions) {
    if (region.empty()) {
      out.warnings.push_back("segment " + std::to_string(region.segment_index) +
                             " (" + primitive_name(out.primitives[region.segment_index]) +
                             "): empty graspable region forces a regrasp boundary");
    }
  }

  out.plan = greedy_partition(out.regions, params.gamma_th);

  for (std::size_t g = 0; g < out.plan.groups.size(); ++g) {
    const SegmentRange range = out.plan.groups[g];
    const GroupScore& score = out.plan.scores[g];
    ContactPair chosen;
    double chosen_eta = 0.0;
    if (!score.intersection.empty()) {
      std::vector<GraspRegion> group_regions(out.regions.begin() + range.first,
                                             out.regions.begin() + range.last + 1);
      try {
        chosen = grasp_contact_selection(score.intersection, out.pairs, group_regions);
        chosen_eta = pair_group_eta(chosen, out.regions, range.first, range.last);
      } catch (const Error& e) {
        if (e.code() != Errc::no_feasible_pair) throw;
        out.warnings.push_back("group " + std::to_string(g) +
                               ": no antipodal pair inside the common region");
      }
    } else {
      out.warnings.push_back("group " + std::to_string(g) +
                             ": empty common region, no grasp to select");
    }
    out.grasps.push_back(chosen);
    out.grasp_etas.push_back(chosen_eta);
  }

  nlohmann::json report;
  report["schema_version"] = 1;
  report["alpha"] = out.plan.alpha();
  report["gamma_th"] = params.gamma_th;
  report["eta_th"] = params.eta_th;
  report["plan_source"] = spec.explicit_poses() ? "poses" : "skeleton";

  nlohmann::json jparams;
  jparams["mass"] = params.task.mass;
  jparams["mu_robot"] = params.task.mu_robot;
  jparams["mu_env"] = params.task.mu_env;
  jparams["cone_facets"] = params.task.cone_facets;
  jparams["force_cap"] = params.task.force_cap;
  jparams["gravity"] = params.task.gravity;
  jparams["pivot_axis_tolerance"] = params.task.pivot_axis_tolerance;
  jparams["max_gripper_width"] = params.pairs.max_gripper_width;
  jparams["antipodal_tolerance"] = params.pairs.antipodal_tolerance;
  report["params"] = jparams;

  report["poses"] = nlohmann::json::array();
  for (const Pose& g : out.poses) report["poses"].push_back(pose_to_json(g));

  report["segments"] = nlohmann::json::array();
  for (std::size_t i = 0; i < out.regions.size(); ++i) {
    nlohmann::json seg;
    seg["index"] = static_cast<int>(i);
    seg["primitive"] = primitive_name(out.primitives[i]);
    seg["task_screw"] = screw_to_json(compiled.contexts[i].task_screw);
    seg["region_size"] = static_cast<int>(out.regions[i].member_indices.size());
    seg["max_raw_eta"] = out.regions[i].max_raw_eta;
    report["segments"].push_back(seg);
  }

  report["groups"] = nlohmann::json::array();
  for (std::size_t g = 0; g < out.plan.groups.size(); ++g) {
    nlohmann::json jg;
    jg["first"] = out.plan.groups[g].first;
    jg["last"] = out.plan.groups[g].last;
    jg["gamma"] = out.plan.scores[g].gamma;
    jg["per_region"] = out.plan.scores[g].per_region;
    jg["intersection_size"] = static_cast<int>(out.plan.scores[g].intersection.size());
    if (out.grasps[g].index_a >= 0) {
      nlohmann::json jc;
      jc["index_a"] = out.grasps[g].index_a;
      jc["index_b"] = out.grasps[g].index_b;
      const int first = out.plan.groups[g].first;
      jc["point_a"] = vec3_to_json(out.clouds[first].points[out.grasps[g].index_a]);
      jc["point_b"] = vec3_to_json(out.clouds[first].points[out.grasps[g].index_b]);
      jc["eta"] = out.grasp_etas[g];
      jg["grasp"] = jc;
    } else {
      jg["grasp"] = nullptr;
    }
    report["groups"].push_back(jg);
  }

  report["warnings"] = out.warnings;
  out.report = std::move(report);
  return out;
}

std::vector<std::string> export_group_clouds(const PipelineResult& result,
                                             const std::string& stem) {
  static const Color kPalette[8] = {
      {66, 133, 244},  {255, 165, 0},  {153, 0, 204}, {0, 188, 212},
      {255, 235, 59},  {121, 85, 72},  {233, 30, 99}, {0, 150, 136},
  };
  const Color kGray{160, 160, 160};
  std::vector<std::string> paths;
  for (std::size_t g = 0; g < result.plan.groups.size(); ++g) {
    const SegmentRange range = result.plan.groups[g];
    const PointCloud& cloud = result.clouds[range.first];
    const Color full = kPalette[g % 8];
    const Color dim{static_cast<uint8_t>(full.r * 0.45),
                    static_cast<uint8_t>(full.g * 0.45),
                    static_cast<uint8_t>(full.b * 0.45)};
    std::vector<Color> colors(cloud.points.size(), kGray);
    for (int i = range.first; i <= range.last; ++i) {
      for (int idx : result.regions[i].member_indices) colors[idx] = dim;
    }
    for (int idx : result.plan.scores[g].intersection) colors[idx] = full;
    if (result.grasps[g].index_a >= 0) {
      colors[result.grasps[g].index_a] = Color{255, 0, 0};
      colors[result.grasps[g].index_b] = Color{0, 255, 0};
    }
    std::string path = stem + "_group" + std::to_string(g) + ".ply";
    save_ply(cloud, path, &colors);
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace screwgrasp
