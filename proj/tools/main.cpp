#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "screwgrasp/contact_pairs.hpp"
#include "screwgrasp/errors.hpp"
#include "screwgrasp/metric.hpp"
#include "screwgrasp/pipeline.hpp"
#include "screwgrasp/plan_spec.hpp"
#include "screwgrasp/point_cloud.hpp"
#include "screwgrasp/regrasp.hpp"
#include "screwgrasp/synthetic.hpp"

namespace {

using namespace screwgrasp;

// 2: bad input (files, JSON, argument combinations)
// 3: geometry that cannot be processed
// 4: plan compiles but some segment cannot be grasped
// 5: internal failures
int exit_code_for(Errc code) {
  switch (code) {
    case Errc::parse_error:
    case Errc::invalid_argument:
      return 2;
    case Errc::empty_cloud:
    case Errc::degenerate_geometry:
    case Errc::degenerate_neighborhood:
    case Errc::bad_edge_selector:
    case Errc::zero_magnitude:
    case Errc::axis_not_on_body:
    case Errc::identity_displacement:
      return 3;
    case Errc::no_feasible_pair:
      return 4;
    default:
      return 5;
  }
}

void emit_json(const nlohmann::json& j, const std::string& out) {
  std::string text = j.dump(2);
  text += '\n';
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) raise(Errc::invalid_argument, "cannot write to '" + out + "'");
  f << text;
}

struct CloudSourceOpts {
  std::string cloud_path;
  std::string shape;
  std::vector<double> extents{0.16, 0.06, 0.21};
  double radius = 0.04;
  double height = 0.25;
  double density = 10000.0;
  unsigned seed = 0;
};

void add_cloud_options(CLI::App* cmd, CloudSourceOpts& o) {
  auto* cloud = cmd->add_option("--cloud", o.cloud_path, "input ASCII PLY cloud");
  auto* shape = cmd->add_option("--shape", o.shape, "synthetic shape instead of a file")
                    ->check(CLI::IsMember({"box", "cylinder"}));
  cloud->excludes(shape);
  shape->excludes(cloud);
  cmd->add_option("--extents", o.extents, "box extents in meters")->expected(3);
  cmd->add_option("--radius", o.radius, "cylinder radius in meters");
  cmd->add_option("--height", o.height, "cylinder height in meters");
  cmd->add_option("--density", o.density, "synthetic samples per square meter");
  cmd->add_option("--seed", o.seed, "synthetic point-order seed");
}

PointCloud resolve_cloud(const CloudSourceOpts& o) {
  if (!o.cloud_path.empty()) return load_ply(o.cloud_path);
  if (o.shape == "box") {
    return generate_box_cloud(Vec3(o.extents[0], o.extents[1], o.extents[2]),
                              o.density, o.seed);
  }
  if (o.shape == "cylinder") {
    return generate_cylinder_cloud(o.radius, o.height, o.density, o.seed);
  }
  raise(Errc::invalid_argument, "give either --cloud or --shape");
}

void add_param_options(CLI::App* cmd, PipelineParams& p) {
  cmd->add_option("--gamma-th", p.gamma_th, "minimum group coverage score");
  cmd->add_option("--eta-th", p.eta_th, "normalized metric threshold for region membership");
  cmd->add_option("--mu-robot", p.task.mu_robot, "gripper friction coefficient");
  cmd->add_option("--mu-env", p.task.mu_env, "environment friction coefficient");
  cmd->add_option("--mass", p.task.mass, "object mass in kg");
  cmd->add_option("--force-cap", p.task.force_cap, "total gripper normal-force budget");
  cmd->add_option("--cone-facets", p.task.cone_facets, "friction cone linearization facets");
  cmd->add_option("--gripper-width", p.pairs.max_gripper_width, "maximum jaw opening in meters");
}

nlohmann::json regions_to_json(const PipelineResult& res, double eta_th) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["eta_th"] = eta_th;
  j["segments"] = nlohmann::json::array();
  for (std::size_t i = 0; i < res.regions.size(); ++i) {
    nlohmann::json seg;
    seg["index"] = static_cast<int>(i);
    seg["primitive"] = primitive_name(res.primitives[i]);
    seg["max_raw_eta"] = res.regions[i].max_raw_eta;
    seg["members"] = res.regions[i].member_indices;
    seg["eta"] = res.regions[i].eta;
    j["segments"].push_back(seg);
  }
  return j;
}

std::vector<GraspRegion> regions_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array()) {
    raise(Errc::parse_error, "regions file needs a 'segments' array");
  }
  if (!j.contains("schema_version") || j["schema_version"] != 1) {
    raise(Errc::parse_error, "regions file has an unsupported schema_version");
  }
  std::vector<GraspRegion> regions;
  for (const auto& seg : j["segments"]) {
    GraspRegion r;
    r.segment_index = static_cast<int>(regions.size());
    if (!seg.contains("members") || !seg["members"].is_array()) {
      raise(Errc::parse_error, "regions segment needs a 'members' array");
    }
    for (const auto& m : seg["members"]) {
      if (!m.is_number_integer()) raise(Errc::parse_error, "region members must be integers");
      r.member_indices.push_back(m.get<int>());
    }
    std::sort(r.member_indices.begin(), r.member_indices.end());
    r.member_indices.erase(std::unique(r.member_indices.begin(), r.member_indices.end()),
                           r.member_indices.end());
    if (seg.contains("eta") && seg["eta"].is_array()) {
      for (const auto& e : seg["eta"]) r.eta.push_back(e.get<double>());
    }
    if (seg.contains("max_raw_eta")) r.max_raw_eta = seg["max_raw_eta"].get<double>();
    regions.push_back(std::move(r));
  }
  if (regions.empty()) raise(Errc::parse_error, "regions file lists no segments");
  return regions;
}

nlohmann::json partition_to_json(const RegraspPlan& plan) {
  nlohmann::json j;
  j["alpha"] = plan.alpha();
  j["groups"] = nlohmann::json::array();
  for (std::size_t g = 0; g < plan.groups.size(); ++g) {
    nlohmann::json jg;
    jg["first"] = plan.groups[g].first;
    jg["last"] = plan.groups[g].last;
    jg["gamma"] = plan.scores[g].gamma;
    jg["per_region"] = plan.scores[g].per_region;
    jg["intersection_size"] = static_cast<int>(plan.scores[g].intersection.size());
    j["groups"].push_back(jg);
  }
  return j;
}

// Random region sets for the greedy-vs-exhaustive partition check.
std::vector<GraspRegion> random_regions(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count_dist(2, 11);
  std::uniform_int_distribution<int> size_dist(0, 12);
  std::uniform_int_distribution<int> point_dist(0, 39);
  const int k = count_dist(rng);
  std::vector<GraspRegion> regions(k);
  for (int i = 0; i < k; ++i) {
    regions[i].segment_index = i;
    const int size = size_dist(rng);
    std::vector<int> members;
    for (int s = 0; s < size; ++s) members.push_back(point_dist(rng));
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    regions[i].member_indices = std::move(members);
  }
  return regions;
}

int verify_partitions(unsigned seed, int instances) {
  std::mt19937_64 rng(seed);
  const double thresholds[3] = {0.1, 0.25, 0.5};
  for (int i = 0; i < instances; ++i) {
    const double gamma_th = thresholds[i % 3];
    std::vector<GraspRegion> regions = random_regions(rng);
    RegraspPlan greedy = greedy_partition(regions, gamma_th);
    RegraspPlan best = optimal_partition_bruteforce(regions, gamma_th);
    if (greedy.alpha() != best.alpha()) {
      nlohmann::json bad;
      bad["instance"] = i;
      bad["gamma_th"] = gamma_th;
      bad["greedy_alpha"] = greedy.alpha();
      bad["optimal_alpha"] = best.alpha();
      bad["regions"] = nlohmann::json::array();
      for (const auto& r : regions) bad["regions"].push_back(r.member_indices);
      std::cout << "partition counterexample:\n" << bad.dump(2) << "\n";
      return 1;
    }
  }
  return 0;
}

// Friction-cone growth properties of the pair metric: eta never shrinks when
// mu grows or when the linearization gains facets.
int verify_metric(unsigned seed, int instances) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < instances; ++i) {
    PointCloud cloud;
    const Vec3 offset(0.04 + 0.04 * unit(rng), 0.0, 0.0);
    cloud.points = {offset, -offset};
    Vec3 n0 = -(offset + 0.01 * Vec3(gauss(rng), gauss(rng), gauss(rng))).normalized();
    cloud.points.push_back(Vec3(0.0, 0.0, -0.05));
    cloud.normals = {n0, -n0, Vec3::UnitZ()};
    ContactPair pair{0, 1, 0.0};

    TaskContext ctx;
    Vec3 axis = Vec3(gauss(rng), gauss(rng), gauss(rng));
    if (axis.norm() < 1e-6) axis = Vec3::UnitZ();
    axis.normalize();
    const double kind = unit(rng);
    if (kind < 0.4) {
      ctx.task_screw = UnitScrew::rotation_about(axis, 0.05 * Vec3(gauss(rng), gauss(rng), gauss(rng)));
    } else if (kind < 0.7) {
      ctx.task_screw = UnitScrew::translation_along(axis);
    } else {
      ctx.task_screw = UnitScrew::rotation_about(axis, Vec3::Zero());
      ctx.task_screw.pitch = 0.1 * gauss(rng);
    }
    ctx.gravity_wrench.head<3>() = Vec3(0.0, 0.0, -0.5 * unit(rng));
    ctx.force_cap = 1.0;

    const double mu_lo = 0.2 + 0.3 * unit(rng);
    const double mu_hi = mu_lo + 0.3 + 0.3 * unit(rng);
    double last = -1.0;
    for (double mu : {mu_lo, mu_hi}) {
      ctx.mu_robot = mu;
      ctx.cone_facets = 16;
      const double eta = eta_for_pair(pair, cloud, ctx);
      if (eta < last - 1e-9 * (1.0 + last)) {
        std::cout << "metric counterexample: eta decreased from " << last << " to "
                  << eta << " when mu grew to " << mu << " (instance " << i << ")\n";
        return 1;
      }
      last = eta;
    }
    ctx.mu_robot = mu_hi;
    last = -1.0;
    for (int facets : {8, 16, 32}) {
      ctx.cone_facets = facets;
      const double eta = eta_for_pair(pair, cloud, ctx);
      if (eta < last - 1e-9 * (1.0 + last)) {
        std::cout << "metric counterexample: eta decreased from " << last << " to "
                  << eta << " at " << facets << " facets (instance " << i << ")\n";
        return 1;
      }
      last = eta;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grasp-region and regrasp planning for constant screw motions"};
  app.require_subcommand(1);
  int rc = 0;

  auto* plan_cmd = app.add_subcommand("plan", "run the full pipeline and emit a regrasp report");
  CloudSourceOpts plan_cloud;
  PipelineParams plan_params;
  std::string plan_path, plan_out, plan_export;
  add_cloud_options(plan_cmd, plan_cloud);
  add_param_options(plan_cmd, plan_params);
  plan_cmd->add_option("--plan", plan_path, "motion plan JSON (poses or skeleton)")->required();
  plan_cmd->add_option("--out", plan_out, "report destination (default stdout)");
  plan_cmd->add_option("--export-ply", plan_export, "stem for per-group colored clouds");
  plan_cmd->callback([&] {
    PointCloud cloud = resolve_cloud(plan_cloud);
    PlanSpec spec = load_plan_spec(plan_path);
    PipelineResult res = run_pipeline(cloud, spec, plan_params);
    emit_json(res.report, plan_out);
    if (!plan_export.empty()) export_group_clouds(res, plan_export);
    for (const ContactPair& grasp : res.grasps) {
      if (grasp.index_a < 0) rc = 4;
    }
  });

  auto* regions_cmd = app.add_subcommand("regions", "compute per-segment grasping regions only");
  CloudSourceOpts regions_cloud;
  PipelineParams regions_params;
  std::string regions_plan, regions_out;
  add_cloud_options(regions_cmd, regions_cloud);
  add_param_options(regions_cmd, regions_params);
  regions_cmd->add_option("--plan", regions_plan, "motion plan JSON (poses or skeleton)")->required();
  regions_cmd->add_option("--out", regions_out, "regions destination (default stdout)");
  regions_cmd->callback([&] {
    PointCloud cloud = resolve_cloud(regions_cloud);
    PlanSpec spec = load_plan_spec(regions_plan);
    PipelineResult res = run_pipeline(cloud, spec, regions_params);
    emit_json(regions_to_json(res, regions_params.eta_th), regions_out);
  });

  auto* score_cmd = app.add_subcommand("score", "score saved regions and partition them");
  std::string score_regions_path, score_out;
  double score_gamma_th = 0.25;
  score_cmd->add_option("--regions", score_regions_path, "regions JSON from the regions subcommand")->required();
  score_cmd->add_option("--gamma-th", score_gamma_th, "minimum group coverage score");
  score_cmd->add_option("--out", score_out, "result destination (default stdout)");
  score_cmd->callback([&] {
    std::ifstream in(score_regions_path);
    if (!in) raise(Errc::parse_error, "cannot open regions file '" + score_regions_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      raise(Errc::parse_error, std::string("regions file: ") + e.what());
    }
    std::vector<GraspRegion> regions = regions_from_json(j);

    nlohmann::json out;
    out["schema_version"] = 1;
    out["gamma_th"] = score_gamma_th;
    bool any_empty = false;
    for (const auto& r : regions) any_empty = any_empty || r.empty();
    if (any_empty) {
      out["score"]["gamma"] = 0.0;
      out["score"]["per_region"] = std::vector<double>(regions.size(), 0.0);
      out["score"]["intersection_size"] = 0;
    } else {
      GroupScore score = compute_score(regions, 0, static_cast<int>(regions.size()) - 1);
      out["score"]["gamma"] = score.gamma;
      out["score"]["per_region"] = score.per_region;
      out["score"]["intersection_size"] = static_cast<int>(score.intersection.size());
    }
    out["partition"] = partition_to_json(greedy_partition(regions, score_gamma_th));
    emit_json(out, score_out);
  });

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic cloud as ASCII PLY");
  CloudSourceOpts synth_opts;
  std::string synth_out;
  add_cloud_options(synth_cmd, synth_opts);
  synth_cmd->add_option("--out", synth_out, "output PLY path")->required();
  synth_cmd->callback([&] {
    if (synth_opts.shape.empty()) raise(Errc::invalid_argument, "synth needs --shape");
    save_ply(resolve_cloud(synth_opts), synth_out);
  });

  auto* verify_cmd = app.add_subcommand("verify", "run randomized property checks");
  unsigned verify_seed = 0;
  int verify_instances = 200;
  verify_cmd->add_option("--seed", verify_seed, "random seed");
  verify_cmd->add_option("--instances", verify_instances, "number of random instances");
  verify_cmd->callback([&] {
    const int metric_instances = verify_instances / 10;
    if (verify_partitions(verify_seed, verify_instances) != 0 ||
        verify_metric(verify_seed + 1, metric_instances) != 0) {
      rc = 1;
      return;
    }
    std::cout << "verified " << verify_instances << " partition instances and "
              << metric_instances << " metric instances\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 5;
  }
  return rc;
}
