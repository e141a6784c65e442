#include "screwgrasp/metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "screwgrasp/errors.hpp"
#include "screwgrasp/lp.hpp"

namespace screwgrasp {

namespace {

// Deterministic tangent frame: seed with the coordinate axis least aligned
// with the normal (lowest index on ties).
void tangent_basis(const Vec3& n, Vec3& t1, Vec3& t2) {
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(n[i]) < std::abs(n[k])) k = i;
  t1 = (Vec3::Unit(k) - n[k] * n).normalized();
  t2 = n.cross(t1);
}

struct ConeContact {
  Vec3 position;
  Eigen::Matrix3Xd edges;
  bool robot = false;
};

void validate_context(const TaskContext& ctx) {
  if (ctx.cone_facets < 4) raise(Errc::invalid_argument, "cone_facets must be >= 4");
  if (!(ctx.force_cap > 0.0)) raise(Errc::invalid_argument, "force_cap must be positive");
  if (!is_valid_screw(ctx.task_screw, 1e-7))
    raise(Errc::invalid_argument, "task screw is not a valid unit screw");
  if (!(ctx.mu_robot >= 0.0)) raise(Errc::invalid_argument, "mu_robot must be >= 0");
  for (const EnvironmentContact& c : ctx.environment_contacts) {
    if (std::abs(c.normal.norm() - 1.0) > 1e-9)
      raise(Errc::invalid_argument, "environment contact normal must be unit length");
    if (!(c.mu >= 0.0)) raise(Errc::invalid_argument, "environment mu must be >= 0");
  }
}

// Shortest distance between an infinite line (unit direction l through a0)
// and the segment [p0, p1].
double line_segment_distance(const Vec3& a0, const Vec3& l, const Vec3& p0,
                             const Vec3& p1) {
  Vec3 u = p1 - p0;
  Vec3 w = a0 - p0;
  double b = l.dot(u), c = u.squaredNorm();
  double d = l.dot(w), e = u.dot(w);
  double denom = c - b * b;
  double s;
  if (denom <= 1e-12 * c || c == 0.0) {
    s = 0.0;  // parallel (or degenerate segment): any s gives the same gap
  } else {
    s = std::clamp((e - b * d) / denom, 0.0, 1.0);
  }
  double t = s * b - d;
  return (w + t * l - s * u).norm();
}

}  // namespace

const char* primitive_name(Primitive p) {
  switch (p) {
    case Primitive::kPivot: return "PIVOT";
    case Primitive::kSlide: return "SLIDE";
    case Primitive::kPickup: return "PICKUP";
    case Primitive::kFree: return "FREE";
  }
  return "?";
}

Vec6 unit_task_wrench(const UnitScrew& s) {
  Vec6 w = Vec6::Zero();
  if (s.pure_translation()) {
    w.head<3>() = s.direction;
  } else if (s.pitch == 0.0) {
    w.tail<3>() = s.direction;
  } else {
    double scale = 1.0 / std::sqrt(1.0 + s.pitch * s.pitch);
    w.head<3>() = scale * s.direction;
    w.tail<3>() = (scale * s.pitch) * s.direction;
  }
  return w;
}

Eigen::Matrix3Xd friction_cone_edges(const Vec3& normal, double mu, int facets,
                                     const Vec3& tangent_seed) {
  if (facets < 4) raise(Errc::invalid_argument, "cone_facets must be >= 4");
  Vec3 t1, t2;
  Vec3 projected = tangent_seed - tangent_seed.dot(normal) * normal;
  if (projected.norm() >= 1e-7 * std::max(tangent_seed.norm(), 1.0)) {
    t1 = projected.normalized();
    t2 = normal.cross(t1);
  } else {
    tangent_basis(normal, t1, t2);
  }
  Eigen::Matrix3Xd edges(3, facets);
  for (int j = 0; j < facets; ++j) {
    double phi = 2.0 * M_PI * j / facets;
    edges.col(j) = normal + mu * (std::cos(phi) * t1 + std::sin(phi) * t2);
  }
  return edges;
}

double eta_for_pair(const ContactPair& pair, const PointCloud& cloud,
                    const TaskContext& ctx) {
  validate_context(ctx);
  if (pair.index_a < 0 || pair.index_b < 0 || pair.index_a >= cloud.size() ||
      pair.index_b >= cloud.size())
    raise(Errc::invalid_argument, "contact pair indexes outside the cloud");
  if (!cloud.has_normals()) raise(Errc::invalid_argument, "cloud has no normals");

  const int facets = ctx.cone_facets;
  const Vec3 r = ctx.task_screw.pure_translation() ? ctx.task_reference
                                                   : ctx.task_screw.axis_point();
  const Vec3 pair_axis =
      cloud.points[pair.index_b] - cloud.points[pair.index_a];

  // Seed each cone's tangent frame from quantities that co-rotate with the
  // problem (task direction, then the arm from the axis, then the pair
  // axis), so the linearized metric does not depend on the working frame.
  auto cone = [&](const Vec3& position, const Vec3& normal, double mu) {
    for (const Vec3& seed :
         {ctx.task_screw.direction, Vec3(position - r), pair_axis}) {
      Vec3 tangential = seed - seed.dot(normal) * normal;
      if (tangential.norm() >= 1e-7 * std::max(seed.norm(), 1.0))
        return friction_cone_edges(normal, mu, facets, seed);
    }
    return friction_cone_edges(normal, mu, facets);
  };

  std::vector<ConeContact> contacts;
  for (int idx : {pair.index_a, pair.index_b}) {
    Vec3 inward = -cloud.normals[idx].normalized();
    contacts.push_back({cloud.points[idx], cone(cloud.points[idx], inward, ctx.mu_robot), true});
  }
  for (const EnvironmentContact& e : ctx.environment_contacts)
    contacts.push_back({e.position, cone(e.position, e.normal, e.mu), false});
  Vec6 what = unit_task_wrench(ctx.task_screw);

  // Gravity is given about the frame origin; transport the moment to r.
  Vec6 gravity = ctx.gravity_wrench;
  gravity.tail<3>() -= r.cross(Vec3(gravity.head<3>()));

  // Variables: one nonnegative weight per cone edge, then eta.
  const int num_lambda = static_cast<int>(contacts.size()) * facets;
  LinearProgram lp = LinearProgram::with_vars(num_lambda + 1);
  lp.objective[num_lambda] = 1.0;

  lp.eq_matrix = Eigen::MatrixXd::Zero(6, num_lambda + 1);
  int col = 0;
  for (const ConeContact& c : contacts) {
    Vec3 arm = c.position - r;
    for (int j = 0; j < facets; ++j, ++col) {
      lp.eq_matrix.block<3, 1>(0, col) = c.edges.col(j);
      lp.eq_matrix.block<3, 1>(3, col) = arm.cross(Vec3(c.edges.col(j)));
    }
  }
  lp.eq_matrix.col(num_lambda) = -what;
  lp.eq_rhs = -gravity;

  // Edge weights equal normal force contributions, so the robot force cap is
  // a plain sum over the robot columns.
  lp.ub_matrix = Eigen::MatrixXd::Zero(1, num_lambda + 1);
  col = 0;
  for (const ConeContact& c : contacts) {
    for (int j = 0; j < facets; ++j, ++col)
      if (c.robot) lp.ub_matrix(0, col) = 1.0;
  }
  lp.ub_rhs = Eigen::VectorXd::Constant(1, ctx.force_cap);

  LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::unbounded)
    raise(Errc::model_unbounded, "wrench maximization is unbounded; the force cap is not binding");
  if (sol.status == LpStatus::infeasible) return 0.0;
  return sol.objective_value;
}

std::vector<GraspRegion> compute_metric(const std::vector<PointCloud>& clouds,
                                        const std::vector<Pose>& plan,
                                        const std::vector<TaskContext>& contexts,
                                        double eta_th,
                                        const PairParams& pair_params) {
  if (plan.size() < 2) raise(Errc::invalid_argument, "plan needs at least two poses");
  if (clouds.size() != plan.size())
    raise(Errc::dimension_mismatch, "one cloud per plan pose required");
  if (contexts.size() + 1 != plan.size())
    raise(Errc::dimension_mismatch, "one context per motion segment required");
  if (!(eta_th > 0.0 && eta_th <= 1.0))
    raise(Errc::invalid_argument, "eta threshold must lie in (0, 1]");

  // Antipodal pairing is rigid-invariant as an index set, so one pass over
  // the canonical cloud serves every segment.
  std::vector<ContactPair> pairs = antipodal_pairs(clouds[0], pair_params);

  const int n = clouds[0].size();
  std::vector<GraspRegion> regions;
  regions.reserve(contexts.size());
  for (size_t seg = 0; seg < contexts.size(); ++seg) {
    GraspRegion region;
    region.segment_index = static_cast<int>(seg);
    region.threshold = eta_th;
    region.eta.assign(n, 0.0);

    std::vector<double> raw(n, 0.0);
    for (const ContactPair& pair : pairs) {
      double eta = eta_for_pair(pair, clouds[seg], contexts[seg]);
      raw[pair.index_a] = std::max(raw[pair.index_a], eta);
      raw[pair.index_b] = std::max(raw[pair.index_b], eta);
    }

    double max_raw = *std::max_element(raw.begin(), raw.end());
    region.max_raw_eta = max_raw;
    if (max_raw > 0.0) {
      for (int j = 0; j < n; ++j) region.eta[j] = raw[j] / max_raw;
      for (int j = 0; j < n; ++j)
        if (region.eta[j] >= eta_th) region.member_indices.push_back(j);
    }
    regions.push_back(std::move(region));
  }
  return regions;
}

TaskContext build_task_context(const ScrewSegment& segment,
                               const BoundingBox& bbox, Primitive primitive,
                               const TaskParams& params) {
  TaskContext ctx;
  ctx.task_screw = segment_axis(segment);
  ctx.task_reference = bbox.center;
  ctx.mu_robot = params.mu_robot;
  ctx.cone_facets = params.cone_facets;
  ctx.force_cap = params.force_cap;

  Vec3 weight(0.0, 0.0, -params.gravity * params.mass);
  ctx.gravity_wrench.head<3>() = weight;
  ctx.gravity_wrench.tail<3>() = bbox.center.cross(weight);

  if (primitive == Primitive::kPivot) {
    if (ctx.task_screw.pure_translation())
      raise(Errc::invalid_argument, "pivot segment must rotate");
    Vec3 a0 = ctx.task_screw.axis_point();
    Vec3 l = ctx.task_screw.direction;

    auto corners = bbox.corners();
    double best_edge = std::numeric_limits<double>::infinity();
    for (auto [i, j] : BoundingBox::edge_pairs())
      best_edge = std::min(best_edge,
                           line_segment_distance(a0, l, corners[i], corners[j]));
    if (best_edge > params.pivot_axis_tolerance)
      raise(Errc::axis_not_on_body, "pivot axis does not touch any box edge");

    // The two box corners nearest the axis are the pivot edge endpoints.
    std::array<double, 8> dist;
    for (int i = 0; i < 8; ++i) {
      Vec3 w = corners[i] - a0;
      dist[i] = (w - w.dot(l) * l).norm();
    }
    std::array<int, 8> order{0, 1, 2, 3, 4, 5, 6, 7};
    std::sort(order.begin(), order.end(), [&](int i, int j) {
      return dist[i] != dist[j] ? dist[i] < dist[j] : i < j;
    });
    int first = std::min(order[0], order[1]);
    int second = std::max(order[0], order[1]);
    ctx.environment_contacts.push_back({corners[first], Vec3::UnitZ(), params.mu_env});
    ctx.environment_contacts.push_back({corners[second], Vec3::UnitZ(), params.mu_env});
  } else if (primitive == Primitive::kSlide) {
    // Bottom face: the one whose outward normal points most downward.
    int k = 0;
    double best = 0.0;
    double sign = 1.0;
    for (int i = 0; i < 3; ++i) {
      double d = bbox.orientation.col(i).z();
      if (std::abs(d) > std::abs(best)) {
        best = d;
        k = i;
        sign = d > 0.0 ? -1.0 : 1.0;
      }
    }
    Vec3 bottom = bbox.center + sign * bbox.half_extents[k] * bbox.orientation.col(k);
    ctx.environment_contacts.push_back({bottom, Vec3::UnitZ(), params.mu_env});
  }
  // kPickup and kFree run free of environment support.
  return ctx;
}

}  // namespace screwgrasp
