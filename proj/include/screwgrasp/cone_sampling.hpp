#pragma once

#include <vector>

#include "screwgrasp/pose.hpp"

namespace screwgrasp {

// Reference solver for the wrench maximization, independent of the simplex
// path: it works on the exact quadratic friction cones and decides
// feasibility of a candidate magnitude by alternating projections, then
// bisects on the magnitude. Used by tests and the self-check command to
// validate the linearized metric.

struct OracleContact {
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();  // unit, into the object
  double mu = 0.0;
  bool robot = false;  // robot contacts share the force cap
};

// Which quantity the force cap limits.
enum class CapKind {
  kTotalNormal,  // sum of robot contact normal force components
  kMagnitude,    // Euclidean norm of each robot contact force
};

struct OracleProblem {
  std::vector<OracleContact> contacts;
  Vec6 task_wrench = Vec6::Zero();      // unit wrench the task requests
  Vec6 external_wrench = Vec6::Zero();  // gravity etc., about `reference`
  Vec3 reference = Vec3::Zero();        // moment reference point
  double force_cap = 1.0;
  CapKind cap_kind = CapKind::kTotalNormal;
};

struct OracleOptions {
  int restarts = 6;          // random starts per feasibility query
  int projection_sweeps = 4000;
  double feasibility_tol = 1e-7;
  double bisection_rel_tol = 1e-4;
  unsigned seed = 0;
};

// Largest eta such that contact forces inside their exact friction cones
// can satisfy  sum wrench(f_c) + external = eta * task_wrench  under the
// cap. Returns 0 when even eta = 0 has no solution.
double oracle_eta(const OracleProblem& problem, const OracleOptions& options = {});

// Exact Euclidean projection onto the friction cone around `normal` (unit,
// force may only push). Exposed for direct testing.
Vec3 project_to_friction_cone(const Vec3& force, const Vec3& normal, double mu);

}  // namespace screwgrasp
