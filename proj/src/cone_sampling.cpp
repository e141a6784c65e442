#include "screwgrasp/cone_sampling.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "screwgrasp/errors.hpp"

namespace screwgrasp {

Vec3 project_to_friction_cone(const Vec3& force, const Vec3& normal, double mu) {
  double n = force.dot(normal);
  Vec3 tangential = force - n * normal;
  double t = tangential.norm();
  if (t <= mu * n) return force;                    // inside
  if (mu * t <= -n) return Vec3::Zero();            // inside the polar cone
  double n_new = (n + mu * t) / (1.0 + mu * mu);
  if (t <= 0.0) return n_new * normal;
  return n_new * normal + (mu * n_new / t) * tangential;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Projector {
  const OracleProblem& prob;
  MatrixXd wrench_map;  // 6 x 3C, stacked force/moment maps about reference
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> decomp;
  VectorXd cap_functional;  // only for kTotalNormal

  explicit Projector(const OracleProblem& p) : prob(p) {
    const int c = static_cast<int>(p.contacts.size());
    wrench_map = MatrixXd::Zero(6, 3 * c);
    cap_functional = VectorXd::Zero(3 * c);
    for (int i = 0; i < c; ++i) {
      const OracleContact& ct = p.contacts[i];
      wrench_map.block<3, 3>(0, 3 * i).setIdentity();
      Vec3 arm = ct.position - p.reference;
      Mat3 skew;
      skew << 0, -arm.z(), arm.y(), arm.z(), 0, -arm.x(), -arm.y(), arm.x(), 0;
      wrench_map.block<3, 3>(3, 3 * i) = skew;
      if (ct.robot) cap_functional.segment<3>(3 * i) = ct.normal;
    }
    decomp.compute(wrench_map);
  }

  // Least-squares step onto the affine set  wrench_map x = rhs.
  void project_affine(VectorXd& x, const Vec6& rhs) const {
    x -= decomp.solve(wrench_map * x - rhs);
  }

  void project_cones(VectorXd& x) const {
    for (size_t i = 0; i < prob.contacts.size(); ++i) {
      const OracleContact& ct = prob.contacts[i];
      x.segment<3>(3 * i) =
          project_to_friction_cone(x.segment<3>(3 * i), ct.normal, ct.mu);
    }
  }

  void project_cap(VectorXd& x) const {
    if (prob.cap_kind == CapKind::kTotalNormal) {
      double v = cap_functional.dot(x);
      if (v > prob.force_cap)
        x -= ((v - prob.force_cap) / cap_functional.squaredNorm()) * cap_functional;
    } else {
      for (size_t i = 0; i < prob.contacts.size(); ++i) {
        if (!prob.contacts[i].robot) continue;
        double n = x.segment<3>(3 * i).norm();
        if (n > prob.force_cap) x.segment<3>(3 * i) *= prob.force_cap / n;
      }
    }
  }

  double violation(const VectorXd& x, const Vec6& rhs) const {
    double v = (wrench_map * x - rhs).norm();
    for (size_t i = 0; i < prob.contacts.size(); ++i) {
      Vec3 f = x.segment<3>(3 * i);
      v += (f - project_to_friction_cone(f, prob.contacts[i].normal,
                                         prob.contacts[i].mu))
               .norm();
    }
    if (prob.cap_kind == CapKind::kTotalNormal) {
      v += std::max(0.0, cap_functional.dot(x) - prob.force_cap);
    } else {
      for (size_t i = 0; i < prob.contacts.size(); ++i)
        if (prob.contacts[i].robot)
          v += std::max(0.0, x.segment<3>(3 * i).norm() - prob.force_cap);
    }
    return v;
  }

  bool feasible(double eta, const OracleOptions& opt, std::mt19937_64& rng) const {
    Vec6 rhs = eta * prob.task_wrench - prob.external_wrench;
    double scale = 1.0 + rhs.norm() + prob.force_cap;
    std::normal_distribution<double> gauss(0.0, prob.force_cap);

    for (int attempt = 0; attempt < opt.restarts; ++attempt) {
      VectorXd x(wrench_map.cols());
      if (attempt == 0) {
        x.setZero();
        project_affine(x, rhs);  // minimum-norm solution of the equality
      } else {
        for (int j = 0; j < x.size(); ++j) x[j] = gauss(rng);
      }
      for (int sweep = 0; sweep < opt.projection_sweeps; ++sweep) {
        project_cones(x);
        project_cap(x);
        project_affine(x, rhs);
        if (sweep % 16 == 15 &&
            violation(x, rhs) <= opt.feasibility_tol * scale)
          return true;
      }
      if (violation(x, rhs) <= opt.feasibility_tol * scale) return true;
    }
    return false;
  }
};

}  // namespace

double oracle_eta(const OracleProblem& problem, const OracleOptions& options) {
  if (problem.contacts.empty()) raise(Errc::invalid_argument, "no contacts");
  if (!(problem.force_cap > 0.0))
    raise(Errc::invalid_argument, "force_cap must be positive");
  for (const OracleContact& c : problem.contacts) {
    if (std::abs(c.normal.norm() - 1.0) > 1e-9)
      raise(Errc::invalid_argument, "contact normal must be unit length");
    if (!(c.mu >= 0.0)) raise(Errc::invalid_argument, "mu must be >= 0");
  }

  Projector proj(problem);
  std::mt19937_64 rng(options.seed);

  if (!proj.feasible(0.0, options, rng)) return 0.0;

  // Grow until infeasible; the cap guarantees an upper bound exists.
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (proj.feasible(hi, options, rng)) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 60) raise(Errc::model_unbounded, "oracle found no magnitude ceiling");
  }
  while (hi - lo > options.bisection_rel_tol * (1.0 + hi)) {
    double mid = 0.5 * (lo + hi);
    if (proj.feasible(mid, options, rng))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace screwgrasp
