#include "gflow/sphere.hpp"

#include <cmath>

#include "gflow/prox_solver.hpp"

namespace gflow {
namespace {

Vec3 as_vec3(const Point& p) {
  if (p.size() != 3) {
    throw Error(ErrorCode::kDimensionMismatch,
                "sphere points have 3 coordinates, got " +
                    std::to_string(p.size()));
  }
  return Vec3(p[0], p[1], p[2]);
}

Point as_point(const Vec3& v) {
  Point p(3);
  p << v[0], v[1], v[2];
  return p;
}

}  // namespace

double sphere_distance(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double sphere_energy(const Vec3& u) {
  double e = 0.0;
  for (int i = 0; i < 3; ++i) {
    e += (u[i] - 0.5) * (u[i] + 0.5) * (u[i] + 0.5);
  }
  return e;
}

Vec3 sphere_ambient_grad(const Vec3& u) {
  return (3.0 * u.array().square() + u.array() - 0.25).matrix();
}

Vec3 tangent_projection(const Vec3& u, const Vec3& v) {
  return v - u.dot(v) * u;
}

Vec3 sphere_grad(const Vec3& u) {
  return tangent_projection(u, sphere_ambient_grad(u));
}

Vec3 sphere_exp(const Vec3& u, const Vec3& xi) {
  const double r = xi.norm();
  if (r == 0.0) return u;
  const Vec3 w = std::cos(r) * u + (std::sin(r) / r) * xi;
  return w.normalized();
}

Vec3 sphere_log(const Vec3& u, const Vec3& w) {
  const double c = u.dot(w);
  if (c <= -1.0 + 1e-12) {
    throw Error(ErrorCode::kAntipodalPoint,
                "logarithm requested at the cut locus");
  }
  const Vec3 perp = w - c * u;
  const double s = perp.norm();
  if (s == 0.0) return Vec3::Zero();
  return (std::atan2(s, c) / s) * perp;
}

Vec3 sphere_initial() { return Vec3(1.0, 2.0, 5.0) / std::sqrt(30.0); }

double SphereModel::distance(const Point& a, const Point& b) const {
  return sphere_distance(as_vec3(a), as_vec3(b));
}

double SphereModel::energy(const Point& w) const {
  return sphere_energy(as_vec3(w));
}

bool SphereModel::admissible(const Point& w) const {
  return w.size() == 3 && w.allFinite() && std::abs(w.norm() - 1.0) <= 1e-12;
}

SemiConvexity SphereModel::semi_convexity() const {
  return SemiConvexity::from_lambda(kLambda);
}

Point SphereModel::base_point() const { return as_point(sphere_initial()); }

Point SphereModel::initial_datum() const { return as_point(sphere_initial()); }

Point SphereModel::sample_admissible(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < 1e-3);
  return as_point(v.normalized());
}

std::optional<Point> SphereModel::penalized_gradient(
    const PenalizedProblem& problem, const Point& w) const {
  const Vec3 x = as_vec3(w);
  Vec3 g = sphere_grad(x);
  for (const Anchor& a : problem.anchors()) {
    g -= 2.0 * a.coefficient * sphere_log(x, as_vec3(*a.point));
  }
  return as_point(g);
}

InnerSolution SphereModel::minimize(const PenalizedProblem& problem,
                                    double tolerance) const {
  const Vec3 v = as_vec3(problem.anchor_v());
  const std::vector<Anchor> anchors = problem.anchors();
  std::vector<Vec3> anchor_points;
  for (const Anchor& a : anchors) anchor_points.push_back(as_vec3(*a.point));

  // Chart coordinates xi live in the tangent plane at v, |xi| <= kChartRadius.
  const auto project = [v](const Vector& x) -> Vector {
    Vec3 xi = tangent_projection(v, Vec3(x[0], x[1], x[2]));
    const double r = xi.norm();
    if (r > kChartRadius) xi *= kChartRadius / r;
    return as_point(xi);
  };
  const auto chart = [v](const Vector& x) {
    return sphere_exp(v, Vec3(x[0], x[1], x[2]));
  };

  SolveSpec spec;
  spec.objective = [&](const Vector& x) {
    const Vec3 w = chart(x);
    double value = sphere_energy(w);
    for (std::size_t j = 0; j < anchors.size(); ++j) {
      const double d = sphere_distance(anchor_points[j], w);
      value += anchors[j].coefficient * d * d;
    }
    return value;
  };
  spec.gradient = [&](const Vector& x) -> Vector {
    const Vec3 xi(x[0], x[1], x[2]);
    const Vec3 w = sphere_exp(v, xi);
    Vec3 g = sphere_grad(w);
    for (std::size_t j = 0; j < anchors.size(); ++j) {
      g -= 2.0 * anchors[j].coefficient * sphere_log(w, anchor_points[j]);
    }
    // Pull back through the differential of exp_v at xi.
    const double r = xi.norm();
    if (r == 0.0) return as_point(tangent_projection(v, g));
    const Vec3 e = xi / r;
    const double ge = e.dot(g);
    const double gv = v.dot(g);
    const Vec3 radial = (std::cos(r) * ge - std::sin(r) * gv) * e;
    const Vec3 transverse = (std::sin(r) / r) * (g - gv * v - ge * e);
    return as_point(radial + transverse);
  };
  spec.project = project;
  spec.initial_guess = Vector::Zero(3);
  spec.tolerance = tolerance;
  const double mu = problem.convexity_modulus(kLambda);
  if (mu > 0.0) spec.strong_convexity = mu;

  const SolveResult r = gflow::minimize(spec);
  InnerSolution out;
  out.point = as_point(chart(r.point));
  out.residual = r.residual;
  out.tolerance = tolerance;
  out.iterations = r.iterations;
  out.converged = r.converged();
  return out;
}

}  // namespace gflow
