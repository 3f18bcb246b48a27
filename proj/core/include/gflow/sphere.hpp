#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "gflow/flow.hpp"

namespace gflow {

using Vec3 = Eigen::Vector3d;

// Great-circle distance in [0, pi]. Computed as atan2(|a x b|, <a, b>), which
// equals arccos(<a, b>) on unit vectors but keeps full relative accuracy for
// nearby points.
double sphere_distance(const Vec3& a, const Vec3& b);

// Sum_i (u_i - 1/2)(u_i + 1/2)^2, restricted to the sphere.
double sphere_energy(const Vec3& u);

// Euclidean gradient of the ambient cubic: 3 u_i^2 + u_i - 1/4.
Vec3 sphere_ambient_grad(const Vec3& u);

// Riemannian gradient: tangential projection of the ambient gradient.
Vec3 sphere_grad(const Vec3& u);

// Tangential projection v - <u, v> u.
Vec3 tangent_projection(const Vec3& u, const Vec3& v);

Vec3 sphere_exp(const Vec3& u, const Vec3& xi);

// Inverse of sphere_exp. Throws Error(kAntipodalPoint) if <u, w> <= -1 + 1e-12.
Vec3 sphere_log(const Vec3& u, const Vec3& w);

// (1, 2, 5) / sqrt(30).
Vec3 sphere_initial();

// Gradient flow of sphere_energy on the unit 2-sphere with the great-circle
// distance. Points are unit 3-vectors. Inner problems are solved in the
// tangent chart at the anchor v through the exponential map, with the chart
// radius bounded by pi - 0.1.
class SphereModel final : public FlowModel {
 public:
  // The effective semi-convexity modulus on the sphere is not computed; -10
  // bounds the Riemannian Hessian of the energy and only scales slacks.
  static constexpr double kLambda = -10.0;
  static constexpr double kChartRadius = 3.14159265358979323846 - 0.1;

  std::string name() const override { return "sphere"; }
  double distance(const Point& a, const Point& b) const override;
  double energy(const Point& w) const override;
  bool admissible(const Point& w) const override;
  SemiConvexity semi_convexity() const override;
  Point base_point() const override;
  Point initial_datum() const override;
  Point sample_admissible(std::mt19937_64& rng) const override;
  InnerSolution minimize(const PenalizedProblem& problem,
                         double tolerance) const override;
  // Riemannian gradient: -2 sum_j c_j log_w(a_j) + sphere_grad(w).
  std::optional<Point> penalized_gradient(const PenalizedProblem& problem,
                                          const Point& w) const override;
};

}  // namespace gflow
