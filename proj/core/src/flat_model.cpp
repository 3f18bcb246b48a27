#include "gflow/flat_model.hpp"

#include <cmath>
#include <limits>

namespace gflow {

double FlatModel::distance(const Point& a, const Point& b) const {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "points of size " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  return std::sqrt(weight_ * (a - b).squaredNorm());
}

double FlatModel::piece_energy(int, const Point& w) const { return energy(w); }

Point FlatModel::piece_gradient(int, const Point& w) const {
  return gradient(w);
}

std::optional<Point> FlatModel::penalized_gradient(
    const PenalizedProblem& problem, const Point& w) const {
  Point g = gradient(w);
  for (const Anchor& a : problem.anchors()) {
    g += 2.0 * a.coefficient * (w - *a.point);
  }
  return g;
}

InnerSolution FlatModel::minimize(const PenalizedProblem& problem,
                                  double tolerance) const {
  const std::vector<Anchor> anchors = problem.anchors();
  const double inv_weight = 1.0 / weight_;
  const double mu = problem.convexity_modulus(semi_convexity().lambda());

  InnerSolution best;
  double best_value = std::numeric_limits<double>::infinity();
  best.tolerance = tolerance;

  for (int piece = 0; piece < piece_count(); ++piece) {
    // Objective divided by the weight: sum_j c_j |w - a_j|^2 + E(w) / weight.
    SolveSpec spec;
    spec.objective = [&, piece](const Vector& w) {
      double value = piece_energy(piece, w) * inv_weight;
      for (const Anchor& a : anchors) {
        value += a.coefficient * (w - *a.point).squaredNorm();
      }
      return value;
    };
    spec.gradient = [&, piece](const Vector& w) {
      Vector g = piece_gradient(piece, w);
      for (const Anchor& a : anchors) {
        g += 2.0 * a.coefficient * (w - *a.point);
      }
      return g;
    };
    spec.project = [this, piece](const Vector& x) { return project(piece, x); };
    spec.initial_guess = problem.anchor_v();
    spec.tolerance = tolerance;
    if (mu > 0.0) spec.strong_convexity = mu;
    spec.residual_scale = std::sqrt(weight_);

    const SolveResult r = gflow::minimize(spec);
    if (r.objective < best_value ||
        (r.objective == best_value && r.residual < best.residual)) {
      best_value = r.objective;
      best.point = r.point;
      best.residual = r.residual;
      best.iterations = r.iterations;
      best.converged = r.converged();
    }
  }
  return best;
}

}  // namespace gflow
