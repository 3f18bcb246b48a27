#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace gflow {

using Vector = Eigen::VectorXd;

// Strongly convex minimization over a closed convex set, given by its
// Euclidean projection. Used for every inner solve of the stepping schemes.
struct SolveSpec {
  std::function<double(const Vector&)> objective;
  std::function<Vector(const Vector&)> gradient;
  // Identity when empty. Must be idempotent.
  std::function<Vector(const Vector&)> project;
  Vector initial_guess;
  // Bound on the projected-gradient norm at the returned point.
  double tolerance = 1e-10;
  int max_iterations = 100000;
  // Lower bound on the modulus of strong convexity; sizes the first step.
  std::optional<double> strong_convexity;
  // The residual is reported as residual_scale * ||x - P(x - g(x))||_2. Set to
  // sqrt(w) when the coordinates carry a uniform quadrature weight w so that
  // the residual is measured in the norm of the underlying space.
  double residual_scale = 1.0;
  // Keep the objective value of every accepted iterate in SolveResult::trace.
  bool record_trace = false;
};

enum class SolveStatus { kConverged, kMaxIterations, kStagnated };

struct SolveResult {
  Vector point;
  double objective = 0.0;
  double residual = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::kConverged;
  std::vector<double> trace;

  bool converged() const { return status == SolveStatus::kConverged; }
};

// Spectral projected gradient with a monotone Armijo backtracking search.
// Steps are initialized with the Barzilai-Borwein length and halved until the
// objective decreases sufficiently. When the predicted decrease drops below
// 1e-10 * (1 + |f|), the resolution at which the objective can be evaluated,
// the sufficient-decrease test falls back to its derivative form (approximate
// Armijo), so the gradient can still be driven below tolerance. Accepted
// objective values are non-increasing up to that resolution.
//
// On kMaxIterations or kStagnated the point with the smallest residual seen is
// returned. Throws Error(kNonFiniteObjective) when the objective is NaN or
// infinite at a feasible point.
SolveResult minimize(const SolveSpec& spec);

// Componentwise clamp to [lo, hi]. Requires lo <= hi.
Vector project_box(const Vector& x, double lo, double hi);

}  // namespace gflow
