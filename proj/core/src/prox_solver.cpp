#include "gflow/prox_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gflow/error.hpp"

namespace gflow {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
constexpr double kMinStep = 1e-30;
constexpr double kMaxStep = 1e30;
// Relative size of objective differences treated as evaluation noise.
constexpr double kNoiseLevel = 1e-10;

double checked_objective(const SolveSpec& spec, const Vector& x) {
  const double f = spec.objective(x);
  if (!std::isfinite(f)) {
    throw Error(ErrorCode::kNonFiniteObjective,
                "objective evaluated to " + std::to_string(f) +
                    " at a feasible point");
  }
  return f;
}

}  // namespace

Vector project_box(const Vector& x, double lo, double hi) {
  if (!(lo <= hi)) {
    throw Error(ErrorCode::kInvalidArgument, "project_box requires lo <= hi");
  }
  return x.cwiseMax(lo).cwiseMin(hi);
}

SolveResult minimize(const SolveSpec& spec) {
  if (!(spec.tolerance > 0.0) || spec.max_iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "minimize requires tolerance > 0 and max_iterations >= 1");
  }
  const auto project = [&spec](const Vector& v) -> Vector {
    return spec.project ? spec.project(v) : v;
  };
  const auto residual_of = [&](const Vector& x, const Vector& g) {
    return spec.residual_scale * (x - project(x - g)).norm();
  };

  Vector x = project(spec.initial_guess);
  double f = checked_objective(spec, x);
  Vector g = spec.gradient(x);

  SolveResult best;
  best.point = x;
  best.objective = f;
  best.residual = residual_of(x, g);
  if (spec.record_trace) best.trace.push_back(f);

  double step = 1.0;
  if (spec.strong_convexity && *spec.strong_convexity > 0.0) {
    step = 1.0 / *spec.strong_convexity;
  } else if (const double gmax = g.lpNorm<Eigen::Infinity>(); gmax > 1.0) {
    step = 1.0 / gmax;
  }

  for (int it = 0; it < spec.max_iterations; ++it) {
    const double residual = residual_of(x, g);
    if (residual < best.residual || it == 0) {
      best.point = x;
      best.objective = f;
      best.residual = residual;
    }
    best.iterations = it;
    if (residual <= spec.tolerance) {
      best.point = x;
      best.objective = f;
      best.residual = residual;
      best.status = SolveStatus::kConverged;
      return best;
    }

    Vector direction = project(x - step * g) - x;
    double slope = g.dot(direction);
    if (!(slope < 0.0)) {
      // The scaled step is too short to register; retry with a unit step.
      direction = project(x - g) - x;
      slope = g.dot(direction);
      if (!(slope < 0.0)) {
        best.status = SolveStatus::kStagnated;
        return best;
      }
    }

    const double noise = kNoiseLevel * (1.0 + std::abs(f));
    double alpha = 1.0;
    bool accepted = false;
    Vector trial;
    Vector trial_grad;
    double trial_f = f;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      trial = x + alpha * direction;
      trial_f = checked_objective(spec, trial);
      if (trial_f <= f + kArmijo * alpha * slope) {
        trial_grad = spec.gradient(trial);
        accepted = true;
        break;
      }
      if (alpha * -slope <= noise && trial_f <= f + noise) {
        // Predicted decrease is below the evaluation noise of the objective;
        // use the derivative form of the sufficient-decrease test.
        trial_grad = spec.gradient(trial);
        if (trial_grad.dot(direction) <= (1.0 - 2.0 * kArmijo) * -slope) {
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      best.status = SolveStatus::kStagnated;
      return best;
    }

    const Vector s = trial - x;
    const Vector y = trial_grad - g;
    const double sy = s.dot(y);
    step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, kMinStep, kMaxStep)
                    : std::min(step * 2.0, kMaxStep);

    x = std::move(trial);
    f = trial_f;
    g = std::move(trial_grad);
    if (spec.record_trace) best.trace.push_back(f);
  }

  const double residual = residual_of(x, g);
  if (residual < best.residual) {
    best.point = x;
    best.objective = f;
    best.residual = residual;
  }
  best.iterations = spec.max_iterations;
  best.status = residual <= spec.tolerance ? SolveStatus::kConverged
                                           : SolveStatus::kMaxIterations;
  return best;
}

}  // namespace gflow
