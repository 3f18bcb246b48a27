#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gflow/diagnostics.hpp"

namespace gflow {

// Errors below this are indistinguishable from inner-solve and rounding noise;
// a fit through them is reported as invalid.
inline constexpr double kErrorFloor = 1e-13;

struct StudySpec {
  std::vector<Scheme> schemes{Scheme::kMinimizingMovement, Scheme::kBdf2};
  std::vector<double> taus;  // descending, tau_coarse / tau and tau / tau_ref integers
  double tau_ref = 0.0;
  double tau_coarse = 0.0;
  double horizon = 0.0;
  // Closed-form solution used instead of a BDF2 run at tau_ref when set.
  std::function<Point(double)> exact;
  // Optional initial datum; the model's initial_datum() otherwise.
  std::optional<Point> initial;
  int jobs = 1;
};

struct StudyRun {
  Scheme scheme = Scheme::kBdf2;
  double tau = 0.0;
  bool is_reference = false;
  double mean_error = 0.0;
  Trajectory trajectory;
};

struct StudyResult {
  std::vector<ConvergenceReport> reports;  // one per scheme, in spec order
  std::vector<StudyRun> runs;              // reference first when present
};

// Runs every (scheme, tau) trajectory and the BDF2 reference at tau_ref, up to
// spec.jobs at a time, and measures the mean error of each against the
// reference on the tau_coarse grid. The first failing job is rethrown with its
// scheme and step size in the message.
StudyResult convergence_study(const FlowModel& model, const StudySpec& spec);

// The inequality checks that apply to a trajectory of the given scheme:
// EnergyDim, Telescoped, EVI and ClassicalBounds for BDF2; Monotone,
// Telescoped and ClassicalBounds for the implicit Euler scheme.
std::vector<InequalityReport> inequality_suite(const FlowModel& model,
                                               const Trajectory& trajectory,
                                               const std::vector<Point>& witnesses,
                                               double slack);

}  // namespace gflow
