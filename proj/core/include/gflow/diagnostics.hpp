#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gflow/flow.hpp"

namespace gflow {

// Result of checking one inequality along a trajectory. residuals[i] belongs
// to step index steps[i]; an entry passes when residual <= slack.
struct InequalityReport {
  std::string name;
  std::vector<std::size_t> steps;
  std::vector<double> residuals;
  double slack = 0.0;

  bool pass() const;
  // Largest residual and its step index; (0, -inf) when empty.
  std::pair<std::size_t, double> worst() const;
};

// Default slack 10 * eps * (1 + max_k |E(u^k)|) with the inner tolerance
// eps = 1e-10 * (1 + max_k |E(u^k)|).
double default_slack(const FlowModel& model, const Trajectory& trajectory);

// E(u^k) + d^2(u^{k-1}, u^k) / (2 tau) - E(u^{k-1}) - d^2(u^{k-2}, u^{k-1}) / (4 tau)
// for every k >= 1, with u^{-1} taken from Trajectory::history(). Requires a
// BDF2 trajectory.
InequalityReport check_energy_dissipation(const FlowModel& model,
                                          const Trajectory& trajectory,
                                          double slack);

// E(u^k) - E(u^{k-1}) for every k >= 1.
InequalityReport check_monotone_energy(const FlowModel& model,
                                       const Trajectory& trajectory,
                                       double slack);

// Summed form of the dissipation estimate for every prefix n:
// E(u^n) + (1 / (4 tau)) sum_{k<=n} d^2(u^{k-1}, u^k) - E(u^0)
//   - (1 / (4 tau)) d^2(u^{-1}, u^0), compared against n * slack.
// The reported residual is the left side minus (n - 1) * slack, so the same
// per-entry slack applies.
InequalityReport check_telescoped_bound(const FlowModel& model,
                                        const Trajectory& trajectory,
                                        double slack);

struct EviReport {
  // residuals[i][j]: step steps[i], witness j.
  std::vector<std::size_t> steps;
  std::vector<std::vector<double>> residuals;
  double slack = 0.0;

  bool pass() const;
  // (step, witness, residual) of the largest entry.
  struct Worst {
    std::size_t step = 0;
    std::size_t witness = 0;
    double residual = 0.0;
  };
  Worst worst() const;
  // Row maxima flattened into an InequalityReport named "EVI".
  InequalityReport summary() const;
};

// Discrete evolution variational inequality at every BDF2 step k and witness w:
// (3/(4tau) + lambda/2) d^2(u^k, w) - d^2(u^{k-1}, w)/tau + d^2(u^{k-2}, w)/(4tau)
//   - [E(w) - E(u^k) - d^2(u^{k-1}, u^k)/tau + d^2(u^{k-2}, u^k)/(4tau)].
// Steps produced by the implicit Euler startup are skipped.
EviReport check_evi(const FlowModel& model, const Trajectory& trajectory,
                    const std::vector<Point>& witnesses, double lambda,
                    double slack);

// Deterministic witnesses for check_evi: count admissible samples from a
// generator seeded with seed.
std::vector<Point> evi_witnesses(const FlowModel& model, std::size_t count,
                                 std::uint64_t seed);

// A priori quantities along a trajectory.
struct DiagnosticsRecord {
  std::vector<double> energies;        // E(u^k), k = 0..N
  std::vector<double> step_distances;  // d(u^{k-1}, u^k), k = 1..N
  // Prefix sums of d^2(u^{k-1}, u^k) / (2 tau); the last entry is the full
  // kinetic sum.
  std::vector<double> kinetic_prefix;
  double kinetic_sum = 0.0;
  double max_abs_energy = 0.0;
  double max_base_distance = 0.0;

  // All aggregates finite and the kinetic prefix sums nondecreasing in the
  // horizon.
  bool pass() const;
};

DiagnosticsRecord classical_bounds(const FlowModel& model,
                                   const Trajectory& trajectory,
                                   const Point& base_point);

// Mean of d(traj(t_k), ref(t_k)) over t_k = k tau_coarse, k = 1..floor(T /
// tau_coarse). tau_coarse must be an integer multiple of both step sizes and
// T <= both horizons; otherwise Error(kGridMismatch).
double mean_error(const FlowModel& model, const Trajectory& trajectory,
                  const Trajectory& reference, double tau_coarse,
                  double horizon);

// Same, against a closed-form reference solution.
double mean_error(const FlowModel& model, const Trajectory& trajectory,
                  const std::function<Point(double)>& reference,
                  double tau_coarse, double horizon);

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;

  // A fit below R^2 = 0.99 indicates pre-asymptotic or floor-limited data.
  bool reliable() const { return r_squared >= 0.99; }
};

// Least-squares line through (log tau, log error). Needs at least 3 points
// with positive errors; otherwise Error(kDegenerateInput).
OrderFit fit_order(std::span<const std::pair<double, double>> points);

struct ConvergenceReport {
  Scheme scheme = Scheme::kBdf2;
  std::vector<std::pair<double, double>> points;  // (tau, mean error)
  OrderFit fit;
  bool fit_valid = false;
  std::string note;
  double tau_ref = 0.0;
  double tau_coarse = 0.0;
  double horizon = 0.0;
};

// Whether big / small is a positive integer up to rounding.
bool is_integer_multiple(double big, double small);

}  // namespace gflow
