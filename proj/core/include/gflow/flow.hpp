#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gflow/error.hpp"

namespace gflow {

// State of a model problem in its coordinate representation. Each model
// documents what the coordinates mean (unit 3-vector, grid values, sampled
// inverse distribution function, scalar).
using Point = Eigen::VectorXd;

enum class Scheme { kMinimizingMovement, kBdf2 };

std::string_view to_string(Scheme scheme);
// Accepts "mm", "euler", "bdf2". Throws Error(kInvalidArgument) otherwise.
Scheme parse_scheme(std::string_view text);

// Semi-convexity modulus lambda <= 0 of the energy together with the step
// size horizon tau_star for which the penalized problems are uniformly convex.
class SemiConvexity {
 public:
  // Validates lambda <= 0, tau_star > 0 and (-lambda) * tau_star <= 1/2.
  SemiConvexity(double lambda, double tau_star);

  // tau_star chosen as large as the normalization allows.
  static SemiConvexity from_lambda(double lambda);

  double lambda() const { return lambda_; }
  double tau_star() const { return tau_star_; }

 private:
  double lambda_;
  double tau_star_;
};

// One squared-distance penalty term coefficient * d^2(anchor, w).
struct Anchor {
  const Point* point;
  double coefficient;
};

// Phi(tau, v; w) = d^2(v, w) / (2 tau) + E(w)                        (kMinimizingMovement)
// Psi(tau, u, v; w) = d^2(v, w) / tau - d^2(u, w) / (4 tau) + E(w)   (kBdf2)
class PenalizedProblem {
 public:
  static PenalizedProblem minimizing_movement(double tau, Point v);
  static PenalizedProblem bdf2(double tau, Point u, Point v);

  Scheme kind() const { return kind_; }
  double tau() const { return tau_; }
  const Point& anchor_v() const { return v_; }
  // Two steps back. Only meaningful for kBdf2.
  const Point& anchor_u() const { return u_; }

  std::vector<Anchor> anchors() const;

  // Modulus of uniform convexity of the penalized functional: 1/tau + lambda
  // for the Euler penalty and 3/(2 tau) + lambda for the BDF2 penalty.
  double convexity_modulus(double lambda) const;

 private:
  PenalizedProblem(Scheme kind, double tau, Point v, Point u);

  Scheme kind_;
  double tau_;
  Point v_;
  Point u_;
};

struct InnerSolution {
  Point point;
  double residual = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
  bool converged = false;
};

// A metric space together with an energy functional on it. Implementations
// are immutable after construction and safe to share between threads.
class FlowModel {
 public:
  virtual ~FlowModel() = default;

  virtual std::string name() const = 0;
  virtual double distance(const Point& a, const Point& b) const = 0;
  // +infinity outside the domain of the energy.
  virtual double energy(const Point& w) const = 0;
  virtual bool admissible(const Point& w) const = 0;
  virtual SemiConvexity semi_convexity() const = 0;
  // Base point u_* used by the distance bound of the classical estimates.
  virtual Point base_point() const = 0;
  // Initial datum of the reference experiment.
  virtual Point initial_datum() const = 0;
  // Deterministic given the generator state.
  virtual Point sample_admissible(std::mt19937_64& rng) const = 0;

  // Minimizes the penalized functional, starting from the anchor v. The
  // returned solution carries the achieved stationarity residual.
  virtual InnerSolution minimize(const PenalizedProblem& problem,
                                 double tolerance) const = 0;

  // Gradient of the penalized functional at w in the tangent space of the
  // model (Riesz representative for flat models, Riemannian gradient on the
  // sphere). Nullopt for models without a smooth representation.
  virtual std::optional<Point> penalized_gradient(
      const PenalizedProblem& problem, const Point& w) const;

  // Value of the penalized functional at w.
  double penalized_value(const PenalizedProblem& problem, const Point& w) const;
};

// Inner-solve tolerance at anchor x0: 1e-10 * (1 + |E(x0)|).
double inner_tolerance(const FlowModel& model, const Point& x0);

// Implicit Euler (minimizing movement) step: argmin Phi(tau, v; .).
Point mm_step(const FlowModel& model, double tau, const Point& v);

// Variational BDF2 step: argmin Psi(tau, u, v; .), u two steps back.
Point bdf2_step(const FlowModel& model, double tau, const Point& u,
                const Point& v);

// (u0, mm_step(tau, u0)); the BDF2 history at times 0 and tau.
std::pair<Point, Point> startup_pair(const FlowModel& model, double tau,
                                     const Point& u0);

// Discrete solution u^0, ..., u^N at times k * tau, N = floor(T / tau).
struct Trajectory {
  Scheme scheme = Scheme::kBdf2;
  double tau = 0.0;
  double horizon = 0.0;
  // Explicit state before u^0 when the BDF2 recursion was started from a
  // given pair (u^{-1}, u^0) rather than from an implicit Euler step.
  std::optional<Point> pre_history;
  std::vector<Point> states;

  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
  double time(std::size_t k) const { return static_cast<double>(k) * tau; }
  // u^{-1}; falls back to u^0 when no explicit pre-history exists.
  const Point& history() const {
    return pre_history ? *pre_history : states.front();
  }
  // Index of the first state produced by the BDF2 formula: 1 for a given
  // pair, 2 after an implicit Euler startup step. Unused for kMinimizingMovement.
  std::size_t first_bdf2_index() const { return pre_history ? 1 : 2; }
};

// Number of whole steps of size tau that fit in [0, horizon].
std::size_t step_count(double tau, double horizon);

// For kMinimizingMovement iterates mm_step. For kBdf2 takes the implicit Euler
// startup pair, or (pre_history, u0) when pre_history is given, and iterates
// bdf2_step. Step failures are rethrown with the failing index attached.
Trajectory run_trajectory(const FlowModel& model, Scheme scheme, double tau,
                          const Point& u0, double horizon,
                          std::optional<Point> pre_history = std::nullopt);

// Piecewise constant, right-continuous in the sense u(t) = u^k for
// t in ((k-1) tau, k tau], u(0) = u^0.
const Point& interpolate(const Trajectory& trajectory, double t);

// Index k with t in ((k-1) tau, k tau]; grid times k * tau map to k even when
// t / tau is off by a few ulps.
std::size_t interval_index(double t, double tau);

}  // namespace gflow
