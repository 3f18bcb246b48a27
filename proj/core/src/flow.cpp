#include "gflow/flow.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gflow {

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::kBdf2 ? "bdf2" : "mm";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "bdf2" || text == "BDF2") return Scheme::kBdf2;
  if (text == "mm" || text == "euler" || text == "MM") {
    return Scheme::kMinimizingMovement;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown scheme '" + std::string(text) + "'");
}

SemiConvexity::SemiConvexity(double lambda, double tau_star)
    : lambda_(lambda), tau_star_(tau_star) {
  if (!(lambda <= 0.0) || !(tau_star > 0.0) || -lambda * tau_star > 0.5) {
    std::ostringstream msg;
    msg << "semi-convexity requires lambda <= 0, tau_star > 0 and "
           "(-lambda) tau_star <= 1/2; got lambda="
        << lambda << ", tau_star=" << tau_star;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
}

SemiConvexity SemiConvexity::from_lambda(double lambda) {
  const double tau_star = lambda < 0.0
                              ? 0.5 / -lambda
                              : std::numeric_limits<double>::infinity();
  return SemiConvexity(lambda, tau_star);
}

PenalizedProblem::PenalizedProblem(Scheme kind, double tau, Point v, Point u)
    : kind_(kind), tau_(tau), v_(std::move(v)), u_(std::move(u)) {
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "step size must be positive");
  }
}

PenalizedProblem PenalizedProblem::minimizing_movement(double tau, Point v) {
  return PenalizedProblem(Scheme::kMinimizingMovement, tau, std::move(v),
                          Point());
}

PenalizedProblem PenalizedProblem::bdf2(double tau, Point u, Point v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "BDF2 anchors have different dimensions");
  }
  return PenalizedProblem(Scheme::kBdf2, tau, std::move(v), std::move(u));
}

std::vector<Anchor> PenalizedProblem::anchors() const {
  if (kind_ == Scheme::kMinimizingMovement) {
    return {{&v_, 0.5 / tau_}};
  }
  return {{&v_, 1.0 / tau_}, {&u_, -0.25 / tau_}};
}

double PenalizedProblem::convexity_modulus(double lambda) const {
  return (kind_ == Scheme::kMinimizingMovement ? 1.0 : 1.5) / tau_ + lambda;
}

std::optional<Point> FlowModel::penalized_gradient(const PenalizedProblem&,
                                                   const Point&) const {
  return std::nullopt;
}

double FlowModel::penalized_value(const PenalizedProblem& problem,
                                  const Point& w) const {
  double value = energy(w);
  for (const Anchor& a : problem.anchors()) {
    const double d = distance(*a.point, w);
    value += a.coefficient * d * d;
  }
  return value;
}

double inner_tolerance(const FlowModel& model, const Point& x0) {
  const double e = model.energy(x0);
  return 1e-10 * (1.0 + (std::isfinite(e) ? std::abs(e) : 0.0));
}

namespace {

void check_step_size(const FlowModel& model, double tau) {
  const double tau_star = model.semi_convexity().tau_star();
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "step size must be positive");
  }
  if (tau >= tau_star) {
    std::ostringstream msg;
    msg << "tau=" << tau << " is not below tau_star=" << tau_star << " for "
        << model.name();
    throw Error(ErrorCode::kStepTooLarge, msg.str());
  }
}

Point solve(const FlowModel& model, const PenalizedProblem& problem) {
  const double tol = inner_tolerance(model, problem.anchor_v());
  InnerSolution sol = model.minimize(problem, tol);
  if (!sol.converged) {
    std::ostringstream msg;
    msg << model.name() << " " << to_string(problem.kind())
        << " inner solve reached residual " << sol.residual << " > tolerance "
        << sol.tolerance << " after " << sol.iterations << " iterations (tau="
        << problem.tau() << ")";
    throw Error(ErrorCode::kInnerSolveFailed, msg.str());
  }
  return std::move(sol.point);
}

}  // namespace

Point mm_step(const FlowModel& model, double tau, const Point& v) {
  check_step_size(model, tau);
  return solve(model, PenalizedProblem::minimizing_movement(tau, v));
}

Point bdf2_step(const FlowModel& model, double tau, const Point& u,
                const Point& v) {
  check_step_size(model, tau);
  return solve(model, PenalizedProblem::bdf2(tau, u, v));
}

std::pair<Point, Point> startup_pair(const FlowModel& model, double tau,
                                     const Point& u0) {
  return {u0, mm_step(model, tau, u0)};
}

std::size_t step_count(double tau, double horizon) {
  if (!(tau > 0.0) || !(horizon >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "step_count requires tau > 0 and horizon >= 0");
  }
  const double q = horizon / tau;
  const double n = std::round(q);
  if (std::abs(q - n) <= 1e-9 * std::max(1.0, q)) {
    return static_cast<std::size_t>(n);
  }
  return static_cast<std::size_t>(std::floor(q));
}

std::size_t interval_index(double t, double tau) {
  if (t <= 0.0) return 0;
  const double q = t / tau;
  const double n = std::round(q);
  if (std::abs(q - n) <= 1e-9 * std::max(1.0, q)) {
    return static_cast<std::size_t>(n);
  }
  return static_cast<std::size_t>(std::ceil(q));
}

Trajectory run_trajectory(const FlowModel& model, Scheme scheme, double tau,
                          const Point& u0, double horizon,
                          std::optional<Point> pre_history) {
  if (!(horizon >= tau)) {
    throw Error(ErrorCode::kInvalidArgument,
                "time horizon must be at least one step");
  }
  if (!model.admissible(u0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "initial datum is not admissible for " + model.name());
  }

  Trajectory traj;
  traj.scheme = scheme;
  traj.tau = tau;
  traj.horizon = horizon;
  if (scheme == Scheme::kBdf2) traj.pre_history = std::move(pre_history);

  const std::size_t n = step_count(tau, horizon);
  traj.states.reserve(n + 1);
  traj.states.push_back(u0);

  for (std::size_t k = 1; k <= n; ++k) {
    try {
      const Point& prev = traj.states[k - 1];
      if (scheme == Scheme::kMinimizingMovement ||
          (k == 1 && !traj.pre_history)) {
        traj.states.push_back(mm_step(model, tau, prev));
      } else {
        const Point& prev2 = k >= 2 ? traj.states[k - 2] : *traj.pre_history;
        traj.states.push_back(bdf2_step(model, tau, prev2, prev));
      }
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), k);
    }
  }
  return traj;
}

const Point& interpolate(const Trajectory& trajectory, double t) {
  if (trajectory.states.empty()) {
    throw Error(ErrorCode::kOutOfRange, "empty trajectory");
  }
  if (t < 0.0) {
    throw Error(ErrorCode::kOutOfRange, "negative time");
  }
  const std::size_t k = interval_index(t, trajectory.tau);
  if (k > trajectory.steps()) {
    std::ostringstream msg;
    msg << "t=" << t << " beyond N*tau="
        << trajectory.time(trajectory.steps());
    throw Error(ErrorCode::kOutOfRange, msg.str());
  }
  return trajectory.states[k];
}

}  // namespace gflow
