#include "gflow/halfline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gflow {

Point scalar_point(double value) {
  Point p(1);
  p[0] = value;
  return p;
}

ScalarModel::ScalarModel(Energy energy) : FlatModel(1.0), kind_(energy) {}

std::string ScalarModel::name() const {
  return kind_ == Energy::kQuadratic ? "quadratic" : "halfline";
}

double ScalarModel::energy(const Point& w) const {
  const double u = w[0];
  return kind_ == Energy::kQuadratic ? 0.5 * u * u : std::max(u, 0.0);
}

bool ScalarModel::admissible(const Point& w) const {
  return w.size() == 1 && std::isfinite(w[0]);
}

SemiConvexity ScalarModel::semi_convexity() const {
  return SemiConvexity::from_lambda(0.0);
}

Point ScalarModel::base_point() const { return scalar_point(0.0); }

Point ScalarModel::initial_datum() const { return scalar_point(1.0); }

Point ScalarModel::sample_admissible(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> uniform(-2.0, 2.0);
  return scalar_point(uniform(rng));
}

Point ScalarModel::gradient(const Point& w) const {
  if (kind_ == Energy::kQuadratic) return w;
  return scalar_point(w[0] > 0.0 ? 1.0 : 0.0);
}

int ScalarModel::piece_count() const {
  return kind_ == Energy::kQuadratic ? 1 : 2;
}

double ScalarModel::piece_energy(int piece, const Point& w) const {
  if (kind_ == Energy::kQuadratic) return energy(w);
  return piece == 0 ? w[0] : 0.0;
}

Point ScalarModel::piece_gradient(int piece, const Point& w) const {
  if (kind_ == Energy::kQuadratic) return w;
  return scalar_point(piece == 0 ? 1.0 : 0.0);
}

Point ScalarModel::project(int piece, const Point& x) const {
  if (kind_ == Energy::kQuadratic) return x;
  constexpr double inf = std::numeric_limits<double>::infinity();
  return piece == 0 ? project_box(x, 0.0, inf) : project_box(x, -inf, 0.0);
}

namespace halfline {

double exact_bdf2_step(double u_km2, double u_km1, double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "step size must be positive");
  }
  // (4/3) u_{k-1} - (1/3) u_{k-2}, written so that rounding does not drift
  // along the exact linear branch.
  const double diff = u_km1 - u_km2;
  const double a = u_km1 + diff / 3.0;
  const double shifted = u_km1 + (diff - 2.0 * tau) / 3.0;
  if (shifted > 0.0) return shifted;
  if (a < 0.0) return a;
  return 0.0;
}

double true_solution(double t) {
  if (!(t >= 0.0)) {
    throw Error(ErrorCode::kOutOfRange, "time must be nonnegative");
  }
  return t <= 1.0 ? 1.0 - t : 0.0;
}

std::size_t kink_index(double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "step size must be positive");
  }
  // Grid-aligned ratios 1 / tau within a few ulps count as exact.
  const double q = 1.0 / tau;
  const double n = std::round(q);
  std::size_t k = std::abs(q - n) <= 1e-9 * q ? static_cast<std::size_t>(n)
                                              : static_cast<std::size_t>(
                                                    std::ceil(q));
  return std::max<std::size_t>(k, 1);
}

bool lands_on_kink(double tau) {
  const double n = static_cast<double>(kink_index(tau));
  const double gap = 1.0 - n * tau;
  const double slack = 1e-12 * tau;
  return gap <= slack && gap >= -2.0 * tau / 3.0 - slack;
}

double post_kink_asymptote(std::size_t k, std::size_t kink, double u_pre,
                           double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "step size must be positive");
  }
  const double slack = 1e-12 * tau;
  if (k < kink || u_pre < tau / 3.0 - slack || u_pre > tau + slack) {
    throw Error(ErrorCode::kPreconditionViolated,
                "post-kink formula needs k >= N and u^{N-1} in [tau/3, tau]");
  }
  const double decay = std::pow(3.0, -static_cast<double>(k - kink));
  return -0.5 * (1.0 - decay) * u_pre;
}

Trajectory exact_trajectory(double tau, double horizon) {
  Trajectory traj;
  traj.scheme = Scheme::kBdf2;
  traj.tau = tau;
  traj.horizon = horizon;
  traj.pre_history = scalar_point(1.0 + tau);
  const std::size_t n = step_count(tau, horizon);
  traj.states.reserve(n + 1);
  traj.states.push_back(scalar_point(1.0));
  double u_km2 = 1.0 + tau;
  double u_km1 = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double u = exact_bdf2_step(u_km2, u_km1, tau);
    traj.states.push_back(scalar_point(u));
    u_km2 = u_km1;
    u_km1 = u;
  }
  return traj;
}

}  // namespace halfline
}  // namespace gflow
