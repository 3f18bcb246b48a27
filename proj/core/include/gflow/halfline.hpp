#pragma once

#include <cstddef>

#include "gflow/flat_model.hpp"

namespace gflow {

// Scalar flows on the real line, used as closed-form test problems.
//
// kQuadratic: E(u) = u^2 / 2, smooth and 1-convex.
// kHalfLine:  E(u) = max(u, 0), convex with a kink at 0. Its gradient flow
//             from u = 1 is 1 - t until t = 1 and 0 afterwards.
class ScalarModel final : public FlatModel {
 public:
  enum class Energy { kQuadratic, kHalfLine };

  explicit ScalarModel(Energy energy);

  Energy energy_kind() const { return kind_; }

  std::string name() const override;
  double energy(const Point& w) const override;
  bool admissible(const Point& w) const override;
  SemiConvexity semi_convexity() const override;
  Point base_point() const override;
  Point initial_datum() const override;
  Point sample_admissible(std::mt19937_64& rng) const override;
  Point gradient(const Point& w) const override;
  Point project(int piece, const Point& x) const override;

  // The half-line energy splits into u >= 0 (E = u) and u <= 0 (E = 0).
  int piece_count() const override;
  double piece_energy(int piece, const Point& w) const override;
  Point piece_gradient(int piece, const Point& w) const override;

 private:
  Energy kind_;
};

Point scalar_point(double value);

namespace halfline {

// Closed-form BDF2 step for E(u) = max(u, 0). With a = (4/3) u_{k-1} -
// (1/3) u_{k-2}: a - (2/3) tau if that is positive, a if a is negative,
// otherwise 0.
double exact_bdf2_step(double u_km2, double u_km1, double tau);

// 1 - t for t <= 1, 0 afterwards. Requires t >= 0.
double true_solution(double t);

// Smallest k >= 1 with k tau >= 1.
std::size_t kink_index(double tau);

// Whether the recursion started from (1 + tau, 1) lands exactly on 0 at the
// kink index, i.e. 1 - N tau lies in [-(2/3) tau, 0].
bool lands_on_kink(double tau);

// u^k = -(1/2)(1 - 3^{-(k - N)}) u_pre for k >= N, where u_pre = u^{N-1}
// must lie in [tau / 3, tau]. Throws Error(kPreconditionViolated) otherwise.
double post_kink_asymptote(std::size_t k, std::size_t kink, double u_pre,
                           double tau);

// Iterates exact_bdf2_step from the pair (u^{-1}, u^0) = (1 + tau, 1) and
// returns u^0, ..., u^N, N = floor(T / tau), as a BDF2 trajectory with an
// explicit pre-history.
Trajectory exact_trajectory(double tau, double horizon);

}  // namespace halfline
}  // namespace gflow
