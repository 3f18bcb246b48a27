#pragma once

#include <Eigen/Core>

#include "gflow/flat_model.hpp"

namespace gflow {

// Probability measure on [-1, 1] represented by its inverse distribution
// function X sampled at the midpoints xi_i = (i - 1/2) / K. Under this map the
// 1-D Wasserstein distance becomes the L^2(0, 1) distance.
struct InverseCdf {
  Eigen::VectorXd values;

  int size() const { return static_cast<int>(values.size()); }
};

// Minimum gap X_{i+1} - X_i kept by project_monotone.
inline constexpr double kMinSeparation = 1e-12;

// sqrt((1 / K) sum (X^a_i - X^b_i)^2). Throws Error(kDimensionMismatch).
double w2_distance(const InverseCdf& a, const InverseCdf& b);

// W(x) = 2 x^4 - x^2.
double interaction_kernel(double x);
double interaction_kernel_derivative(double x);

// Entropy -(1 / (K - 1)) sum_i log(K (X_{i+1} - X_i)) over the K - 1 forward
// differences, plus the interaction (1 / (2 K^2)) sum_{i,j} W(X_i - X_j).
// +infinity if some difference is <= 0 or some value leaves [-1, 1].
double icdf_energy(const InverseCdf& x);
double icdf_entropy(const InverseCdf& x);
double icdf_interaction(const InverseCdf& x);

// L^2(0, 1) Riesz gradient (K times the coordinate gradient) of icdf_energy.
// Throws Error(kNonMonotone) unless X is strictly increasing.
Eigen::VectorXd icdf_grad(const InverseCdf& x);

// Samples 2 xi - 1 + sin(8 pi xi) (10 xi (xi - 1/2)(xi - 1) + 1) / (8 pi).
// Throws Error(kInitialNotMonotone) if the samples are not strictly
// increasing inside [-1, 1]. Requires K >= 4.
InverseCdf icdf_initial(int k);

// Least-squares nondecreasing fit by pool-adjacent-violators.
Eigen::VectorXd isotonic_regression(const Eigen::VectorXd& x);

// Isotonic regression, clamp to [-1, 1], then enforce gaps of at least
// kMinSeparation. Idempotent; the identity on strictly increasing vectors in
// range with gaps >= kMinSeparation.
Eigen::VectorXd project_monotone(const Eigen::VectorXd& x);

// Aggregation-diffusion flow u_t = u_xx + (u W' * u)_x on [-1, 1] as a
// Wasserstein gradient flow, in inverse distribution function coordinates.
class WassersteinIcdfModel final : public FlatModel {
 public:
  // Entropy is convex in X; the interaction Hessian is bounded below by
  // min W'' = -2 times |phi|^2.
  static constexpr double kLambda = -2.0;

  explicit WassersteinIcdfModel(int k);

  int grid_size() const { return k_; }

  std::string name() const override { return "wasserstein-icdf"; }
  double energy(const Point& w) const override;
  bool admissible(const Point& w) const override;
  SemiConvexity semi_convexity() const override;
  Point base_point() const override;
  Point initial_datum() const override;
  Point sample_admissible(std::mt19937_64& rng) const override;
  Point gradient(const Point& w) const override;
  Point project(int piece, const Point& x) const override;

 private:
  void check_size(const Point& w) const;

  int k_;
};

// Density histogram of the measure: value 1 / (K (X_{i+1} - X_i)) on each cell
// [X_i, X_{i+1}]. Returns (cell midpoints, densities).
std::pair<Eigen::VectorXd, Eigen::VectorXd> icdf_density(const InverseCdf& x);

}  // namespace gflow
