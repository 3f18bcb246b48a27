#pragma once

#include <Eigen/Core>

#include "gflow/flat_model.hpp"

namespace gflow {

// Grid function on the K interior nodes x_i = i h, h = 1 / (K + 1), of [0, 1].
// Values are constrained to the obstacle set |u_i| <= 1.
struct GridFunction {
  Eigen::VectorXd values;

  int size() const { return static_cast<int>(values.size()); }
  double spacing() const { return 1.0 / (size() + 1); }
};

// sqrt(h * sum (a_i - b_i)^2). Throws Error(kDimensionMismatch).
double l2_distance(const GridFunction& a, const GridFunction& b);

// (1 / 2) sum_i ((u_{i+1} - u_i) / h)^2 h - 15 h sum_i u_i^4, with zero
// boundary slopes (homogeneous Neumann), +infinity if some |u_i| > 1.
double rd_energy(const GridFunction& u);

// L^2 Riesz gradient: -Delta_h u - 60 u^3 with Neumann ghost nodes.
Eigen::VectorXd rd_grad(const GridFunction& u);

// Samples 1/2 sin(2 pi x) + 1/4 at the interior nodes. Requires K >= 2.
GridFunction rd_initial(int k);

// Obstacle-constrained reaction-diffusion flow, u_t = u_xx + 60 u^3 with
// |u| <= 1, as a gradient flow on L^2(0, 1).
class HilbertRdModel final : public FlatModel {
 public:
  // The second variation is bounded below by -180 |phi|^2. That bound, rather
  // than -90, is used for slacks and the step size horizon.
  static constexpr double kLambda = -180.0;

  explicit HilbertRdModel(int k);

  int grid_size() const { return k_; }

  std::string name() const override { return "hilbert-rd"; }
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

}  // namespace gflow
