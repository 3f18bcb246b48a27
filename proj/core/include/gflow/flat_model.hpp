#pragma once

#include "gflow/flow.hpp"
#include "gflow/prox_solver.hpp"

namespace gflow {

// Model whose metric is a weighted Euclidean norm on its coordinates:
// d(a, b)^2 = weight * |a - b|^2. Gradients are Riesz representatives with
// respect to that inner product, so the Euler-Lagrange equation of the BDF2
// step reads (3w - 4v + u) / (2 tau) + grad E(w) = 0 in these coordinates.
//
// The energy may be split into convex pieces, each smooth on its own convex
// feasible set; the inner solve minimizes over every piece and keeps the best.
// Energies with a kink (max(u, 0)) use this instead of subgradients.
class FlatModel : public FlowModel {
 public:
  explicit FlatModel(double weight) : weight_(weight) {}

  double weight() const { return weight_; }

  double distance(const Point& a, const Point& b) const override;
  InnerSolution minimize(const PenalizedProblem& problem,
                         double tolerance) const override;
  std::optional<Point> penalized_gradient(const PenalizedProblem& problem,
                                          const Point& w) const override;

  // Riesz gradient of the energy. For piecewise energies, the gradient of the
  // piece containing w (first match).
  virtual Point gradient(const Point& w) const = 0;

  // Euclidean projection onto the feasible set of a piece.
  virtual Point project(int piece, const Point& x) const = 0;

  virtual int piece_count() const { return 1; }
  virtual double piece_energy(int piece, const Point& w) const;
  virtual Point piece_gradient(int piece, const Point& w) const;

 private:
  double weight_;
};

}  // namespace gflow
