#include "gflow/hilbert_rd.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace gflow {

double l2_distance(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "grid functions differ in K");
  }
  return std::sqrt(a.spacing() * (a.values - b.values).squaredNorm());
}

double rd_energy(const GridFunction& u) {
  const Eigen::VectorXd& x = u.values;
  if ((x.array().abs() > 1.0).any()) {
    return std::numeric_limits<double>::infinity();
  }
  const double h = u.spacing();
  const int k = u.size();
  double slopes = 0.0;
  for (int i = 0; i + 1 < k; ++i) {
    const double d = x[i + 1] - x[i];
    slopes += d * d;
  }
  return 0.5 * slopes / h - 15.0 * h * x.array().pow(4).sum();
}

Eigen::VectorXd rd_grad(const GridFunction& u) {
  const Eigen::VectorXd& x = u.values;
  const int k = u.size();
  const double h = u.spacing();
  const double inv_h2 = 1.0 / (h * h);
  Eigen::VectorXd g(k);
  for (int i = 0; i < k; ++i) {
    const double left = i > 0 ? x[i - 1] : x[i];
    const double right = i + 1 < k ? x[i + 1] : x[i];
    g[i] = (2.0 * x[i] - left - right) * inv_h2 - 60.0 * x[i] * x[i] * x[i];
  }
  return g;
}

GridFunction rd_initial(int k) {
  if (k < 2) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs K >= 2 nodes");
  }
  GridFunction u{Eigen::VectorXd(k)};
  const double h = u.spacing();
  for (int i = 0; i < k; ++i) {
    const double x = (i + 1) * h;
    u.values[i] = 0.5 * std::sin(2.0 * std::numbers::pi * x) + 0.25;
  }
  return u;
}

HilbertRdModel::HilbertRdModel(int k) : FlatModel(1.0 / (k + 1)), k_(k) {
  if (k < 2) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs K >= 2 nodes");
  }
}

void HilbertRdModel::check_size(const Point& w) const {
  if (w.size() != k_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(k_) + " grid values, got " +
                    std::to_string(w.size()));
  }
}

double HilbertRdModel::energy(const Point& w) const {
  check_size(w);
  return rd_energy(GridFunction{w});
}

bool HilbertRdModel::admissible(const Point& w) const {
  return w.size() == k_ && w.allFinite() && (w.array().abs() <= 1.0).all();
}

SemiConvexity HilbertRdModel::semi_convexity() const {
  return SemiConvexity::from_lambda(kLambda);
}

Point HilbertRdModel::base_point() const { return Point::Zero(k_); }

Point HilbertRdModel::initial_datum() const { return rd_initial(k_).values; }

Point HilbertRdModel::sample_admissible(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Point p(k_);
  for (int i = 0; i < k_; ++i) p[i] = uniform(rng);
  return p;
}

Point HilbertRdModel::gradient(const Point& w) const {
  check_size(w);
  return rd_grad(GridFunction{w});
}

Point HilbertRdModel::project(int, const Point& x) const {
  return project_box(x, -1.0, 1.0);
}

}  // namespace gflow
