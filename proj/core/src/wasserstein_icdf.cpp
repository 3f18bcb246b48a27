#include "gflow/wasserstein_icdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace gflow {

double w2_distance(const InverseCdf& a, const InverseCdf& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "icdf grids differ in K");
  }
  return std::sqrt((a.values - b.values).squaredNorm() / a.size());
}

double interaction_kernel(double x) {
  const double x2 = x * x;
  return 2.0 * x2 * x2 - x2;
}

double interaction_kernel_derivative(double x) {
  return 8.0 * x * x * x - 2.0 * x;
}

double icdf_entropy(const InverseCdf& x) {
  const Eigen::VectorXd& v = x.values;
  const int k = x.size();
  double sum = 0.0;
  for (int i = 0; i + 1 < k; ++i) {
    const double gap = v[i + 1] - v[i];
    if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
    sum += std::log(k * gap);
  }
  return -sum / (k - 1);
}

double icdf_interaction(const InverseCdf& x) {
  const Eigen::VectorXd& v = x.values;
  const int k = x.size();
  // Fixed summation order: rows accumulated separately, then in sequence.
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    double row = 0.0;
    for (int j = 0; j < k; ++j) row += interaction_kernel(v[i] - v[j]);
    total += row;
  }
  return total / (2.0 * k * k);
}

double icdf_energy(const InverseCdf& x) {
  if (x.size() < 2 || (x.values.array().abs() > 1.0).any()) {
    return std::numeric_limits<double>::infinity();
  }
  const double entropy = icdf_entropy(x);
  if (!std::isfinite(entropy)) return entropy;
  return entropy + icdf_interaction(x);
}

Eigen::VectorXd icdf_grad(const InverseCdf& x) {
  const Eigen::VectorXd& v = x.values;
  const int k = x.size();
  std::vector<double> inv_gap(k > 1 ? k - 1 : 0);
  for (int i = 0; i + 1 < k; ++i) {
    const double gap = v[i + 1] - v[i];
    if (!(gap > 0.0)) {
      throw Error(ErrorCode::kNonMonotone,
                  "icdf not strictly increasing at index " + std::to_string(i));
    }
    inv_gap[i] = 1.0 / gap;
  }
  const double entropy_scale = static_cast<double>(k) / (k - 1);
  Eigen::VectorXd g(k);
  for (int i = 0; i < k; ++i) {
    double entropy = 0.0;
    if (i > 0) entropy -= inv_gap[i - 1];
    if (i + 1 < k) entropy += inv_gap[i];
    double interaction = 0.0;
    for (int j = 0; j < k; ++j) {
      interaction += interaction_kernel_derivative(v[i] - v[j]);
    }
    g[i] = entropy_scale * entropy + interaction / k;
  }
  return g;
}

InverseCdf icdf_initial(int k) {
  if (k < 4) {
    throw Error(ErrorCode::kInvalidArgument, "icdf grid needs K >= 4");
  }
  constexpr double pi = std::numbers::pi;
  InverseCdf x{Eigen::VectorXd(k)};
  for (int i = 0; i < k; ++i) {
    const double xi = (i + 0.5) / k;
    x.values[i] = 2.0 * xi - 1.0 +
                  std::sin(8.0 * pi * xi) *
                      (10.0 * (xi * (xi - 0.5) * (xi - 1.0)) + 1.0) /
                      (8.0 * pi);
  }
  for (int i = 0; i < k; ++i) {
    const bool in_range = std::abs(x.values[i]) <= 1.0;
    const bool increasing = i + 1 == k || x.values[i + 1] > x.values[i];
    if (!in_range || !increasing) {
      throw Error(ErrorCode::kInitialNotMonotone,
                  "sampled initial icdf violates monotonicity or range at "
                  "index " + std::to_string(i));
    }
  }
  return x;
}

Eigen::VectorXd isotonic_regression(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  // Blocks of pooled values: mean and count.
  std::vector<double> mean;
  std::vector<Eigen::Index> count;
  mean.reserve(n);
  count.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mean.push_back(x[i]);
    count.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
      const double m2 = mean.back();
      const Eigen::Index c2 = count.back();
      mean.pop_back();
      count.pop_back();
      const Eigen::Index c1 = count.back();
      mean.back() = (mean.back() * c1 + m2 * c2) / (c1 + c2);
      count.back() = c1 + c2;
    }
  }
  Eigen::VectorXd out(n);
  Eigen::Index pos = 0;
  for (std::size_t b = 0; b < mean.size(); ++b) {
    for (Eigen::Index j = 0; j < count[b]; ++j) out[pos++] = mean[b];
  }
  return out;
}

Eigen::VectorXd project_monotone(const Eigen::VectorXd& x) {
  Eigen::VectorXd y = isotonic_regression(x).cwiseMax(-1.0).cwiseMin(1.0);
  const Eigen::Index n = y.size();
  for (Eigen::Index i = 1; i < n; ++i) {
    y[i] = std::max(y[i], y[i - 1] + kMinSeparation);
  }
  if (n > 0) y[n - 1] = std::min(y[n - 1], 1.0);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    y[i - 1] = std::min(y[i - 1], y[i] - kMinSeparation);
  }
  return y;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> icdf_density(const InverseCdf& x) {
  const int k = x.size();
  Eigen::VectorXd mid(k - 1);
  Eigen::VectorXd density(k - 1);
  for (int i = 0; i + 1 < k; ++i) {
    const double gap = x.values[i + 1] - x.values[i];
    mid[i] = 0.5 * (x.values[i] + x.values[i + 1]);
    density[i] = 1.0 / (k * gap);
  }
  return {mid, density};
}

WassersteinIcdfModel::WassersteinIcdfModel(int k)
    : FlatModel(1.0 / k), k_(k) {
  if (k < 4) {
    throw Error(ErrorCode::kInvalidArgument, "icdf grid needs K >= 4");
  }
}

void WassersteinIcdfModel::check_size(const Point& w) const {
  if (w.size() != k_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(k_) + " icdf samples, got " +
                    std::to_string(w.size()));
  }
}

double WassersteinIcdfModel::energy(const Point& w) const {
  check_size(w);
  return icdf_energy(InverseCdf{w});
}

bool WassersteinIcdfModel::admissible(const Point& w) const {
  if (w.size() != k_ || !w.allFinite()) return false;
  if ((w.array().abs() > 1.0).any()) return false;
  for (int i = 0; i + 1 < k_; ++i) {
    if (!(w[i + 1] > w[i])) return false;
  }
  return true;
}

SemiConvexity WassersteinIcdfModel::semi_convexity() const {
  return SemiConvexity::from_lambda(kLambda);
}

Point WassersteinIcdfModel::base_point() const {
  // Uniform measure on [-1, 1].
  Point p(k_);
  for (int i = 0; i < k_; ++i) p[i] = 2.0 * (i + 0.5) / k_ - 1.0;
  return p;
}

Point WassersteinIcdfModel::initial_datum() const {
  return icdf_initial(k_).values;
}

Point WassersteinIcdfModel::sample_admissible(std::mt19937_64& rng) const {
  // Average of sorted uniform samples and the uniform icdf: strictly
  // increasing with gaps of at least 1 / K.
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Point sorted(k_);
  for (int i = 0; i < k_; ++i) sorted[i] = uniform(rng);
  std::sort(sorted.data(), sorted.data() + k_);
  return 0.5 * (sorted + base_point());
}

Point WassersteinIcdfModel::gradient(const Point& w) const {
  check_size(w);
  return icdf_grad(InverseCdf{w});
}

Point WassersteinIcdfModel::project(int, const Point& x) const {
  return project_monotone(x);
}

}  // namespace gflow
