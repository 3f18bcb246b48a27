#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace gflow::testing {

// Minimizer of a unimodal function on [lo, hi] by golden-section search.
// Comparisons of function values locate the minimizer only to about the
// square root of the working precision, so f is evaluated in long double.
inline double golden_section(const std::function<long double(long double)>& f,
                             double lo, double hi, double tol = 1e-13) {
  const long double r = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  long double a = lo;
  long double b = hi;
  long double c = b - r * (b - a);
  long double d = a + r * (b - a);
  long double fc = f(c);
  long double fd = f(d);
  for (int i = 0; i < 400 && b - a > tol; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return static_cast<double>(0.5L * (a + b));
}

// Central differences of f at x along every coordinate.
inline Eigen::VectorXd central_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp[i] += step;
    xm[i] -= step;
    g[i] = (f(xp) - f(xm)) / (2.0 * step);
  }
  return g;
}

// Isotonic regression by the min-max formula
// y_i = max_{j <= i} min_{k >= i} mean(x_j..x_k). O(n^3).
inline Eigen::VectorXd isotonic_minmax(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = -INFINITY;
    for (Eigen::Index j = 0; j <= i; ++j) {
      double inner = INFINITY;
      for (Eigen::Index k = i; k < n; ++k) {
        inner = std::min(inner, x.segment(j, k - j + 1).mean());
      }
      best = std::max(best, inner);
    }
    out[i] = best;
  }
  return out;
}

// Composite Simpson rule of f over [a, b]^2 with n (even) panels per side.
inline double simpson_2d(const std::function<double(double, double)>& f,
                         double a, double b, int n) {
  const double h = (b - a) / n;
  const auto weight = [n](int i) {
    if (i == 0 || i == n) return 1.0;
    return i % 2 == 1 ? 4.0 : 2.0;
  };
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      sum += weight(i) * weight(j) * f(a + i * h, a + j * h);
    }
  }
  return sum * h * h / 9.0;
}

}  // namespace gflow::testing
