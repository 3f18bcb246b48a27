#include "gflow/sphere.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace gflow {
namespace {

using std::numbers::pi;

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec3 v(normal(rng), normal(rng), normal(rng));
  return v.normalized();
}

Vec3 random_tangent(const Vec3& u, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  return tangent_projection(u, Vec3(normal(rng), normal(rng), normal(rng)));
}

TEST(SphereDistance, Examples) {
  const Vec3 e1(1, 0, 0);
  const Vec3 e2(0, 1, 0);
  EXPECT_DOUBLE_EQ(sphere_distance(e1, e1), 0.0);
  EXPECT_DOUBLE_EQ(sphere_distance(e1, -e1), pi);
  EXPECT_DOUBLE_EQ(sphere_distance(e1, e2), pi / 2);
}

TEST(SphereDistance, AgreesWithArccos) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a = random_unit(rng);
    const Vec3 b = random_unit(rng);
    EXPECT_NEAR(sphere_distance(a, b), std::acos(std::clamp(a.dot(b), -1.0, 1.0)),
                1e-7);
  }
}

TEST(SphereDistance, MetricAxiomsOnRandomTriples) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 a = random_unit(rng);
    const Vec3 b = random_unit(rng);
    const Vec3 c = random_unit(rng);
    const double ab = sphere_distance(a, b);
    const double bc = sphere_distance(b, c);
    const double ac = sphere_distance(a, c);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, pi);
    EXPECT_EQ(ab, sphere_distance(b, a));
    EXPECT_LE(ac, (ab + bc) * (1 + 1e-12) + 1e-15);
    EXPECT_EQ(sphere_distance(a, a), 0.0);
  }
}

TEST(SphereEnergy, HandEvaluations) {
  EXPECT_DOUBLE_EQ(sphere_energy(Vec3(0, 0, 1)), 7.0 / 8.0);
  EXPECT_DOUBLE_EQ(sphere_energy(Vec3(1, 0, 0)), 7.0 / 8.0);
  EXPECT_DOUBLE_EQ(sphere_energy(Vec3(0, 0, -1)), -5.0 / 8.0);
}

TEST(SphereGrad, HandEvaluation) {
  const Vec3 g = sphere_grad(Vec3(0, 0, 1));
  EXPECT_DOUBLE_EQ(g[0], -0.25);
  EXPECT_DOUBLE_EQ(g[1], -0.25);
  EXPECT_DOUBLE_EQ(g[2], 0.0);
  const Vec3 a = sphere_ambient_grad(Vec3(0, 0, 1));
  EXPECT_DOUBLE_EQ(a[2], 15.0 / 4.0);
}

TEST(SphereGrad, VanishesAtCriticalPoint) {
  const Vec3 c = Vec3::Constant(-1.0 / std::sqrt(3.0));
  EXPECT_LE(sphere_grad(c).norm(), 1e-15);
}

TEST(SphereGrad, TangentEverywhere) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 u = random_unit(rng);
    EXPECT_LE(std::abs(sphere_grad(u).dot(u)), 1e-12);
  }
}

TEST(SphereGrad, MatchesFiniteDifferencesAlongGeodesics) {
  std::mt19937_64 rng(4);
  const double step = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const Vec3 u = random_unit(rng);
    const Vec3 g = sphere_grad(u);
    for (int dir = 0; dir < 2; ++dir) {
      const Vec3 xi = random_tangent(u, rng, 1.0).normalized();
      const double fd = (sphere_energy(sphere_exp(u, step * xi)) -
                         sphere_energy(sphere_exp(u, -step * xi))) /
                        (2 * step);
      EXPECT_NEAR(fd, g.dot(xi), 1e-6 * std::max(1.0, g.norm()));
    }
  }
}

TEST(SphereExp, Examples) {
  const Vec3 n(0, 0, 1);
  EXPECT_EQ(sphere_exp(n, Vec3::Zero()), n);
  EXPECT_LE((sphere_exp(n, (pi / 2) * Vec3(1, 0, 0)) - Vec3(1, 0, 0)).norm(), 1e-15);
  EXPECT_LE((sphere_exp(n, pi * Vec3(0, 1, 0)) + n).norm(), 1e-15);
}

TEST(SphereExp, PreservesLengthBelowPi) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 u = random_unit(rng);
    Vec3 xi = random_tangent(u, rng, 1.0);
    if (xi.norm() >= pi - 1e-3) xi *= 0.5;
    const Vec3 w = sphere_exp(u, xi);
    EXPECT_NEAR(w.norm(), 1.0, 1e-12);
    EXPECT_NEAR(sphere_distance(u, w), xi.norm(), 1e-10);
  }
}

TEST(SphereLog, Examples) {
  const Vec3 n(0, 0, 1);
  EXPECT_EQ(sphere_log(n, n), Vec3::Zero());
  EXPECT_LE((sphere_log(n, Vec3(1, 0, 0)) - (pi / 2) * Vec3(1, 0, 0)).norm(), 1e-15);
}

TEST(SphereLog, RoundTrip) {
  std::mt19937_64 rng(6);
  int checked = 0;
  while (checked < 1000) {
    const Vec3 u = random_unit(rng);
    const Vec3 w = random_unit(rng);
    if (u.dot(w) <= -1 + 1e-6) continue;
    const Vec3 xi = sphere_log(u, w);
    EXPECT_LE((sphere_exp(u, xi) - w).norm(), 1e-10);
    EXPECT_NEAR(xi.norm(), sphere_distance(u, w), 1e-10);
    EXPECT_LE(std::abs(xi.dot(u)), 1e-12);
    ++checked;
  }
}

TEST(SphereLog, AntipodeIsAnError) {
  try {
    sphere_log(Vec3(0, 0, 1), Vec3(0, 0, -1));
    FAIL() << "expected AntipodalPoint";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAntipodalPoint);
  }
}

TEST(SphereInitial, IsNormalized) {
  const Vec3 u = sphere_initial();
  EXPECT_NEAR(u.norm(), 1.0, 1e-15);
  EXPECT_NEAR(u[2] / u[0], 5.0, 1e-14);
  EXPECT_NEAR(u[1] / u[0], 2.0, 1e-14);
}

TEST(SphereModel, Bdf2StepIsStationary) {
  SphereModel model;
  std::mt19937_64 rng(7);
  for (const double tau : {1e-2, 1e-3, 1e-4}) {
    for (int i = 0; i < 20; ++i) {
      const Vec3 v = random_unit(rng);
      const Vec3 u = sphere_exp(v, random_tangent(v, rng, tau));
      const Point w = bdf2_step(model, tau, u, v);
      const Vec3 w3 = w;
      const Vec3 grad = -(2 / tau) * sphere_log(w3, v) +
                        (1 / (2 * tau)) * sphere_log(w3, u) + sphere_grad(w3);
      EXPECT_LE(grad.norm(), 100 * inner_tolerance(model, v));
      EXPECT_NEAR(w.norm(), 1.0, 1e-12);
    }
  }
}

TEST(SphereModel, EulerStepIsStationary) {
  SphereModel model;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const Vec3 v = random_unit(rng);
    const double tau = 1e-2;
    const Vec3 w = mm_step(model, tau, v);
    const Vec3 grad = -(1 / tau) * sphere_log(w, v) + sphere_grad(w);
    EXPECT_LE(grad.norm(), 100 * inner_tolerance(model, v));
    EXPECT_LE(sphere_energy(w), sphere_energy(v) + 1e-12);
  }
}

TEST(SphereModel, RejectsWrongDimension) {
  SphereModel model;
  EXPECT_FALSE(model.admissible(Point::Zero(2)));
  EXPECT_FALSE(model.admissible(Point::Constant(3, 1.0)));
  EXPECT_TRUE(model.admissible(model.initial_datum()));
}

}  // namespace
}  // namespace gflow
