#include "gflow/diagnostics.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gflow/convergence.hpp"
#include "gflow/halfline.hpp"
#include "gflow/hilbert_rd.hpp"
#include "gflow/sphere.hpp"

namespace gflow {
namespace {

const ScalarModel kQuadratic(ScalarModel::Energy::kQuadratic);
const ScalarModel kHalfLine(ScalarModel::Energy::kHalfLine);

Trajectory constant_trajectory(const Point& p, std::size_t n, double tau) {
  Trajectory t;
  t.scheme = Scheme::kBdf2;
  t.tau = tau;
  t.horizon = n * tau;
  t.states.assign(n + 1, p);
  return t;
}

// BDF2 trajectory of E = u^2 / 2 built from the closed-form step.
Trajectory quadratic_bdf2(double tau, std::size_t n) {
  Trajectory t;
  t.scheme = Scheme::kBdf2;
  t.tau = tau;
  t.horizon = n * tau;
  t.states.push_back(scalar_point(1.0));
  t.states.push_back(scalar_point(1.0 / (1 + tau)));
  for (std::size_t k = 2; k <= n; ++k) {
    const double u = t.states[k - 2][0];
    const double v = t.states[k - 1][0];
    t.states.push_back(scalar_point((4 * v - u) / (3 + 2 * tau)));
  }
  return t;
}

TEST(EnergyDissipation, StationaryTrajectory) {
  SphereModel sphere;
  const auto report = check_energy_dissipation(
      sphere, constant_trajectory(sphere.initial_datum(), 10, 1e-3), 0.0);
  EXPECT_EQ(report.name, "EnergyDim");
  ASSERT_EQ(report.residuals.size(), 10u);
  for (const double r : report.residuals) EXPECT_LE(r, 0.0);
  EXPECT_TRUE(report.pass());
}

TEST(EnergyDissipation, HalfLineBeforeKink) {
  const double tau = 0.01;
  const Trajectory t = halfline::exact_trajectory(tau, 0.5);
  const auto report = check_energy_dissipation(kHalfLine, t, 0.0);
  ASSERT_EQ(report.residuals.size(), 50u);
  for (const double r : report.residuals) EXPECT_NEAR(r, -0.75 * tau, 1e-14);
  EXPECT_TRUE(report.pass());
}

TEST(EnergyDissipation, CorruptedStateFailsAtItsStep) {
  HilbertRdModel rd(20);
  Trajectory t = run_trajectory(rd, Scheme::kBdf2, 1e-3, rd.initial_datum(), 0.01);
  t.states[6] = t.states[4];
  const auto report = check_energy_dissipation(rd, t, default_slack(rd, t));
  EXPECT_FALSE(report.pass());
  for (std::size_t i = 0; i < report.steps.size(); ++i) {
    const bool corrupted = report.steps[i] == 6 || report.steps[i] == 7;
    EXPECT_EQ(report.residuals[i] > report.slack, corrupted) << "step " << report.steps[i];
  }
}

TEST(EnergyDissipation, RequiresBdf2) {
  Trajectory t = constant_trajectory(scalar_point(0.0), 3, 0.1);
  t.scheme = Scheme::kMinimizingMovement;
  EXPECT_THROW(check_energy_dissipation(kQuadratic, t, 0.0), Error);
}

TEST(MonotoneEnergy, EulerTrajectoryPasses) {
  SphereModel sphere;
  const Trajectory t = run_trajectory(sphere, Scheme::kMinimizingMovement, 1e-2,
                                      sphere.initial_datum(), 0.5);
  const auto report = check_monotone_energy(sphere, t, default_slack(sphere, t));
  EXPECT_EQ(report.name, "Monotone");
  EXPECT_TRUE(report.pass());
  EXPECT_EQ(report.residuals.size(), t.steps());
}

TEST(TelescopedBound, HalfLineClosedForm) {
  const double tau = 0.01;
  const Trajectory t = halfline::exact_trajectory(tau, 0.5);
  const auto report = check_telescoped_bound(kHalfLine, t, 0.0);
  ASSERT_EQ(report.residuals.size(), 50u);
  // Prefix n: -n tau + n tau / 4 - tau / 4.
  for (std::size_t n = 1; n <= 50; ++n) {
    EXPECT_NEAR(report.residuals[n - 1], -0.75 * n * tau - 0.25 * tau, 1e-13);
  }
}

TEST(Evi, WitnessAtCurrentStateGivesZero) {
  const double tau = 0.1;
  const Trajectory t = quadratic_bdf2(tau, 6);
  for (std::size_t k = 2; k <= 6; ++k) {
    const auto report = check_evi(kQuadratic, t, {t.states[k]}, 0.0, 0.0);
    const auto it = std::find(report.steps.begin(), report.steps.end(), k);
    ASSERT_NE(it, report.steps.end());
    EXPECT_NEAR(report.residuals[it - report.steps.begin()][0], 0.0, 1e-15);
  }
}

TEST(Evi, QuadraticAgainstHandComputation) {
  const double tau = 0.1;
  const double lambda = 1.0;
  const Trajectory t = quadratic_bdf2(tau, 8);
  // For a quadratic energy every estimate behind the inequality is an
  // identity, so the residual vanishes up to rounding.
  const auto report = check_evi(kQuadratic, t, {scalar_point(0.0)}, lambda, 1e-14);
  ASSERT_EQ(report.steps.front(), 2u);
  ASSERT_EQ(report.steps.size(), 7u);
  for (std::size_t i = 0; i < report.steps.size(); ++i) {
    const std::size_t k = report.steps[i];
    const double u = t.states[k - 2][0];
    const double v = t.states[k - 1][0];
    const double w = t.states[k][0];
    const double lhs = (3 / (4 * tau) + lambda / 2) * w * w - v * v / tau + u * u / (4 * tau);
    const double rhs = 0.0 - 0.5 * w * w - (v - w) * (v - w) / tau + (u - w) * (u - w) / (4 * tau);
    EXPECT_NEAR(report.residuals[i][0], lhs - rhs, 1e-14);
    EXPECT_NEAR(report.residuals[i][0], 0.0, 1e-14);
  }
  EXPECT_TRUE(report.pass());
}

TEST(Evi, SphereRandomWitnessesPass) {
  SphereModel sphere;
  const Trajectory t =
      run_trajectory(sphere, Scheme::kBdf2, 1e-3, sphere.initial_datum(), 0.1);
  const auto witnesses = evi_witnesses(sphere, 16, 42);
  ASSERT_EQ(witnesses.size(), 16u);
  const auto report = check_evi(sphere, t, witnesses, SphereModel::kLambda,
                                default_slack(sphere, t));
  EXPECT_TRUE(report.pass()) << report.worst().residual;
  EXPECT_EQ(report.summary().name, "EVI");
}

TEST(Evi, WitnessesAreDeterministic) {
  HilbertRdModel rd(10);
  const auto a = evi_witnesses(rd, 16, 7);
  const auto b = evi_witnesses(rd, 16, 7);
  const auto c = evi_witnesses(rd, 16, 8);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_TRUE(rd.admissible(a[i]));
  }
  EXPECT_NE(a[0], c[0]);
}

TEST(DefaultSlack, Formula) {
  const Trajectory t = halfline::exact_trajectory(0.1, 0.5);
  const double eps = 1e-10 * 2.0;
  EXPECT_DOUBLE_EQ(default_slack(kHalfLine, t), 10 * eps * 2.0);
}

TEST(ClassicalBounds, StationaryTrajectory) {
  HilbertRdModel rd(12);
  const Point zero = Point::Zero(12);
  const auto record = classical_bounds(rd, constant_trajectory(zero, 5, 1e-3), zero);
  EXPECT_EQ(record.kinetic_sum, 0.0);
  EXPECT_EQ(record.max_base_distance, 0.0);
  EXPECT_EQ(record.energies.size(), 6u);
  EXPECT_EQ(record.step_distances.size(), 5u);
  EXPECT_TRUE(record.pass());
}

TEST(ClassicalBounds, HalfLineKineticSumIsHalf) {
  const Trajectory t = halfline::exact_trajectory(0.01, 1.0);
  const auto record = classical_bounds(kHalfLine, t, scalar_point(0.0));
  EXPECT_NEAR(record.kinetic_sum, 0.5, 1e-12);
  EXPECT_NEAR(record.max_abs_energy, 1.0, 1e-15);
  EXPECT_NEAR(record.max_base_distance, 1.0, 1e-15);
  EXPECT_TRUE(record.pass());
}

TEST(ClassicalBounds, KineticSumUniformInTau) {
  double previous = -1.0;
  for (const double tau : {1e-2, 1e-3}) {
    const Trajectory t = halfline::exact_trajectory(tau, 2.0);
    const auto record = classical_bounds(kHalfLine, t, scalar_point(0.0));
    EXPECT_LE(record.kinetic_sum, 0.5 + tau);
    if (previous >= 0) EXPECT_NEAR(record.kinetic_sum, previous, 0.02);
    previous = record.kinetic_sum;
  }
}

TEST(MeanError, IdenticalAndShifted) {
  const Trajectory a = halfline::exact_trajectory(0.01, 2.0);
  EXPECT_EQ(mean_error(kHalfLine, a, a, 0.1, 2.0), 0.0);
  Trajectory b = a;
  for (auto& s : b.states) s[0] += 0.25;
  EXPECT_NEAR(mean_error(kHalfLine, b, a, 0.1, 2.0), 0.25, 1e-14);
}

TEST(MeanError, Symmetric) {
  SphereModel sphere;
  const Trajectory a = run_trajectory(sphere, Scheme::kBdf2, 1e-2, sphere.initial_datum(), 0.2);
  const Trajectory b = run_trajectory(sphere, Scheme::kMinimizingMovement, 5e-3,
                                      sphere.initial_datum(), 0.2);
  EXPECT_EQ(mean_error(sphere, a, b, 2e-2, 0.2), mean_error(sphere, b, a, 2e-2, 0.2));
}

TEST(MeanError, GridMismatch) {
  const Trajectory a = halfline::exact_trajectory(0.03, 1.0);
  const Trajectory b = halfline::exact_trajectory(0.01, 1.0);
  try {
    mean_error(kHalfLine, a, b, 0.1, 1.0);
    FAIL() << "expected GridMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGridMismatch);
  }
  EXPECT_THROW(mean_error(kHalfLine, b, b, 0.1, 1.5), Error);
}

TEST(MeanError, HalfLineAgainstTrueSolution) {
  const double tau = 1e-3;
  const Trajectory t = halfline::exact_trajectory(tau, 2.0);
  const double e = mean_error(
      kHalfLine, t, [](double s) { return scalar_point(halfline::true_solution(s)); },
      1e-2, 2.0);
  EXPECT_GT(e, 0.1 * tau);
  EXPECT_LT(e, tau);
}

TEST(FitOrder, SyntheticSlopes) {
  for (const double order : {1.0, 2.0}) {
    std::vector<std::pair<double, double>> pts;
    for (const double tau : {1e-2, 1e-3, 1e-4}) pts.emplace_back(tau, 3.7 * std::pow(tau, order));
    const OrderFit fit = fit_order(pts);
    EXPECT_NEAR(fit.slope, order, 1e-10);
    EXPECT_NEAR(fit.intercept, std::log(3.7), 1e-9);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
    EXPECT_TRUE(fit.reliable());
  }
}

TEST(FitOrder, InvariantUnderRescaling) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> noise(0.8, 1.25);
  std::vector<std::pair<double, double>> pts;
  for (const double tau : {1.6e-3, 8e-4, 4e-4, 2e-4, 1e-4}) {
    pts.emplace_back(tau, tau * tau * noise(rng));
  }
  const OrderFit base = fit_order(pts);
  for (auto& p : pts) p.second *= 123.0;
  EXPECT_NEAR(fit_order(pts).slope, base.slope, 1e-12);
  EXPECT_NEAR(fit_order(pts).r_squared, base.r_squared, 1e-12);
}

TEST(FitOrder, DegenerateInput) {
  std::vector<std::pair<double, double>> two{{1e-2, 1e-4}, {1e-3, 1e-6}};
  EXPECT_THROW(fit_order(two), Error);
  std::vector<std::pair<double, double>> zero{{1e-2, 1e-4}, {1e-3, 0.0}, {1e-4, 1e-8}};
  try {
    fit_order(zero);
    FAIL() << "expected DegenerateInput";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateInput);
  }
}

TEST(IntegerMultiple, Examples) {
  EXPECT_TRUE(is_integer_multiple(1.6e-3, 1e-4));
  EXPECT_TRUE(is_integer_multiple(1.28e-3, 8e-5));
  EXPECT_TRUE(is_integer_multiple(1e-2, 1e-4));
  EXPECT_FALSE(is_integer_multiple(1e-2, 3e-3));
  EXPECT_FALSE(is_integer_multiple(1e-4, 1e-3));
}

TEST(ConvergenceStudy, QuadraticOrders) {
  StudySpec spec;
  spec.taus = {0.04, 0.02, 0.01, 0.005};
  spec.tau_coarse = 0.04;
  spec.horizon = 1.0;
  spec.exact = [](double t) { return scalar_point(std::exp(-t)); };
  spec.jobs = 2;
  const StudyResult r = convergence_study(kQuadratic, spec);
  ASSERT_EQ(r.reports.size(), 2u);
  EXPECT_EQ(r.reports[0].scheme, Scheme::kMinimizingMovement);
  EXPECT_NEAR(r.reports[0].fit.slope, 1.0, 0.05);
  EXPECT_NEAR(r.reports[1].fit.slope, 2.0, 0.1);
  EXPECT_TRUE(r.reports[1].fit_valid);
}

TEST(ConvergenceStudy, ReferenceRunAndDeterminism) {
  SphereModel sphere;
  StudySpec spec;
  spec.schemes = {Scheme::kBdf2};
  spec.taus = {4e-3, 2e-3, 1e-3};
  spec.tau_ref = 1e-4;
  spec.tau_coarse = 4e-3;
  spec.horizon = 0.1;
  spec.jobs = 3;
  const StudyResult a = convergence_study(sphere, spec);
  spec.jobs = 1;
  const StudyResult b = convergence_study(sphere, spec);
  ASSERT_TRUE(a.runs.front().is_reference);
  ASSERT_EQ(a.reports[0].points.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.reports[0].points[i].second, b.reports[0].points[i].second);
  }
  EXPECT_GT(a.reports[0].fit.slope, 1.8);
}

TEST(InequalitySuite, SchemeDispatch) {
  HilbertRdModel rd(30);
  const auto witnesses = evi_witnesses(rd, 16, 42);
  for (const Scheme scheme : {Scheme::kMinimizingMovement, Scheme::kBdf2}) {
    const Trajectory t = run_trajectory(rd, scheme, 5e-4, rd.initial_datum(), 0.02);
    const auto reports = inequality_suite(rd, t, witnesses, default_slack(rd, t));
    std::vector<std::string> names;
    for (const auto& r : reports) {
      names.push_back(r.name);
      EXPECT_TRUE(r.pass()) << r.name;
    }
    if (scheme == Scheme::kBdf2) {
      EXPECT_NE(std::find(names.begin(), names.end(), "EnergyDim"), names.end());
      EXPECT_NE(std::find(names.begin(), names.end(), "EVI"), names.end());
      EXPECT_EQ(std::find(names.begin(), names.end(), "Monotone"), names.end());
    } else {
      EXPECT_NE(std::find(names.begin(), names.end(), "Monotone"), names.end());
      EXPECT_EQ(std::find(names.begin(), names.end(), "EnergyDim"), names.end());
    }
    EXPECT_NE(std::find(names.begin(), names.end(), "Telescoped"), names.end());
  }
}

}  // namespace
}  // namespace gflow
