#include "gflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace gflow {

bool InequalityReport::pass() const {
  return std::all_of(residuals.begin(), residuals.end(),
                     [this](double r) { return r <= slack; });
}

std::pair<std::size_t, double> InequalityReport::worst() const {
  std::pair<std::size_t, double> out{0, -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    // NaN residuals count as the worst possible entry.
    if (std::isnan(residuals[i]) || residuals[i] > out.second) {
      out = {steps[i], std::isnan(residuals[i])
                           ? std::numeric_limits<double>::infinity()
                           : residuals[i]};
    }
  }
  return out;
}

double default_slack(const FlowModel& model, const Trajectory& trajectory) {
  double max_abs = 0.0;
  for (const Point& u : trajectory.states) {
    max_abs = std::max(max_abs, std::abs(model.energy(u)));
  }
  const double eps = 1e-10 * (1.0 + max_abs);
  return 10.0 * eps * (1.0 + max_abs);
}

namespace {

double sq(double x) { return x * x; }

void require_bdf2(const Trajectory& trajectory, const char* what) {
  if (trajectory.scheme != Scheme::kBdf2) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " applies to BDF2 trajectories");
  }
}

// u^{k-2} for k >= 1 in a trajectory whose u^{-1} is history().
const Point& two_back(const Trajectory& t, std::size_t k) {
  return k >= 2 ? t.states[k - 2] : t.history();
}

}  // namespace

InequalityReport check_energy_dissipation(const FlowModel& model,
                                          const Trajectory& trajectory,
                                          double slack) {
  require_bdf2(trajectory, "EnergyDim");
  InequalityReport report{"EnergyDim", {}, {}, slack};
  const double tau = trajectory.tau;
  const auto& s = trajectory.states;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double lhs = model.energy(s[k]) + sq(model.distance(s[k - 1], s[k])) / (2 * tau);
    const double rhs = model.energy(s[k - 1]) +
                       sq(model.distance(two_back(trajectory, k), s[k - 1])) / (4 * tau);
    report.steps.push_back(k);
    report.residuals.push_back(lhs - rhs);
  }
  return report;
}

InequalityReport check_monotone_energy(const FlowModel& model,
                                       const Trajectory& trajectory,
                                       double slack) {
  InequalityReport report{"Monotone", {}, {}, slack};
  const auto& s = trajectory.states;
  for (std::size_t k = 1; k < s.size(); ++k) {
    report.steps.push_back(k);
    report.residuals.push_back(model.energy(s[k]) - model.energy(s[k - 1]));
  }
  return report;
}

InequalityReport check_telescoped_bound(const FlowModel& model,
                                        const Trajectory& trajectory,
                                        double slack) {
  InequalityReport report{"Telescoped", {}, {}, slack};
  const double tau = trajectory.tau;
  const auto& s = trajectory.states;
  const double start = model.energy(s.front()) +
                       sq(model.distance(trajectory.history(), s.front())) / (4 * tau);
  double kinetic = 0.0;
  for (std::size_t n = 1; n < s.size(); ++n) {
    kinetic += sq(model.distance(s[n - 1], s[n])) / (4 * tau);
    const double lhs = model.energy(s[n]) + kinetic - start;
    report.steps.push_back(n);
    report.residuals.push_back(lhs - static_cast<double>(n - 1) * slack);
  }
  return report;
}

bool EviReport::pass() const {
  for (const auto& row : residuals) {
    for (double r : row) {
      if (!(r <= slack)) return false;
    }
  }
  return true;
}

EviReport::Worst EviReport::worst() const {
  Worst w;
  w.residual = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    for (std::size_t j = 0; j < residuals[i].size(); ++j) {
      const double r = std::isnan(residuals[i][j])
                           ? std::numeric_limits<double>::infinity()
                           : residuals[i][j];
      if (r > w.residual) w = {steps[i], j, r};
    }
  }
  return w;
}

InequalityReport EviReport::summary() const {
  InequalityReport report{"EVI", steps, {}, slack};
  for (const auto& row : residuals) {
    double m = -std::numeric_limits<double>::infinity();
    for (double r : row) m = std::isnan(r) ? std::numeric_limits<double>::infinity() : std::max(m, r);
    report.residuals.push_back(m);
  }
  return report;
}

EviReport check_evi(const FlowModel& model, const Trajectory& trajectory,
                    const std::vector<Point>& witnesses, double lambda,
                    double slack) {
  require_bdf2(trajectory, "EVI");
  EviReport report;
  report.slack = slack;
  const double tau = trajectory.tau;
  const auto& s = trajectory.states;
  std::vector<double> witness_energy;
  for (const Point& w : witnesses) witness_energy.push_back(model.energy(w));

  for (std::size_t k = trajectory.first_bdf2_index(); k < s.size(); ++k) {
    const Point& uk = s[k];
    const Point& uk1 = s[k - 1];
    const Point& uk2 = two_back(trajectory, k);
    const double ek = model.energy(uk);
    const double d_k1_k = sq(model.distance(uk1, uk));
    const double d_k2_k = sq(model.distance(uk2, uk));
    std::vector<double> row;
    row.reserve(witnesses.size());
    for (std::size_t j = 0; j < witnesses.size(); ++j) {
      const Point& w = witnesses[j];
      const double lhs = (0.75 / tau + 0.5 * lambda) * sq(model.distance(uk, w)) -
                         sq(model.distance(uk1, w)) / tau +
                         sq(model.distance(uk2, w)) / (4 * tau);
      const double rhs = witness_energy[j] - ek - d_k1_k / tau + d_k2_k / (4 * tau);
      row.push_back(lhs - rhs);
    }
    report.steps.push_back(k);
    report.residuals.push_back(std::move(row));
  }
  return report;
}

std::vector<Point> evi_witnesses(const FlowModel& model, std::size_t count,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(model.sample_admissible(rng));
  return out;
}

bool DiagnosticsRecord::pass() const {
  if (!std::isfinite(kinetic_sum) || !std::isfinite(max_abs_energy) ||
      !std::isfinite(max_base_distance)) {
    return false;
  }
  for (std::size_t i = 1; i < kinetic_prefix.size(); ++i) {
    if (kinetic_prefix[i] < kinetic_prefix[i - 1]) return false;
  }
  return true;
}

DiagnosticsRecord classical_bounds(const FlowModel& model,
                                   const Trajectory& trajectory,
                                   const Point& base_point) {
  DiagnosticsRecord rec;
  const auto& s = trajectory.states;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double e = model.energy(s[k]);
    rec.energies.push_back(e);
    rec.max_abs_energy = std::max(rec.max_abs_energy, std::abs(e));
    rec.max_base_distance =
        std::max(rec.max_base_distance, model.distance(base_point, s[k]));
    if (k > 0) {
      const double d = model.distance(s[k - 1], s[k]);
      rec.step_distances.push_back(d);
      rec.kinetic_sum += d * d / (2 * trajectory.tau);
      rec.kinetic_prefix.push_back(rec.kinetic_sum);
    }
  }
  return rec;
}

bool is_integer_multiple(double big, double small) {
  if (!(big > 0.0) || !(small > 0.0)) return false;
  const double q = big / small;
  const double n = std::round(q);
  return n >= 1.0 && std::abs(q - n) <= 1e-9 * q;
}

namespace {

std::size_t coarse_count(double tau, double tau_coarse, double horizon) {
  if (!is_integer_multiple(tau_coarse, tau)) {
    std::ostringstream msg;
    msg << "tau_coarse=" << tau_coarse << " is not an integer multiple of tau="
        << tau;
    throw Error(ErrorCode::kGridMismatch, msg.str());
  }
  if (!(horizon >= tau_coarse)) {
    throw Error(ErrorCode::kGridMismatch, "horizon shorter than tau_coarse");
  }
  return step_count(tau_coarse, horizon);
}

const Point& at_coarse(const Trajectory& t, std::size_t k, double tau_coarse) {
  const auto ratio = static_cast<std::size_t>(std::llround(tau_coarse / t.tau));
  const std::size_t idx = k * ratio;
  if (idx > t.steps()) {
    throw Error(ErrorCode::kGridMismatch, "trajectory shorter than the horizon");
  }
  return t.states[idx];
}

}  // namespace

double mean_error(const FlowModel& model, const Trajectory& trajectory,
                  const Trajectory& reference, double tau_coarse,
                  double horizon) {
  const std::size_t n = coarse_count(trajectory.tau, tau_coarse, horizon);
  coarse_count(reference.tau, tau_coarse, horizon);
  double sum = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    sum += model.distance(at_coarse(trajectory, k, tau_coarse),
                          at_coarse(reference, k, tau_coarse));
  }
  return sum / static_cast<double>(n);
}

double mean_error(const FlowModel& model, const Trajectory& trajectory,
                  const std::function<Point(double)>& reference,
                  double tau_coarse, double horizon) {
  const std::size_t n = coarse_count(trajectory.tau, tau_coarse, horizon);
  double sum = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = static_cast<double>(k) * tau_coarse;
    sum += model.distance(at_coarse(trajectory, k, tau_coarse), reference(t));
  }
  return sum / static_cast<double>(n);
}

OrderFit fit_order(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::kDegenerateInput, "need at least 3 (tau, error) points");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [tau, err] : points) {
    if (!(tau > 0.0) || !(err > 0.0) || !std::isfinite(err)) {
      throw Error(ErrorCode::kDegenerateInput,
                  "error at or below zero (below solver floor)");
    }
    xs.push_back(std::log(tau));
    ys.push_back(std::log(err));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "all step sizes coincide");
  }
  OrderFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace gflow
