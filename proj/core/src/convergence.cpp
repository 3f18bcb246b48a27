#include "gflow/convergence.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace gflow {
namespace {

struct Job {
  Scheme scheme;
  double tau;
  bool is_reference;
};

}  // namespace

StudyResult convergence_study(const FlowModel& model, const StudySpec& spec) {
  const Point u0 = spec.initial ? *spec.initial : model.initial_datum();

  std::vector<Job> jobs;
  if (!spec.exact) jobs.push_back({Scheme::kBdf2, spec.tau_ref, true});
  for (Scheme scheme : spec.schemes) {
    for (double tau : spec.taus) jobs.push_back({scheme, tau, false});
  }

  std::vector<std::optional<Trajectory>> results(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      try {
        results[i] = run_trajectory(model, job.scheme, job.tau, u0, spec.horizon);
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << model.name() << " " << to_string(job.scheme)
            << (job.is_reference ? " reference" : "") << " tau=" << job.tau
            << ": " << e.detail();
        failures[i] = std::make_exception_ptr(Error(e.code(), msg.str(), e.step()));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(spec.jobs, 1)), jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  StudyResult out;
  const Trajectory* reference = nullptr;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    out.runs.push_back({jobs[i].scheme, jobs[i].tau, jobs[i].is_reference, 0.0,
                        std::move(*results[i])});
  }
  if (!spec.exact) reference = &out.runs.front().trajectory;

  for (Scheme scheme : spec.schemes) {
    ConvergenceReport report;
    report.scheme = scheme;
    report.tau_ref = spec.tau_ref;
    report.tau_coarse = spec.tau_coarse;
    report.horizon = spec.horizon;
    bool below_floor = false;
    for (StudyRun& run : out.runs) {
      if (run.is_reference || run.scheme != scheme) continue;
      run.mean_error =
          reference ? mean_error(model, run.trajectory, *reference,
                                 spec.tau_coarse, spec.horizon)
                    : mean_error(model, run.trajectory, spec.exact,
                                 spec.tau_coarse, spec.horizon);
      report.points.emplace_back(run.tau, run.mean_error);
      below_floor = below_floor || !(run.mean_error > kErrorFloor);
    }
    if (below_floor) {
      report.note = "below solver floor";
    } else {
      try {
        report.fit = fit_order(report.points);
        report.fit_valid = true;
        if (!report.fit.reliable()) report.note = "unreliable fit (R^2 < 0.99)";
      } catch (const Error& e) {
        report.note = e.detail();
      }
    }
    out.reports.push_back(std::move(report));
  }
  return out;
}

std::vector<InequalityReport> inequality_suite(const FlowModel& model,
                                               const Trajectory& trajectory,
                                               const std::vector<Point>& witnesses,
                                               double slack) {
  std::vector<InequalityReport> out;
  if (trajectory.scheme == Scheme::kBdf2) {
    out.push_back(check_energy_dissipation(model, trajectory, slack));
    out.push_back(check_telescoped_bound(model, trajectory, slack));
    out.push_back(check_evi(model, trajectory, witnesses,
                            model.semi_convexity().lambda(), slack)
                      .summary());
  } else {
    out.push_back(check_monotone_energy(model, trajectory, slack));
    out.push_back(check_telescoped_bound(model, trajectory, slack));
  }

  const DiagnosticsRecord rec =
      classical_bounds(model, trajectory, model.base_point());
  InequalityReport classical{"ClassicalBounds", {}, {}, 0.0};
  const bool finite = std::isfinite(rec.kinetic_sum) &&
                      std::isfinite(rec.max_abs_energy) &&
                      std::isfinite(rec.max_base_distance);
  for (std::size_t i = 0; i < rec.kinetic_prefix.size(); ++i) {
    const double prev = i == 0 ? 0.0 : rec.kinetic_prefix[i - 1];
    classical.steps.push_back(i + 1);
    classical.residuals.push_back(
        finite ? prev - rec.kinetic_prefix[i]
               : std::numeric_limits<double>::infinity());
  }
  out.push_back(std::move(classical));
  return out;
}

}  // namespace gflow
