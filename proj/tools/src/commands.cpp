#include "gflow_cli/commands.hpp"

#include <atomic>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "gflow/convergence.hpp"
#include "gflow/halfline.hpp"
#include "gflow_cli/output.hpp"

namespace gflow::cli {
namespace {

std::string pass_text(bool pass) { return pass ? "PASS" : "FAIL"; }

StudySpec study_spec(const ExperimentConfig& cfg) {
  StudySpec spec;
  spec.schemes = cfg.schemes;
  spec.taus = cfg.taus;
  spec.tau_ref = cfg.tau_ref;
  spec.tau_coarse = cfg.tau_coarse;
  spec.horizon = cfg.t_final;
  spec.jobs = cfg.jobs;
  if (cfg.space == "halfline") {
    spec.exact = [](double t) { return scalar_point(halfline::true_solution(t)); };
  }
  return spec;
}

int report_solver_failure(const Error& e, std::ostream& err) {
  err << "solver failure: " << e.what() << "\n";
  return kExitSolver;
}

struct CheckRow {
  Scheme scheme;
  double tau;
  InequalityReport report;
};

std::string diagnostics_csv(const std::vector<CheckRow>& rows) {
  std::string csv = "scheme,tau,check,steps,worst_step,worst_residual,slack,status\n";
  for (const auto& row : rows) {
    const auto [step, residual] = row.report.worst();
    csv += std::string(to_string(row.scheme)) + "," + format_double(row.tau) +
           "," + row.report.name + "," +
           std::to_string(row.report.residuals.size()) + "," +
           std::to_string(step) + "," + format_double(residual) + "," +
           format_double(row.report.slack) + "," + pass_text(row.report.pass()) +
           "\n";
  }
  return csv;
}

void print_table(const std::vector<CheckRow>& rows, std::ostream& out) {
  out << std::left << std::setw(6) << "scheme" << std::setw(12) << "tau"
      << std::setw(17) << "check" << std::setw(8) << "step" << std::setw(15)
      << "worst" << std::setw(13) << "slack"
      << "status\n";
  for (const auto& row : rows) {
    const auto [step, residual] = row.report.worst();
    out << std::left << std::setw(6) << to_string(row.scheme) << std::setw(12)
        << format_double(row.tau) << std::setw(17) << row.report.name
        << std::setw(8) << step << std::setw(15) << std::setprecision(6)
        << residual << std::setw(13) << std::setprecision(4) << row.report.slack
        << pass_text(row.report.pass()) << "\n";
  }
}

std::vector<CheckRow> check_rows(const FlowModel& model, const Trajectory& traj,
                                 std::uint64_t seed) {
  const auto witnesses = evi_witnesses(model, kWitnessCount, seed);
  const double slack = default_slack(model, traj);
  std::vector<CheckRow> rows;
  for (auto& report : inequality_suite(model, traj, witnesses, slack)) {
    rows.push_back({traj.scheme, traj.tau, std::move(report)});
  }
  return rows;
}

}  // namespace

int cmd_run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg, Command::kRun);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const auto model = make_model(cfg);
  const Point u0 = model->initial_datum();

  struct Job {
    Scheme scheme;
    double tau;
  };
  std::vector<Job> jobs;
  for (Scheme s : cfg.schemes) {
    for (double tau : cfg.taus) jobs.push_back({s, tau});
  }
  std::vector<std::exception_ptr> failures(jobs.size());
  std::vector<std::string> files(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const Trajectory traj = run_trajectory(*model, jobs[i].scheme,
                                               jobs[i].tau, u0, cfg.t_final);
        const auto path = cfg.out / trajectory_file_name(cfg.space,
                                                         jobs[i].scheme,
                                                         jobs[i].tau);
        write_file_atomic(path, trajectory_csv(*model, traj));
        files[i] = path.string();
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << cfg.space << " " << to_string(jobs[i].scheme)
            << " tau=" << jobs[i].tau << ": " << e.detail();
        failures[i] = std::make_exception_ptr(Error(e.code(), msg.str(), e.step()));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), jobs.size());
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      return report_solver_failure(e, err);
    }
  }
  for (const auto& f : files) out << "wrote " << f << "\n";
  return kExitOk;
}

int cmd_converge(const ExperimentConfig& cfg, std::ostream& out,
                 std::ostream& err) {
  try {
    validate(cfg, Command::kConverge);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const auto model = make_model(cfg);
  StudyResult study;
  try {
    study = convergence_study(*model, study_spec(cfg));
  } catch (const Error& e) {
    return report_solver_failure(e, err);
  }

  std::string conv = "scheme,tau,mean_error\n";
  std::string fits = "scheme,slope,intercept,r_squared,status\n";
  std::vector<ChartSeries> series;
  for (const auto& report : study.reports) {
    ChartSeries s;
    std::ostringstream label;
    label << (report.scheme == Scheme::kBdf2 ? "BDF2" : "implicit Euler");
    if (report.fit_valid) {
      label << " (slope " << std::fixed << std::setprecision(2)
            << report.fit.slope << ")";
    }
    s.label = label.str();
    for (const auto& [tau, error] : report.points) {
      conv += std::string(to_string(report.scheme)) + "," + format_double(tau) +
              "," + format_double(error) + "\n";
      s.x.push_back(tau);
      s.y.push_back(error);
    }
    series.push_back(std::move(s));
    fits += std::string(to_string(report.scheme)) + "," +
            (report.fit_valid ? format_double(report.fit.slope) : "nan") + "," +
            (report.fit_valid ? format_double(report.fit.intercept) : "nan") +
            "," + (report.fit_valid ? format_double(report.fit.r_squared) : "nan") +
            "," + (report.note.empty() ? "ok" : report.note) + "\n";
    out << to_string(report.scheme) << ": ";
    if (report.fit_valid) {
      out << "slope " << std::setprecision(4) << report.fit.slope << ", R^2 "
          << report.fit.r_squared;
    }
    if (!report.note.empty()) out << (report.fit_valid ? " " : "") << "(" << report.note << ")";
    out << "\n";
  }

  std::vector<CheckRow> rows;
  bool all_pass = true;
  for (const StudyRun& run : study.runs) {
    for (auto& row : check_rows(*model, run.trajectory, cfg.seed)) {
      all_pass = all_pass && row.report.pass();
      rows.push_back(std::move(row));
    }
  }

  write_file_atomic(cfg.out / "convergence.csv", conv);
  write_file_atomic(cfg.out / "fits.csv", fits);
  write_file_atomic(cfg.out / "diagnostics.csv", diagnostics_csv(rows));
  write_file_atomic(cfg.out / "convergence.svg",
                    loglog_svg(cfg.space + ": mean error vs step size",
                               "step size tau", "mean error", series));
  out << "inequality checks: " << pass_text(all_pass) << "\n";
  out << "wrote " << (cfg.out / "convergence.csv").string() << ", "
      << (cfg.out / "convergence.svg").string() << ", "
      << (cfg.out / "diagnostics.csv").string() << "\n";
  return kExitOk;
}

int cmd_check(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg, Command::kCheck);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const auto model = make_model(cfg);

  std::vector<Trajectory> trajectories;
  if (cfg.trajectory_file) {
    try {
      trajectories.push_back(
          read_trajectory_csv(*cfg.trajectory_file, cfg.schemes.front()));
    } catch (const std::exception& e) {
      err << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
    for (const Point& u : trajectories.back().states) {
      if (u.size() != model->initial_datum().size()) {
        err << "config error: trajectory dimension does not match "
            << cfg.space << "\n";
        return kExitConfig;
      }
    }
  } else {
    const double tau = cfg.taus.front();
    try {
      for (Scheme s : cfg.schemes) {
        trajectories.push_back(run_trajectory(*model, s, tau,
                                              model->initial_datum(),
                                              cfg.t_final));
      }
    } catch (const Error& e) {
      return report_solver_failure(e, err);
    }
  }

  std::vector<CheckRow> rows;
  for (const Trajectory& traj : trajectories) {
    auto r = check_rows(*model, traj, cfg.seed);
    rows.insert(rows.end(), std::make_move_iterator(r.begin()),
                std::make_move_iterator(r.end()));
  }
  print_table(rows, out);

  bool all_pass = true;
  for (const auto& row : rows) {
    if (row.report.pass()) continue;
    all_pass = false;
    const auto [step, residual] = row.report.worst();
    err << "FAIL " << row.report.name << " (" << to_string(row.scheme)
        << ", tau=" << format_double(row.tau) << ") at step k=" << step
        << ": residual " << residual << " > slack " << row.report.slack << "\n";
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

}  // namespace gflow::cli
