#include "gflow_cli/output.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gflow::cli {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf.data(), ptr);
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  static std::atomic<unsigned> counter{0};
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ostringstream suffix;
  suffix << ".tmp-" << std::hash<std::thread::id>{}(std::this_thread::get_id())
         << "-" << counter.fetch_add(1);
  std::filesystem::path tmp = path;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string trajectory_csv(const FlowModel& model, const Trajectory& traj) {
  std::string out = "k,t";
  const Eigen::Index dim = traj.states.empty() ? 0 : traj.states.front().size();
  for (Eigen::Index i = 0; i < dim; ++i) out += ",state_" + std::to_string(i);
  out += ",energy,step_distance\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Point& u = traj.states[k];
    out += std::to_string(k);
    out += ',';
    out += format_double(traj.time(k));
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      out += ',';
      out += format_double(u[i]);
    }
    out += ',';
    out += format_double(model.energy(u));
    out += ',';
    out += format_double(k == 0 ? 0.0 : model.distance(traj.states[k - 1], u));
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": invalid number '" + cell + "'");
  }
  return v;
}

}  // namespace

Trajectory read_trajectory_csv(const std::filesystem::path& path, Scheme scheme) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trajectory file");
  const auto header = split_csv_line(line);
  if (header.size() < 5 || header[0] != "k" || header[1] != "t" ||
      header[header.size() - 2] != "energy" ||
      header.back() != "step_distance") {
    throw std::runtime_error("unexpected trajectory header in " + path.string());
  }
  const std::size_t dim = header.size() - 4;

  Trajectory traj;
  traj.scheme = scheme;
  std::vector<double> times;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected " + std::to_string(header.size()) +
                               " columns");
    }
    times.push_back(parse_cell(cells[1], line_no));
    Point u(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      u[static_cast<Eigen::Index>(i)] = parse_cell(cells[2 + i], line_no);
    }
    traj.states.push_back(std::move(u));
  }
  if (traj.states.size() < 2) {
    throw std::runtime_error("trajectory file needs at least two states");
  }
  traj.tau = times[1] - times[0];
  if (!(traj.tau > 0.0)) throw std::runtime_error("non-increasing time column");
  traj.horizon = times.back();
  return traj;
}

std::string trajectory_file_name(const std::string& space, Scheme scheme,
                                 double tau) {
  return space + "_" + std::string(to_string(scheme)) + "_tau" +
         format_double(tau) + ".csv";
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 220.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                         "#9467bd", "#ff7f0e", "#17becf"};

std::string fixed(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << v;
  return s.str();
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string loglog_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<ChartSeries>& series) {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = ymin = 1e-3;
    xmax = ymax = 1.0;
  }
  const double lx0 = std::floor(std::log10(xmin));
  const double lx1 = std::max(std::ceil(std::log10(xmax)), lx0 + 1);
  const double ly0 = std::floor(std::log10(ymin));
  const double ly1 = std::max(std::ceil(std::log10(ymax)), ly0 + 1);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto px = [&](double x) {
    return kLeft + (std::log10(x) - lx0) / (lx1 - lx0) * plot_w;
  };
  const auto py = [&](double y) {
    return kTop + (ly1 - std::log10(y)) / (ly1 - ly0) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"24\" "
      << "text-anchor=\"middle\" font-size=\"14\">" << escape(title)
      << "</text>\n";

  for (double e = lx0; e <= lx1; e += 1.0) {
    const double x = kLeft + (e - lx0) / (lx1 - lx0) * plot_w;
    svg << "<line x1=\"" << fixed(x) << "\" y1=\"" << kTop << "\" x2=\""
        << fixed(x) << "\" y2=\"" << kTop + plot_h
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << fixed(x) << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\">1e" << static_cast<int>(e)
        << "</text>\n";
  }
  for (double e = ly0; e <= ly1; e += 1.0) {
    const double y = kTop + (ly1 - e) / (ly1 - ly0) * plot_h;
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << fixed(y) << "\" x2=\""
        << kLeft + plot_w << "\" y2=\"" << fixed(y)
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fixed(y + 4)
        << "\" text-anchor=\"end\">1e" << static_cast<int>(e) << "</text>\n";
  }
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  svg << "<text x=\"20\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << kTop + plot_h / 2 << ")\">" << escape(y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % kColors.size()];
    std::ostringstream points;
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      const double x = series[s].x[i];
      const double y = series[s].y[i];
      if (!(x > 0.0) || !(y > 0.0)) continue;
      points << fixed(px(x)) << "," << fixed(py(y)) << " ";
      svg << "<circle cx=\"" << fixed(px(x)) << "\" cy=\"" << fixed(py(y))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    svg << "<polyline points=\"" << points.str() << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"1.5\"/>\n";
    const double ly = kTop + 16 + 20.0 * static_cast<double>(s);
    const double lx = kLeft + plot_w + 16;
    svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24
        << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">"
        << escape(series[s].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace gflow::cli
