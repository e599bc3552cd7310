#include "octcal/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace octcal {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  return f;
}

}  // namespace

std::string format_sig17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_signal_csv(const std::filesystem::path& path, const SampledSignal& sig) {
  auto f = open_out(path);
  f << "t_s,value\n";
  for (Eigen::Index i = 0; i < sig.size(); ++i)
    f << format_sig17(sig.times[i]) << ',' << format_sig17(sig.values[i]) << '\n';
}

SampledSignal read_signal_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
  std::string line;
  if (!std::getline(f, line) || line.rfind("t_s,value", 0) != 0)
    throw std::runtime_error("bad signal CSV header in " + path.string());
  std::vector<double> ts, vs;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("bad signal CSV row: " + line);
    ts.push_back(std::stod(line.substr(0, comma)));
    vs.push_back(std::stod(line.substr(comma + 1)));
  }
  ArrayX t = Eigen::Map<ArrayX>(ts.data(), static_cast<Eigen::Index>(ts.size()));
  ArrayX v = Eigen::Map<ArrayX>(vs.data(), static_cast<Eigen::Index>(vs.size()));
  // re-detect uniformity so round trips preserve the flag
  if (t.size() > 1) {
    const double dt = t[1] - t[0];
    bool uniform = dt > 0.0;
    for (Eigen::Index i = 2; i < t.size() && uniform; ++i)
      uniform = std::abs((t[i] - t[i - 1]) - dt) <= 1e-9 * dt;
    if (uniform) return SampledSignal::make_uniform(1.0 / dt, std::move(v), t[0]);
  }
  return SampledSignal::make(std::move(t), std::move(v));
}

void write_phase_csv(const std::filesystem::path& path, const PhaseEstimate& est) {
  auto f = open_out(path);
  const bool amp = est.amplitude.size() == est.phase.size() && est.amplitude.size() > 0;
  f << (amp ? "n,phase_rad,amplitude\n" : "n,phase_rad\n");
  for (Eigen::Index i = 0; i < est.phase.size(); ++i) {
    f << i << ',' << format_sig17(est.phase[i]);
    if (amp) f << ',' << format_sig17(est.amplitude[i]);
    f << '\n';
  }
}

void write_blocks_csv(const std::filesystem::path& path, const PhaseEstimate& est) {
  auto f = open_out(path);
  f << "block_index,omega0_rad_per_sample,d_per_sample\n";
  for (std::size_t b = 0; b < est.blocks.size(); ++b)
    f << b << ',' << format_sig17(est.blocks[b].omega0) << ','
      << format_sig17(est.blocks[b].d) << '\n';
}

void write_clock_csv(const std::filesystem::path& path, const CalibClock& clock,
                     const LevelLadder& ladder) {
  auto f = open_out(path);
  f << "event_index,t_s,level_rad_per_m\n";
  for (Eigen::Index i = 0; i < clock.events.size(); ++i)
    f << i << ',' << format_sig17(clock.events[i]) << ','
      << format_sig17(ladder.levels[clock.level_index[static_cast<std::size_t>(i)]])
      << '\n';
}

void write_scan_csv(const std::filesystem::path& path, const CalibratedScan& scan) {
  auto f = open_out(path);
  f << "k_rad_per_m,value\n";
  for (Eigen::Index i = 0; i < scan.samples.size(); ++i)
    f << format_sig17(scan.k_values[i]) << ',' << format_sig17(scan.samples[i]) << '\n';
}

void write_ascan_csv(const std::filesystem::path& path, const AScan& ascan) {
  auto f = open_out(path);
  f << "depth_m,magnitude\n";
  for (Eigen::Index i = 0; i < ascan.magnitude.size(); ++i)
    f << format_sig17(ascan.depth_axis[i]) << ',' << format_sig17(ascan.magnitude[i])
      << '\n';
}

void write_report_csv(const std::filesystem::path& path, const MetricsReport& report) {
  auto f = open_out(path);
  f << "cell,statistic,value\n";
  for (const auto& cell : report.cells) {
    std::string id;
    for (const auto& [k, v] : cell.id) {
      if (!id.empty()) id += ';';
      id += k + '=' + v;
    }
    f << id << ",mean," << format_sig17(cell.mean) << '\n';
    f << id << ",std," << format_sig17(cell.stddev) << '\n';
    f << id << ",n," << cell.values.size() << '\n';
    f << id << ",flagged," << (cell.flagged ? 1 : 0) << '\n';
  }
}

void write_svg_plot(const std::filesystem::path& path, const ArrayX& x,
                    const ArrayX& y, const std::string& title,
                    const std::string& x_label, const std::string& y_label) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("write_svg_plot: bad series");
  const double w = 640, h = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  const double xmin = x.minCoeff(), xmax = x.maxCoeff();
  const double ymin = y.minCoeff(), ymax = y.maxCoeff();
  const double xr = xmax > xmin ? xmax - xmin : 1.0;
  const double yr = ymax > ymin ? ymax - ymin : 1.0;
  auto px = [&](double v) { return ml + (v - xmin) / xr * (w - ml - mr); };
  auto py = [&](double v) { return h - mb - (v - ymin) / yr * (h - mt - mb); };

  auto f = open_out(path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
    << h << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << title << "</text>\n";
  f << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
    << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
    << h - mb << "\" stroke=\"black\"/>\n";
  f << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
    << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
  f << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
    << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
    << (mt + h - mb) / 2 << ")\">" << y_label << "</text>\n";
  for (const double frac : {0.0, 0.5, 1.0}) {
    f << "<text x=\"" << px(xmin + frac * xr) << "\" y=\"" << h - mb + 16
      << "\" text-anchor=\"middle\" font-size=\"10\">" << format_sig17(xmin + frac * xr).substr(0, 9)
      << "</text>\n";
    f << "<text x=\"" << ml - 6 << "\" y=\"" << py(ymin + frac * yr) + 4
      << "\" text-anchor=\"end\" font-size=\"10\">" << format_sig17(ymin + frac * yr).substr(0, 9)
      << "</text>\n";
  }
  f << "<polyline fill=\"none\" stroke=\"#1565c0\" stroke-width=\"1.5\" points=\"";
  for (Eigen::Index i = 0; i < x.size(); ++i) f << px(x[i]) << ',' << py(y[i]) << ' ';
  f << "\"/>\n</svg>\n";
}

}  // namespace octcal
