#include "octcal/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace octcal {

double delta_lambda_for_lc(double lambda0, double lc) {
  return (2.0 * kLn2 / kPi) * lambda0 * lambda0 / lc;
}

Config Config::defaults() { return Config{}; }

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double num(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad number for key `" + key + "`: " + v);
  }
}

}  // namespace

Config Config::from_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open " + path.string());
  Config cfg = defaults();
  std::string line, section;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config:" + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config:" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      cfg.apply(section, key, value);
    } catch (const std::exception& e) {
      throw std::runtime_error("config:" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

void Config::apply(const std::string& section, const std::string& key,
                   const std::string& value) {
  const std::string full = section.empty() ? key : section + "." + key;
  auto n = [&] { return num(value, full); };
  if (full == "source.lambda0") lambda0 = n();
  else if (full == "source.dlambda") dlambda = n();
  else if (full == "source.target_lc") target_lc = n();
  else if (full == "sweep.t_scan") t_scan = n();
  else if (full == "sweep.bend") bend = n();
  else if (full == "sweep.span_dk_factor") span_dk_factor = n();
  else if (full == "geometry.dl") dl = n();
  else if (full == "geometry.c_amp") c_amp = n();
  else if (full == "reflectors.r_ref") r_ref = n();
  else if (full == "reflectors.mirror_depth") mirror_depth = n();
  else if (full == "reflectors.mirror_r") mirror_r = n();
  else if (full == "ladder.m") ladder_m = static_cast<Eigen::Index>(n());
  else if (full == "ladder.margin") ladder_margin = n();
  else if (full == "ladder.m_c") m_c = static_cast<int>(n());
  else if (full == "adc.bits") adc_bits = static_cast<int>(n());
  else if (full == "adc.rate") adc_rate = n();
  else if (full == "adc.full_scale") adc_full_scale = n();
  else if (full == "noise.sigma_w") sigma_w = n();
  else if (full == "noise.seed") seed = static_cast<std::uint64_t>(n());
  else if (full == "pipeline.method") method = value;
  else if (full == "pipeline.interp") interp = value;
  else if (full == "pipeline.osr") osr = n();
  else if (full == "run.samples") samples = static_cast<Eigen::Index>(n());
  else if (full == "run.trials") trials = static_cast<int>(n());
  else if (full == "run.threads") threads = static_cast<int>(n());
  else throw std::runtime_error("unknown config key `" + full + "`");
}

double Config::resolved_dlambda() const {
  return dlambda > 0.0 ? dlambda : delta_lambda_for_lc(lambda0, target_lc);
}

SourceSpectrum Config::spectrum() const {
  return SourceSpectrum::from_wavelength(lambda0, resolved_dlambda());
}

SweepProfile Config::sweep() const {
  const SourceSpectrum spec = spectrum();
  const double half_span = 0.5 * span_dk_factor * spec.dk;
  return SweepProfile::s_curve(spec.k_center - half_span, spec.k_center + half_span,
                               t_scan, bend);
}

MziGeometry Config::geometry() const {
  const double k0 = sweep().k_start();
  const double fringes = std::round(dl * k0 / kTwoPi);
  return MziGeometry::make(fringes * kTwoPi / k0, c_amp);
}

ReflectivityProfile Config::reflectivity() const {
  return ReflectivityProfile::mirror(mirror_depth, r_ref, mirror_r);
}

LevelLadder Config::ladder(const SweepProfile& profile) const {
  if (m_c > 0) {
    const double dk = kTwoPi / (static_cast<double>(m_c) * geometry().dl);
    const double span = profile.span() * (1.0 - 2.0 * ladder_margin);
    const Eigen::Index m = static_cast<Eigen::Index>(std::floor(span / dk)) + 1;
    const double k_start = profile.k_start() + ladder_margin * profile.span();
    return build_ladder(k_start, k_start + dk * static_cast<double>(m - 1), m);
  }
  return interior_ladder(profile, ladder_m, ladder_margin);
}

InterpKind Config::interp_kind() const {
  if (interp == "previous") return InterpKind::Previous;
  if (interp == "next") return InterpKind::Next;
  if (interp == "linear") return InterpKind::Linear;
  if (interp == "cubic_spline" || interp == "spline") return InterpKind::CubicSpline;
  throw std::runtime_error("config: unknown interp kind `" + interp + "`");
}

std::map<std::string, std::string> Config::echo() const {
  auto s = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  return {
      {"source.lambda0", s(lambda0)},
      {"source.dlambda", s(resolved_dlambda())},
      {"source.target_lc", s(target_lc)},
      {"sweep.t_scan", s(t_scan)},
      {"sweep.bend", s(bend)},
      {"sweep.span_dk_factor", s(span_dk_factor)},
      {"geometry.dl", s(geometry().dl)},
      {"geometry.c_amp", s(c_amp)},
      {"reflectors.r_ref", s(r_ref)},
      {"reflectors.mirror_depth", s(mirror_depth)},
      {"reflectors.mirror_r", s(mirror_r)},
      {"ladder.m", std::to_string(ladder_m)},
      {"ladder.margin", s(ladder_margin)},
      {"ladder.m_c", std::to_string(m_c)},
      {"adc.bits", std::to_string(adc_bits)},
      {"adc.rate", s(adc_rate)},
      {"adc.full_scale", s(adc_full_scale)},
      {"noise.sigma_w", s(sigma_w)},
      {"noise.seed", std::to_string(seed)},
      {"pipeline.method", method},
      {"pipeline.interp", interp},
      {"pipeline.osr", s(osr)},
      {"run.samples", std::to_string(samples)},
      {"run.trials", std::to_string(trials)},
      {"run.threads", std::to_string(threads)},
  };
}

}  // namespace octcal
