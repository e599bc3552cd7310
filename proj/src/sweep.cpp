#include "octcal/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace octcal {

SweepProfile SweepProfile::cubic(double k0, double a1, double a2, double a3,
                                 double t_scan) {
  if (!(t_scan > 0.0)) throw std::invalid_argument("SweepProfile: t_scan must be > 0");
  SweepProfile p{k0, a1, a2, a3, t_scan};
  // slope is quadratic; positive at both ends and at an interior vertex
  // implies positive on the whole interval.
  if (!(p.slope(0.0) > 0.0) || !(p.slope(t_scan) > 0.0))
    throw std::invalid_argument("SweepProfile: k(t) not strictly increasing");
  if (a3 != 0.0) {
    const double tv = -a2 / (3.0 * a3);
    if (tv > 0.0 && tv < t_scan && !(p.slope(tv) > 0.0))
      throw std::invalid_argument("SweepProfile: k(t) not strictly increasing");
  }
  return p;
}

SweepProfile SweepProfile::s_curve(double k0, double k_end, double t_scan,
                                   double bend) {
  if (!(k_end > k0)) throw std::invalid_argument("s_curve: k_end must exceed k0");
  if (bend < 0.0) throw std::invalid_argument("s_curve: bend must be >= 0");
  const double span = k_end - k0;
  const double g1 = 1.0 + 2.0 * bend / 3.0;
  const double a1 = span / (t_scan * g1);
  const double a2 = 2.0 * bend * span / (t_scan * t_scan * g1);
  const double a3 = -(4.0 / 3.0) * bend * span / (t_scan * t_scan * t_scan * g1);
  return cubic(k0, a1, a2, a3, t_scan);
}

double SweepProfile::eval(double t) const {
  if (t < 0.0 || t > t_scan)
    throw std::domain_error("SweepProfile::eval: t outside [0, t_scan]");
  return k0 + t * (a1 + t * (a2 + t * a3));
}

double SweepProfile::slope(double t) const {
  return a1 + t * (2.0 * a2 + t * 3.0 * a3);
}

double SweepProfile::k_end() const {
  return k0 + t_scan * (a1 + t_scan * (a2 + t_scan * a3));
}

double SweepProfile::invert(double k_target) const {
  const double klo = k_start(), khi = k_end();
  const double tol = 1e-12 * (khi - klo);
  if (k_target < klo - tol || k_target > khi + tol)
    throw std::domain_error("SweepProfile::invert: target outside sweep span");
  k_target = std::clamp(k_target, klo, khi);

  double lo = 0.0, hi = t_scan;
  double t = t_scan * (k_target - klo) / (khi - klo);  // linear first guess
  for (int it = 0; it < 200; ++it) {
    const double f = eval(t) - k_target;
    if (std::abs(f) <= tol) return t;
    if (f > 0.0)
      hi = t;
    else
      lo = t;
    const double df = slope(t);
    double tn = t - f / df;
    if (!(tn > lo) || !(tn < hi)) tn = 0.5 * (lo + hi);  // bisection safeguard
    t = tn;
  }
  return t;
}

SourceSpectrum SourceSpectrum::from_wavelength(double lambda0,
                                               double dlambda_fwhm) {
  if (!(lambda0 > 0.0) || !(dlambda_fwhm > 0.0))
    throw std::invalid_argument("SourceSpectrum: wavelengths must be > 0");
  const double kc = wavenumber(lambda0);
  const double dk = kPi * dlambda_fwhm / (std::sqrt(kLn2) * lambda0 * lambda0);
  return from_wavenumber(kc, dk);
}

SourceSpectrum SourceSpectrum::from_wavenumber(double k_center, double dk) {
  if (!(dk > 0.0)) throw std::invalid_argument("SourceSpectrum: dk must be > 0");
  if (!(k_center > dk))
    throw std::invalid_argument("SourceSpectrum: k_center must exceed dk");
  return SourceSpectrum{k_center, dk};
}

double SourceSpectrum::peak_normalized(double k) const {
  const double u = (k - k_center) / dk;
  return std::exp(-u * u);
}

double SourceSpectrum::density(double k) const {
  return peak_normalized(k) / (dk * std::sqrt(kPi));
}

MziGeometry MziGeometry::make(double dl, double c_amp) {
  if (!(dl > 0.0)) throw std::invalid_argument("MziGeometry: dl must be > 0");
  if (!(c_amp > 0.0)) throw std::invalid_argument("MziGeometry: c_amp must be > 0");
  return MziGeometry{dl, c_amp};
}

ReflectivityProfile ReflectivityProfile::make(double r_ref, double z_ref,
                                              std::vector<Reflector> reflectors) {
  if (!(r_ref > 0.0) || r_ref > 1.0)
    throw std::invalid_argument("ReflectivityProfile: need 0 < r_ref <= 1");
  for (std::size_t i = 0; i < reflectors.size(); ++i) {
    const auto& rf = reflectors[i];
    if (rf.r < 0.0 || rf.r > 1.0)
      throw std::invalid_argument("ReflectivityProfile: reflectivity outside [0, 1]");
    for (std::size_t j = i + 1; j < reflectors.size(); ++j)
      if (reflectors[j].z == rf.z)
        throw std::invalid_argument("ReflectivityProfile: duplicate reflector depth");
  }
  return ReflectivityProfile{r_ref, z_ref, std::move(reflectors)};
}

ReflectivityProfile ReflectivityProfile::mirror(double depth, double r_ref,
                                                double r_s, double z_ref) {
  return make(r_ref, z_ref, {Reflector{z_ref - depth, r_s}});
}

double coherence_length(const SourceSpectrum& spec) {
  return 2.0 * std::sqrt(kLn2) / spec.dk;
}

double coherence_length_wl(double lambda0, double dlambda_fwhm) {
  return (2.0 * kLn2 / kPi) * lambda0 * lambda0 / dlambda_fwhm;
}

double max_depth(double delta_s_k) {
  if (!(delta_s_k > 0.0)) throw std::domain_error("max_depth: spacing must be > 0");
  return kPi / (2.0 * delta_s_k);
}

double max_depth_wl(double lambda0, double ds_lambda) {
  return max_depth(delta_k_from_delta_lambda(lambda0, ds_lambda));
}

double rolloff_6db(double delta_r_k) {
  if (!(delta_r_k > 0.0)) throw std::domain_error("rolloff_6db: resolution must be > 0");
  return 2.0 * kLn2 / delta_r_k;
}

double rolloff_6db_wl(double lambda0, double dr_lambda) {
  return rolloff_6db(delta_k_from_delta_lambda(lambda0, dr_lambda));
}

}  // namespace octcal
