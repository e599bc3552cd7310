#pragma once

#include <utility>
#include <vector>

#include "octcal/types.hpp"

namespace octcal {

/// Cubic wavenumber-vs-time law of the swept laser,
/// k(t) = k0 + a1*t + a2*t^2 + a3*t^3, strictly increasing on [0, t_scan].
struct SweepProfile {
  double k0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double t_scan = 0.0;

  /// Validates positivity of the slope over the whole scan; throws
  /// std::invalid_argument otherwise.
  static SweepProfile cubic(double k0, double a1, double a2, double a3,
                            double t_scan);

  /// S-shaped sweep covering [k0, k_end]: slope proportional to
  /// 1 + 4*bend*(tau - tau^2), slow at the ends, fastest mid-scan.
  /// bend = 0 is a linear sweep.
  static SweepProfile s_curve(double k0, double k_end, double t_scan,
                              double bend);

  double eval(double t) const;   // domain error outside [0, t_scan]
  double slope(double t) const;  // dk/dt
  double k_start() const { return k0; }
  double k_end() const;
  double span() const { return k_end() - k0; }

  /// Unique t with k(t) = k_target, safeguarded Newton with bisection
  /// fallback; |k(t) - k_target| <= 1e-12 * span(). Domain error outside
  /// [k_start, k_end].
  double invert(double k_target) const;
};

/// Gaussian source spectrum; dk is the 1/e half-width in wavenumber.
struct SourceSpectrum {
  double k_center = 0.0;
  double dk = 0.0;

  /// dlambda_fwhm is the FWHM of the wavelength spectrum; the equivalent
  /// 1/e k half-width is pi*dlambda/(sqrt(ln 2)*lambda0^2), which makes the
  /// wavelength form of the coherence length exact.
  static SourceSpectrum from_wavelength(double lambda0, double dlambda_fwhm);
  static SourceSpectrum from_wavenumber(double k_center, double dk);

  /// exp(-((k-kc)/dk)^2), peak 1; the shape used inside waveforms.
  double peak_normalized(double k) const;
  /// Unit-integral density, prefactor 1/(dk*sqrt(pi)).
  double density(double k) const;
};

struct MziGeometry {
  double dl = 0.0;     // path-length difference l2 - l1, m
  double c_amp = 1.0;  // amplitude constant C

  static MziGeometry make(double dl, double c_amp = 1.0);
};

struct Reflector {
  double z = 0.0;  // distance from the coupler, m
  double r = 0.0;  // power reflectivity
};

/// Reference mirror plus discrete sample reflectors. A reflector at
/// z == z_ref is permitted; it contributes a DC-adjacent term.
struct ReflectivityProfile {
  double r_ref = 1.0;
  double z_ref = 0.0;
  std::vector<Reflector> reflectors;

  static ReflectivityProfile make(double r_ref, double z_ref,
                                  std::vector<Reflector> reflectors = {});
  /// Reference plus one mirror offset `depth` from the reference arm.
  static ReflectivityProfile mirror(double depth, double r_ref = 1.0,
                                    double r_s = 1.0, double z_ref = 0.0);
};

/// Axial resolution l_c = 2*sqrt(ln 2)/dk.
double coherence_length(const SourceSpectrum& spec);
/// Wavelength form, (2*ln 2/pi)*lambda0^2/dlambda.
double coherence_length_wl(double lambda0, double dlambda_fwhm);

/// Maximum unambiguous depth z_max = pi/(2*delta_s_k).
double max_depth(double delta_s_k);
double max_depth_wl(double lambda0, double ds_lambda);

/// -6 dB sensitivity roll-off depth, 2*ln 2/delta_r_k.
double rolloff_6db(double delta_r_k);
double rolloff_6db_wl(double lambda0, double dr_lambda);

}  // namespace octcal
