#include "octcal/demod.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "octcal/fft.hpp"

namespace octcal {

namespace {

using Matrix5 = Eigen::Matrix<double, 5, 5>;
using Vector5 = Eigen::Matrix<double, 5, 1>;
using Matrix4 = Eigen::Matrix<double, 4, 4>;
using Vector4 = Eigen::Matrix<double, 4, 1>;

// Range-reduced Taylor kernels for the per-sample Kalman innovations; the
// series through y^22/y^23 keeps |err| < 2e-12 over a full period, far below
// any measurement noise handled here, at a fraction of the libm latency.
inline double reduce_pm_pi(double x) {
  constexpr double two_pi_hi = 6.283185307179586;
  constexpr double two_pi_lo = 2.4492935982947064e-16;
  const double q = std::nearbyint(x * (1.0 / kTwoPi));
  return (x - q * two_pi_hi) - q * two_pi_lo;
}

inline double fast_cos(double x) {
  const double y = reduce_pm_pi(x);
  const double y2 = y * y;
  static constexpr double c[14] = {
      1.0,
      -1.0 / 2.0,
      1.0 / 24.0,
      -1.0 / 720.0,
      1.0 / 40320.0,
      -1.0 / 3628800.0,
      1.0 / 479001600.0,
      -1.0 / 87178291200.0,
      1.0 / 20922789888000.0,
      -1.0 / 6402373705728000.0,
      1.0 / 2432902008176640000.0,
      -1.0 / 1124000727777607680000.0,
      1.0 / 620448401733239439360000.0,
      -1.0 / 403291461126605635584000000.0,
  };
  double acc = c[13];
  for (int i = 12; i >= 0; --i) acc = c[i] + acc * y2;
  return acc;
}

// Lockstep evaluation over the sigma points: independent Horner chains let
// the compiler interleave/vectorize them, which a one-at-a-time loop cannot.
template <int N>
inline void fast_cos_batch(const double* x, double* out) {
  static constexpr double c[14] = {
      1.0,
      -1.0 / 2.0,
      1.0 / 24.0,
      -1.0 / 720.0,
      1.0 / 40320.0,
      -1.0 / 3628800.0,
      1.0 / 479001600.0,
      -1.0 / 87178291200.0,
      1.0 / 20922789888000.0,
      -1.0 / 6402373705728000.0,
      1.0 / 2432902008176640000.0,
      -1.0 / 1124000727777607680000.0,
      1.0 / 620448401733239439360000.0,
      -1.0 / 403291461126605635584000000.0,
  };
  double y2[N];
  for (int j = 0; j < N; ++j) {
    const double y = reduce_pm_pi(x[j]);
    y2[j] = y * y;
    out[j] = c[13];
  }
  for (int t = 12; t >= 0; --t)
    for (int j = 0; j < N; ++j) out[j] = c[t] + out[j] * y2[j];
}

inline void fast_sincos(double x, double& sn, double& cs) {
  const double y = reduce_pm_pi(x);
  const double y2 = y * y;
  static constexpr double sc[14] = {
      1.0,
      -1.0 / 6.0,
      1.0 / 120.0,
      -1.0 / 5040.0,
      1.0 / 362880.0,
      -1.0 / 39916800.0,
      1.0 / 6227020800.0,
      -1.0 / 1307674368000.0,
      1.0 / 355687428096000.0,
      -1.0 / 121645100408832000.0,
      1.0 / 51090942171709440000.0,
      -1.0 / 25852016738884976640000.0,
      1.0 / 15511210043330985984000000.0,
      -1.0 / 10888869450418352160768000000.0,
  };
  double acc = sc[13];
  for (int i = 12; i >= 0; --i) acc = sc[i] + acc * y2;
  sn = y * acc;
  cs = fast_cos(x);
}

void require_uniform(const SampledSignal& s, const char* who) {
  if (!s.uniform)
    throw std::invalid_argument(std::string(who) + ": nonuniform input");
}

}  // namespace

ArrayX unwrap_phase(const ArrayX& wrapped) {
  ArrayX out(wrapped.size());
  if (wrapped.size() == 0) return out;
  out[0] = wrapped[0];
  for (Eigen::Index i = 1; i < wrapped.size(); ++i) {
    double d = wrapped[i] - wrapped[i - 1];
    d -= kTwoPi * std::round(d / kTwoPi);
    out[i] = out[i - 1] + d;
  }
  return out;
}

PhaseEstimate hilbert_phase(const SampledSignal& mzi) {
  require_uniform(mzi, "hilbert_phase");
  const Eigen::Index n = mzi.size();
  if (n < 16) throw std::invalid_argument("hilbert_phase: need at least 16 samples");
  const double spread = mzi.values.maxCoeff() - mzi.values.minCoeff();
  if (!(spread > 1e-12 * std::max(1.0, mzi.values.abs().maxCoeff())))
    throw std::domain_error("hilbert_phase: degenerate (constant) input");

  ComplexVec spec = fft_real(mzi.values);
  const std::size_t un = spec.size();
  const std::size_t half = un / 2;
  for (std::size_t i = 1; i < (un + 1) / 2; ++i) spec[i] *= 2.0;
  for (std::size_t i = half + 1; i < un; ++i) spec[i] = Complex(0, 0);
  ComplexVec analytic = ifft(std::move(spec));

  PhaseEstimate est;
  ArrayX wrapped(n);
  est.amplitude.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& a = analytic[static_cast<std::size_t>(i)];
    wrapped[i] = std::atan2(a.imag(), a.real());
    est.amplitude[i] = std::abs(a);
  }
  est.phase = unwrap_phase(wrapped);
  return est;
}

EnvelopeResult envelope_equalize(const SampledSignal& mzi) {
  require_uniform(mzi, "envelope_equalize");
  const Eigen::Index n = mzi.size();
  const ArrayX& x = mzi.values;
  ArrayX env(n), eq(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - 3);
    for (Eigen::Index j = lo; j <= i; ++j) acc += x[j] * x[j];
    acc /= static_cast<double>(i - lo + 1);
    env[i] = std::sqrt(std::max(0.0, 2.0 * acc));
  }

  const double eps = 1e-3 * env.maxCoeff();
  Eigen::Index below = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (env[i] < eps) ++below;
    const double xd = x[std::max<Eigen::Index>(0, i - 4)];
    eq[i] = xd / std::max(env[i], eps);
  }

  EnvelopeResult r;
  r.envelope = mzi;
  r.envelope.values = std::move(env);
  r.equalized = mzi;
  r.equalized.values = std::move(eq);
  r.low_signal = below * 100 > n;
  return r;
}

PhaseEstimate envelope_phase(const SampledSignal& equalized) {
  const Eigen::Index n = equalized.size();
  if (n < 3) throw std::invalid_argument("envelope_phase: too short");
  const ArrayX& x = equalized.values;
  auto base = [&](Eigen::Index i) {
    return std::acos(std::min(1.0, std::max(-1.0, x[i])));
  };

  PhaseEstimate est;
  est.phase.resize(n);
  // pick the initial branch so the phase increases: cos falls on (0, pi)
  est.phase[0] = (x[1] <= x[0]) ? base(0) : kTwoPi - base(0);
  constexpr double tol = 1e-9;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double b = base(i);
    const double prev = est.phase[i - 1] - tol;
    const double j1 = std::ceil((prev - b) / kTwoPi);
    const double j2 = std::ceil((prev + b) / kTwoPi);
    est.phase[i] = std::min(kTwoPi * j1 + b, kTwoPi * j2 - b);
  }
  return est;
}

PhaseEstimate ekf_estimate(const SampledSignal& mzi, const EkfParams& p,
                           std::vector<Eigen::Matrix<double, 5, 5>>* covariance_trace) {
  require_uniform(mzi, "ekf_estimate");
  const Eigen::Index n = mzi.size();

  Matrix5 F = Matrix5::Identity();
  F(1, 2) = 1.0;
  F(1, 3) = 1.0 / 2.0;
  F(1, 4) = 1.0 / 6.0;
  F(2, 3) = 1.0;
  F(2, 4) = 1.0 / 2.0;
  F(3, 4) = 1.0;

  Matrix5 V = Matrix5::Zero();
  V(0, 0) = p.sigma_na * p.sigma_na;
  const double q = p.sigma_nk * p.sigma_nk;
  const double pattern[4][4] = {
      {1, 1, 1, 1}, {1, 2, 3, 4}, {1, 3, 6, 10}, {1, 4, 10, 20}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) V(i + 1, j + 1) = q * pattern[i][j];

  Vector5 x = p.x0;
  Matrix5 P = p.p0_diag.asDiagonal();
  const double r = p.sigma_w * p.sigma_w;

  PhaseEstimate est;
  est.phase.resize(n);
  est.amplitude.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector5 xp = F * x;
    Matrix5 Pp = F * P * F.transpose() + V;

    double s, c;
    fast_sincos(xp(1), s, c);
    Eigen::Matrix<double, 1, 5> H;
    H << c, -xp(0) * s, 0.0, 0.0, 0.0;

    const double innov_var = (H * Pp * H.transpose())(0, 0) + r;
    const Vector5 K = Pp * H.transpose() / innov_var;
    x = xp + K * (mzi.values[i] - xp(0) * c);
    P = (Matrix5::Identity() - K * H) * Pp;
    P = 0.5 * (P + P.transpose()).eval();

    if (!x.allFinite())
      throw std::runtime_error("ekf_estimate: diverged at sample " +
                               std::to_string(i));
    est.amplitude[i] = x(0);
    est.phase[i] = x(1);
    if (covariance_trace) covariance_trace->push_back(P);
  }
  return est;
}

PhaseEstimate ukf_estimate(const SampledSignal& mzi, const UkfParams& p,
                           MatrixX* state_trace) {
  require_uniform(mzi, "ukf_estimate");
  const Eigen::Index n = mzi.size();
  constexpr int L = 4;
  const double lambda = p.alpha * p.alpha * (L + p.kappa) - L;
  const double gamma = std::sqrt(L + lambda);
  const double w0m = lambda / (L + lambda);
  const double w0c = w0m + (1.0 - p.alpha * p.alpha + p.beta);
  const double wi = 1.0 / (2.0 * (L + lambda));

  // Work in normalized time tau = (t - t0)/T so the polynomial states share
  // a common magnitude; user-facing coefficients stay in seconds.
  const double t0 = mzi.times[0];
  const double T = mzi.times[n - 1] - t0;
  auto to_internal = [&](const Vector4& si) {
    return Vector4(si(0), si(1) * T * T * T, si(2) * T * T, si(3) * T);
  };

  Vector4 x = to_internal(p.x0);
  Matrix4 P = p.p0_diag.asDiagonal();
  Matrix4 V = Matrix4::Zero();
  V(0, 0) = p.sigma_a * p.sigma_a;
  V(1, 1) = std::pow(p.sigma_poly(0) * T * T * T, 2);
  V(2, 2) = std::pow(p.sigma_poly(1) * T * T, 2);
  V(3, 3) = std::pow(p.sigma_poly(2) * T, 2);
  const double r = p.sigma_w * p.sigma_w;

  PhaseEstimate est;
  est.phase.resize(n);
  est.amplitude.resize(n);
  if (state_trace) state_trace->resize(n, 4);

  // The step runs on flat scalars: a 4-state UKF spends its time in the
  // Cholesky factor, eight axpy columns and nine scalar innovations, all
  // small enough that matrix-expression overhead would dominate them. P is
  // symmetric throughout and kept as its ten unique entries.
  double p00 = P(0, 0), p01 = P(0, 1), p02 = P(0, 2), p03 = P(0, 3);
  double p11 = P(1, 1), p12 = P(1, 2), p13 = P(1, 3);
  double p22 = P(2, 2), p23 = P(2, 3), p33 = P(3, 3);
  double x0 = x(0), x1 = x(1), x2 = x(2), x3 = x(3);
  const double v00 = V(0, 0), v11 = V(1, 1), v22 = V(2, 2), v33 = V(3, 3);
  double S00, S10, S11, S20, S21, S22, S30, S31, S32, S33;
  double chi0[9], chi1[9], chi2[9], chi3[9], ys[9];

  for (Eigen::Index i = 0; i < n; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (p00 > 0.0) {
        S00 = std::sqrt(p00);
        const double i0 = 1.0 / S00;
        S10 = p01 * i0;
        S20 = p02 * i0;
        S30 = p03 * i0;
        const double d1 = p11 - S10 * S10;
        if (d1 > 0.0) {
          S11 = std::sqrt(d1);
          const double i1 = 1.0 / S11;
          S21 = (p12 - S20 * S10) * i1;
          S31 = (p13 - S30 * S10) * i1;
          const double d2 = p22 - S20 * S20 - S21 * S21;
          if (d2 > 0.0) {
            S22 = std::sqrt(d2);
            S32 = (p23 - S30 * S20 - S31 * S21) / S22;
            const double d3 = p33 - S30 * S30 - S31 * S31 - S32 * S32;
            if (d3 > 0.0) {
              S33 = std::sqrt(d3);
              break;
            }
          }
        }
      }
      if (attempt > 0)
        throw std::runtime_error("ukf_estimate: Cholesky failure at sample " +
                                 std::to_string(i));
      p00 += 1e-12;
      p11 += 1e-12;
      p22 += 1e-12;
      p33 += 1e-12;
    }

    const double g = gamma;
    chi0[0] = x0; chi1[0] = x1; chi2[0] = x2; chi3[0] = x3;
    chi0[1] = x0 + g * S00; chi1[1] = x1 + g * S10; chi2[1] = x2 + g * S20; chi3[1] = x3 + g * S30;
    chi0[2] = x0;           chi1[2] = x1 + g * S11; chi2[2] = x2 + g * S21; chi3[2] = x3 + g * S31;
    chi0[3] = x0;           chi1[3] = x1;           chi2[3] = x2 + g * S22; chi3[3] = x3 + g * S32;
    chi0[4] = x0;           chi1[4] = x1;           chi2[4] = x2;           chi3[4] = x3 + g * S33;
    for (int j = 1; j <= 4; ++j) {
      chi0[4 + j] = 2.0 * x0 - chi0[j];
      chi1[4 + j] = 2.0 * x1 - chi1[j];
      chi2[4 + j] = 2.0 * x2 - chi2[j];
      chi3[4 + j] = 2.0 * x3 - chi3[j];
    }

    // f is the identity, so the propagated mean is x and the sigma-point
    // spread reconstructs P exactly: the time update reduces to P += V.
    p00 += v00;
    p11 += v11;
    p22 += v22;
    p33 += v33;

    const double tau = (mzi.times[i] - t0) / T;
    // sigma phases are ph0 +- b_j with b_j = gamma * (S-column dotted with
    // the tau powers); once the filter settles the deviations are far below
    // a milliradian, where a 3-term series is exact to 1e-12 and only the
    // center point needs a full range reduction.
    const double ph0 = tau * (chi3[0] + tau * (chi2[0] + tau * chi1[0]));
    const double b0 = g * (tau * (S30 + tau * (S20 + tau * S10)));
    const double b1 = g * (tau * (S31 + tau * (S21 + tau * S11)));
    const double b2 = g * (tau * (S32 + tau * S22));
    const double b3 = g * (tau * S33);
    const double bmax = std::max(std::max(std::abs(b0), std::abs(b1)),
                                 std::max(std::abs(b2), std::abs(b3)));
    if (bmax <= 1e-2) {
      double sn0, cs0;
      fast_sincos(ph0, sn0, cs0);
      ys[0] = chi0[0] * cs0;
      const double bs[4] = {b0, b1, b2, b3};
      for (int j = 0; j < 4; ++j) {
        const double b2_ = bs[j] * bs[j];
        const double cb = 1.0 + b2_ * (-0.5 + b2_ * (1.0 / 24.0 - b2_ / 720.0));
        const double sb =
            bs[j] * (1.0 + b2_ * (-1.0 / 6.0 + b2_ * (1.0 / 120.0 - b2_ / 5040.0)));
        const double cp = cs0 * cb - sn0 * sb;
        const double cm = cs0 * cb + sn0 * sb;
        ys[1 + j] = chi0[1 + j] * cp;
        ys[5 + j] = chi0[5 + j] * cm;
      }
    } else {
      double ph[9], cs[9];
      for (int j = 0; j < 9; ++j)
        ph[j] = tau * (chi3[j] + tau * (chi2[j] + tau * chi1[j]));
      fast_cos_batch<9>(ph, cs);
      for (int j = 0; j < 9; ++j) ys[j] = chi0[j] * cs[j];
    }
    double ym = w0m * ys[0];
    for (int j = 1; j < 9; ++j) ym += wi * ys[j];

    double pyy = r + w0c * (ys[0] - ym) * (ys[0] - ym);
    for (int j = 1; j < 9; ++j) {
      const double dy = ys[j] - ym;
      pyy += wi * dy * dy;
    }
    // chi_j - x = +-gamma * S e_j, so P_xy collapses to a triangular product
    const double wg = wi * g;
    const double q0 = wg * (ys[1] - ys[5]);
    const double q1 = wg * (ys[2] - ys[6]);
    const double q2 = wg * (ys[3] - ys[7]);
    const double q3 = wg * (ys[4] - ys[8]);
    const double px0 = S00 * q0;
    const double px1 = S10 * q0 + S11 * q1;
    const double px2 = S20 * q0 + S21 * q1 + S22 * q2;
    const double px3 = S30 * q0 + S31 * q1 + S32 * q2 + S33 * q3;

    const double inv = 1.0 / pyy;
    const double K0 = px0 * inv, K1 = px1 * inv, K2 = px2 * inv, K3 = px3 * inv;
    const double innov = mzi.values[i] - ym;
    x0 += K0 * innov;
    x1 += K1 * innov;
    x2 += K2 * innov;
    x3 += K3 * innov;
    // K*K^T is symmetric to the bit, so P stays symmetric without repair
    p00 -= pyy * K0 * K0;
    p01 -= pyy * K0 * K1;
    p02 -= pyy * K0 * K2;
    p03 -= pyy * K0 * K3;
    p11 -= pyy * K1 * K1;
    p12 -= pyy * K1 * K2;
    p13 -= pyy * K1 * K3;
    p22 -= pyy * K2 * K2;
    p23 -= pyy * K2 * K3;
    p33 -= pyy * K3 * K3;

    if (!(std::isfinite(x0) && std::isfinite(x1) && std::isfinite(x2) &&
          std::isfinite(x3)))
      throw std::runtime_error("ukf_estimate: diverged at sample " +
                               std::to_string(i));
    est.amplitude[i] = x0;
    est.phase[i] = tau * (x3 + tau * (x2 + tau * x1));
    if (state_trace)
      state_trace->row(i) << x0, x1 / (T * T * T), x2 / (T * T), x3 / T;
  }
  return est;
}

ArrayX window_gen(WindowKind kind, Eigen::Index P, int order) {
  if (P < 8) throw std::invalid_argument("window_gen: P must be >= 8");
  ArrayX w(P);
  switch (kind) {
    case WindowKind::Rectangular:
      w.setOnes();
      return w;
    case WindowKind::Hann:
      order = 1;
      [[fallthrough]];
    case WindowKind::RvciOrderO: {
      if (order < 0) throw std::invalid_argument("window_gen: order must be >= 0");
      if (order == 0) {
        w.setOnes();
        return w;
      }
      for (Eigen::Index i = 0; i < P; ++i)
        w[i] = std::pow(std::sin(kPi * static_cast<double>(i) / static_cast<double>(P)),
                        2.0 * order);
      return w;
    }
    case WindowKind::Hamming:
      for (Eigen::Index i = 0; i < P; ++i)
        w[i] = 0.54 - 0.46 * std::cos(kTwoPi * static_cast<double>(i) /
                                      static_cast<double>(P));
      return w;
  }
  throw std::invalid_argument("window_gen: unsupported kind");
}

namespace {

struct BlockFit {
  double omega0 = 0.0;
  double d = 0.0;
};

// Invert the ratio of 3-bin second differences around the peak. A second
// difference in frequency equals a Hann-weighted transform in time, so for
// the damped-cisoid block model the ratio is an exact rational function of
// u = pole * W^K; that gives a quadratic with one root near the unit circle.
BlockFit by2_fit(const ComplexVec& bins, Eigen::Index P, Eigen::Index K) {
  auto D = [&](Eigen::Index k) {
    return bins[static_cast<std::size_t>(k - 1)] -
           2.0 * bins[static_cast<std::size_t>(k)] +
           bins[static_cast<std::size_t>(k + 1)];
  };
  const Complex W = std::polar(1.0, -kTwoPi / static_cast<double>(P));
  const bool left = std::abs(bins[static_cast<std::size_t>(K - 1)]) >=
                    std::abs(bins[static_cast<std::size_t>(K + 1)]);
  Complex a2, a1, a0;
  if (left) {
    const Complex denom = D(K);
    if (std::abs(denom) < 1e-300)
      throw std::runtime_error("ipdft_estimate: degenerate second-difference ratio");
    const Complex R = D(K - 1) / denom;
    a2 = -1.0 / W + R / (W * W);
    a1 = (1.0 / (W * W) - 1.0) - R * (1.0 - 1.0 / (W * W));
    a0 = 1.0 / W - R;
  } else {
    const Complex denom = D(K + 1);
    if (std::abs(denom) < 1e-300)
      throw std::runtime_error("ipdft_estimate: degenerate second-difference ratio");
    const Complex R = D(K) / denom;
    a2 = -W * W + R * W;
    a1 = (1.0 - W * W) - R * (W * W - 1.0);
    a0 = 1.0 - R * W;
  }
  const Complex disc = std::sqrt(a1 * a1 - 4.0 * a2 * a0);
  const Complex u1 = (-a1 + disc) / (2.0 * a2);
  const Complex u2 = (-a1 - disc) / (2.0 * a2);
  auto badness = [](const Complex& u) {
    return std::abs(std::abs(u) - 1.0) + std::abs(std::arg(u));
  };
  const Complex u = badness(u1) <= badness(u2) ? u1 : u2;
  const Complex pole = u * std::polar(1.0, kTwoPi * static_cast<double>(K) /
                                               static_cast<double>(P));
  BlockFit fit;
  fit.omega0 = std::arg(pole);
  fit.d = -std::log(std::abs(pole));
  return fit;
}

BlockFit rvci_fit(const ComplexVec& bins, Eigen::Index P, Eigen::Index K, int O) {
  const double mk = std::norm(bins[static_cast<std::size_t>(K)]);
  if (mk < 1e-300)
    throw std::runtime_error("ipdft_estimate: degenerate peak-bin ratio");
  const double R1 = std::norm(bins[static_cast<std::size_t>(K + 1)]) / mk;
  const double R2 = std::norm(bins[static_cast<std::size_t>(K - 1)]) / mk;
  const double denom = 2.0 * (O + 1) * R1 * R2 - R1 - R2 - 2.0 * O;
  if (std::abs(denom) < 1e-300)
    throw std::runtime_error("ipdft_estimate: degenerate RVCI ratio");
  const double delta = -0.5 * (2.0 * O + 1) * (R1 - R2) / denom;
  double rad;
  if (delta >= 0.0)
    rad = ((delta + O) * (delta + O) - R1 * (delta - O - 1) * (delta - O - 1)) /
          (R1 - 1.0);
  else
    rad = ((delta - O) * (delta - O) - R2 * (delta + O + 1) * (delta + O + 1)) /
          (R2 - 1.0);
  BlockFit fit;
  fit.omega0 = (static_cast<double>(K) + delta) * kTwoPi / static_cast<double>(P);
  fit.d = (kTwoPi / static_cast<double>(P)) * std::sqrt(std::max(0.0, rad));
  return fit;
}

}  // namespace

PhaseEstimate ipdft_estimate(const SampledSignal& mzi, const IpdftParams& p) {
  require_uniform(mzi, "ipdft_estimate");
  const Eigen::Index P = p.block_len;
  if (P < 8 || !is_pow2(static_cast<std::size_t>(P)))
    throw std::invalid_argument("ipdft_estimate: block_len must be a power of two >= 8");
  int order = p.order;
  if (p.method == IpdftMethod::BY2) {
    if (p.window != WindowKind::Rectangular)
      throw std::invalid_argument("ipdft_estimate: BY2 requires the rectangular window");
    order = 0;
  } else {
    if (p.window == WindowKind::Hann) order = 1;
    if (order < 1)
      throw std::invalid_argument("ipdft_estimate: RVCI requires order >= 1");
  }
  const Eigen::Index nblocks = mzi.size() / P;
  if (nblocks < 1) throw std::invalid_argument("ipdft_estimate: signal shorter than one block");

  const ArrayX w = window_gen(p.window, P, order);

  PhaseEstimate est;
  est.phase.resize(nblocks * P);
  est.blocks.reserve(static_cast<std::size_t>(nblocks));

  double phase_base = 0.0;
  for (Eigen::Index b = 0; b < nblocks; ++b) {
    ArrayX blk = mzi.values.segment(b * P, P) * w;
    ComplexVec bins = fft_real(blk);

    Eigen::Index K = 0;
    double best = -1.0;
    for (Eigen::Index k = 0; k <= P / 2; ++k) {
      const double m = std::abs(bins[static_cast<std::size_t>(k)]);
      if (m > best) {
        best = m;
        K = k;
      }
    }
    if (K < 2 || K > P / 2 - 2)
      throw std::runtime_error("ipdft_estimate: peak at edge bin " + std::to_string(K) +
                               " in block " + std::to_string(b));

    const BlockFit fit = p.method == IpdftMethod::BY2 ? by2_fit(bins, P, K)
                                                      : rvci_fit(bins, P, K, order);
    est.blocks.push_back({b * P, fit.omega0, fit.d});
    for (Eigen::Index i = 0; i < P; ++i)
      est.phase[b * P + i] = phase_base + fit.omega0 * static_cast<double>(i);
    phase_base += fit.omega0 * static_cast<double>(P);
  }
  return est;
}

OpCountReport count_ops(CountMethod method, Eigen::Index H, Eigen::Index L,
                        Eigen::Index P) {
  OpCountReport r;
  if (method == CountMethod::HilbertFir) {
    if (H < 1 || L < 1) throw std::invalid_argument("count_ops: H and L must be positive");
    r.adds = static_cast<double>(H);
    r.mults = static_cast<double>(H);
    r.total = 2.0 * static_cast<double>(H) * static_cast<double>(L);
    r.latency = static_cast<double>(H);
    return r;
  }
  if (P < 2 || !is_pow2(static_cast<std::size_t>(P)) || L < 1)
    throw std::invalid_argument("count_ops: P must be a positive power of two");
  const double lg = static_cast<double>(ilog2(static_cast<std::size_t>(P)));
  const double sign = (static_cast<int>(lg) % 2 == 0) ? 1.0 : -1.0;
  const double Pd = static_cast<double>(P);
  r.adds = Pd * (4.0 / 3.0 * lg - 8.0 / 9.0) - sign / 9.0;
  r.mults = Pd * (2.0 / 3.0 * lg - 19.0 / 9.0) + sign / 9.0;
  r.total = (static_cast<double>(L) / Pd) * (2.0 * Pd * lg - 3.0 * Pd);
  r.latency = lg;
  return r;
}

}  // namespace octcal
