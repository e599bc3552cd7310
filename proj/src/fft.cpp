#include "octcal/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace octcal {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Conjugate-pair split-radix, decimation in time. The even half recurses at
// N/2; the odd quarters x[4m+1] and x[4m-1 mod N] recurse at N/4 and are
// combined with the twiddle pair (w^k, w^-k), w = exp(-2*pi*i/N).
void sr_fft(const ComplexVec& x, ComplexVec& out, OpCount* ops) {
  const std::size_t n = x.size();
  out.resize(n);
  if (n == 1) {
    out[0] = x[0];
    return;
  }
  if (n == 2) {
    out[0] = x[0] + x[1];
    out[1] = x[0] - x[1];
    if (ops) ops->adds += 4;
    return;
  }
  const std::size_t n2 = n / 2, n4 = n / 4;
  ComplexVec even(n2), o1(n4), o3(n4);
  for (std::size_t m = 0; m < n2; ++m) even[m] = x[2 * m];
  for (std::size_t m = 0; m < n4; ++m) {
    o1[m] = x[4 * m + 1];
    o3[m] = x[(4 * m + n - 1) % n];
  }
  ComplexVec u, z1, z3;
  sr_fft(even, u, ops);
  sr_fft(o1, z1, ops);
  sr_fft(o3, z3, ops);

  for (std::size_t k = 0; k < n4; ++k) {
    Complex t1, t2;
    if (k == 0) {
      t1 = z1[0];
      t2 = z3[0];
    } else if (4 * k == n2) {  // w^k = (1-i)/sqrt(2)
      t1 = Complex((z1[k].real() + z1[k].imag()) * kInvSqrt2,
                   (z1[k].imag() - z1[k].real()) * kInvSqrt2);
      t2 = Complex((z3[k].real() - z3[k].imag()) * kInvSqrt2,
                   (z3[k].imag() + z3[k].real()) * kInvSqrt2);
      if (ops) {
        ops->mults += 4;
        ops->adds += 4;
      }
    } else {
      const double ang = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
      const double c = std::cos(ang), s = std::sin(ang);
      t1 = Complex(c * z1[k].real() - s * z1[k].imag(),
                   c * z1[k].imag() + s * z1[k].real());
      t2 = Complex(c * z3[k].real() + s * z3[k].imag(),
                   c * z3[k].imag() - s * z3[k].real());
      if (ops) {
        ops->mults += 8;
        ops->adds += 4;
      }
    }
    const Complex s = t1 + t2;
    const Complex d = t1 - t2;
    const Complex jd(d.imag(), -d.real());  // -i*d, free
    out[k] = u[k] + s;
    out[k + n2] = u[k] - s;
    out[k + n4] = u[k + n4] + jd;
    out[k + 3 * n4] = u[k + n4] - jd;
    if (ops) ops->adds += 12;
  }
}

// Bluestein chirp-z for arbitrary N on top of the power-of-two path.
ComplexVec bluestein(const ComplexVec& x) {
  const std::size_t n = x.size();
  const std::size_t m = next_pow2(2 * n - 1);
  // exp(-i*pi*n^2/N) is periodic in n^2 modulo 2N; reduce before the
  // float multiply so large n keep full phase accuracy.
  auto chirp = [&](std::size_t idx) {
    const std::uint64_t q = (static_cast<std::uint64_t>(idx) * idx) %
                            (2 * static_cast<std::uint64_t>(n));
    const double ang = -kPi * static_cast<double>(q) / static_cast<double>(n);
    return Complex(std::cos(ang), std::sin(ang));
  };
  ComplexVec a(m, Complex(0, 0)), b(m, Complex(0, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const Complex c = chirp(i);
    a[i] = x[i] * c;
    b[i] = std::conj(c);
    if (i != 0) b[m - i] = std::conj(c);
  }
  ComplexVec fa, fb;
  sr_fft(a, fa, nullptr);
  sr_fft(b, fb, nullptr);
  for (std::size_t i = 0; i < m; ++i) fa[i] *= fb[i];
  // inverse of length m via conjugation
  for (auto& v : fa) v = std::conj(v);
  ComplexVec conv;
  sr_fft(fa, conv, nullptr);
  const double scale = 1.0 / static_cast<double>(m);
  ComplexVec out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = std::conj(conv[k]) * scale * chirp(k);
  return out;
}

}  // namespace

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int ilog2(std::size_t n) {
  int p = 0;
  while (n > 1) {
    n >>= 1;
    ++p;
  }
  return p;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

ComplexVec fft(ComplexVec x, OpCount* ops) {
  if (x.empty()) throw std::invalid_argument("fft: empty input");
  if (is_pow2(x.size())) {
    ComplexVec out;
    sr_fft(x, out, ops);
    return out;
  }
  if (ops) throw std::invalid_argument("fft: op counting requires power-of-two length");
  return bluestein(x);
}

ComplexVec ifft(ComplexVec x) {
  for (auto& v : x) v = std::conj(v);
  ComplexVec y = fft(std::move(x));
  const double scale = 1.0 / static_cast<double>(y.size());
  for (auto& v : y) v = std::conj(v) * scale;
  return y;
}

ComplexVec fft_real(const ArrayX& x, OpCount* ops) {
  ComplexVec cx(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) cx[static_cast<std::size_t>(i)] = Complex(x[i], 0.0);
  return fft(std::move(cx), ops);
}

}  // namespace octcal
