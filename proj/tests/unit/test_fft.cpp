#include <doctest.h>

#include <cmath>

#include "octcal/fft.hpp"
#include "octcal/rng.hpp"

using namespace octcal;

namespace {

// quadratic-time DFT oracle
ComplexVec naive_dft(const ComplexVec& x) {
  const std::size_t n = x.size();
  ComplexVec out(n, Complex(0, 0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m)
      out[k] += x[m] * std::polar(1.0, -kTwoPi * double(m) * double(k) / double(n));
  return out;
}

ComplexVec random_signal(std::size_t n, std::uint64_t seed) {
  const CounterRng rng{seed, 0};
  ComplexVec x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = Complex(rng.gaussian(2 * i), rng.gaussian(2 * i + 1));
  return x;
}

double max_err(const ComplexVec& a, const ComplexVec& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_CASE("split-radix fft matches the naive DFT") {
  for (const std::size_t n : {2u, 4u, 8u, 32u, 128u, 1024u}) {
    const ComplexVec x = random_signal(n, n);
    CHECK(max_err(fft(x), naive_dft(x)) < 1e-9 * std::sqrt(double(n)));
  }
}

TEST_CASE("bluestein handles arbitrary lengths") {
  for (const std::size_t n : {3u, 12u, 100u, 257u}) {
    const ComplexVec x = random_signal(n, 7 * n);
    CHECK(max_err(fft(x), naive_dft(x)) < 1e-8 * std::sqrt(double(n)));
  }
}

TEST_CASE("ifft inverts fft") {
  const ComplexVec x = random_signal(512, 5);
  CHECK(max_err(ifft(fft(x)), x) < 1e-12);
  const ComplexVec y = random_signal(60, 6);
  CHECK(max_err(ifft(fft(y)), y) < 1e-11);
}

TEST_CASE("instrumented op counts match the classic split-radix table") {
  // real adds/mults of the conjugate-pair split radix with the 4-mult/2-add
  // twiddle scheme; totals are 4 N lg N - 6 N + 8
  struct Row {
    std::size_t n;
    long long mults, adds;
  };
  for (const Row row : {Row{8, 4, 52}, Row{16, 24, 144}, Row{32, 84, 372},
                        Row{64, 248, 912}, Row{128, 660, 2164}}) {
    OpCount ops;
    fft(random_signal(row.n, row.n + 1), &ops);
    CHECK(ops.mults == row.mults);
    CHECK(ops.adds == row.adds);
    const long long lg = ilog2(row.n);
    CHECK(ops.total() == 4LL * static_cast<long long>(row.n) * lg -
                             6LL * static_cast<long long>(row.n) + 8);
  }
}

TEST_CASE("op counting refuses non-power-of-two lengths") {
  OpCount ops;
  ComplexVec x = random_signal(24, 1);
  CHECK_THROWS_AS(fft(std::move(x), &ops), std::invalid_argument);
}
