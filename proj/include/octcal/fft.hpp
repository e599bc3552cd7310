#pragma once

#include <cstdint>

#include "octcal/types.hpp"

namespace octcal {

/// Real-arithmetic operation tally of one transform. Multiplications by
/// +-1 and +-i cost nothing; the two sqrt(2)/2 twiddles cost 2 mults +
/// 2 adds each; a generic twiddle costs 4 mults + 2 adds.
struct OpCount {
  long long adds = 0;
  long long mults = 0;
  long long total() const { return adds + mults; }
};

/// Forward DFT, X_k = sum x_n exp(-2*pi*i*n*k/N).
/// Power-of-two lengths run the conjugate-pair split-radix recursion and,
/// when `ops` is given, tally its real adds/mults. Other lengths fall back
/// to Bluestein (op counting not defined there; `ops` must be null).
ComplexVec fft(ComplexVec x, OpCount* ops = nullptr);

/// Inverse DFT including the 1/N scale.
ComplexVec ifft(ComplexVec x);

ComplexVec fft_real(const ArrayX& x, OpCount* ops = nullptr);

bool is_pow2(std::size_t n);
int ilog2(std::size_t n);
std::size_t next_pow2(std::size_t n);

}  // namespace octcal
