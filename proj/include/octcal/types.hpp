#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <vector>

namespace octcal {

using ArrayX = Eigen::ArrayXd;
using VectorX = Eigen::VectorXd;
using MatrixX = Eigen::MatrixXd;
using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;

/// 2*pi/lambda.
inline double wavenumber(double lambda) { return kTwoPi / lambda; }

/// First-order k-span of a wavelength interval: delta_k = 2*pi*delta_lambda/lambda0^2.
/// Used for the sampling interval delta_s_k and the instantaneous linewidth delta_r_k.
inline double delta_k_from_delta_lambda(double lambda0, double dlambda) {
  return kTwoPi * dlambda / (lambda0 * lambda0);
}

}  // namespace octcal
