#pragma once

// Independent reference values built on Boost.Math.

#include <boost/math/special_functions/spherical_harmonic.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "sphframe/quadrature.hpp"

namespace oracle {

// Unit norm under the normalized surface measure.
inline std::complex<double> ylm(int l, int m, double theta, double phi) {
  return boost::math::spherical_harmonic(l, m, theta, phi) * std::sqrt(4.0 * std::acos(-1.0));
}

using big = boost::multiprecision::cpp_bin_float_50;

inline double ylm_abs_high_precision(int l, int m, double theta) {
  const big t(theta);
  const big v = boost::math::spherical_harmonic_r(l, m, t, big(0)) * sqrt(4 * boost::math::constants::pi<big>());
  return static_cast<double>(abs(v));
}

// max |sum_k w_k Y_lm conj(Y_l'm') - delta| over l, l' < bandlimit.
inline double gram_deviation(const sphframe::QuadratureRule& rule, int bandlimit) {
  const std::size_t dim = static_cast<std::size_t>(bandlimit) * bandlimit;
  std::vector<std::complex<double>> y(rule.size() * dim);
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const auto& p = rule.points()[k];
    std::size_t i = 0;
    for (int l = 0; l < bandlimit; ++l)
      for (int m = -l; m <= l; ++m) y[k * dim + i++] = ylm(l, m, p.theta(), p.phi());
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = a; b < dim; ++b) {
      std::complex<double> s = 0.0;
      for (std::size_t k = 0; k < rule.size(); ++k) s += rule.weights()[k] * y[k * dim + a] * std::conj(y[k * dim + b]);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace oracle
