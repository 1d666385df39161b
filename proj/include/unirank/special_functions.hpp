#pragma once

#include <cmath>
#include <stdexcept>

namespace unirank {

namespace detail {

inline void check_bessel_args(double nu, double x) {
  if (!std::isfinite(nu) || !std::isfinite(x) || x <= 0)
    throw std::invalid_argument("bessel_i: requires finite nu and x > 0");
}

// Defining power series, summed until the terms stop mattering. Safe for
// moderate x (the largest term is comparable to the result).
inline double bessel_i_series(double nu, double x) {
  double t = std::pow(x / 2, nu) / std::tgamma(nu + 1);
  double sum = t;
  const double x24 = x * x / 4;
  for (int k = 1; k < 100000; ++k) {
    t *= x24 / (k * (k + nu));
    sum += t;
    if (k > x / 2 && std::fabs(t) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

// Large-x expansion of e^{-x} I_nu(x), truncated at the smallest term. For
// half-integer nu the series terminates and is exact up to an e^{-2x} piece.
inline double bessel_i_scaled_asym(double nu, double x) {
  const double mu = 4 * nu * nu;
  double term = 1.0, sum = 1.0, smallest = HUGE_VAL;
  for (int k = 1; k <= 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    if (std::fabs(term) >= smallest) break;
    smallest = std::fabs(term);
    sum += term;
    if (smallest < 1e-18 * std::fabs(sum)) break;
  }
  return sum / std::sqrt(2 * M_PI * x);
}

// Exact closed forms for nu in {+-1/2, +-3/2, +-5/2}, e^{-x}-scaled:
// Cs = e^{-x} cosh x, Ss = e^{-x} sinh x stay well-conditioned for large x.
inline bool bessel_half_integer_scaled(double nu, double x, double* out) {
  const double twice = 2 * nu;
  if (twice != std::nearbyint(twice) || std::fabs(std::fmod(twice, 2.0)) != 1.0) return false;
  const double e2 = std::exp(-2 * x);
  const double cs = (1 + e2) / 2, ss = (1 - e2) / 2;
  const double f = std::sqrt(2 / (M_PI * x));
  if (nu == 0.5) *out = f * ss;
  else if (nu == -0.5) *out = f * cs;
  else if (nu == 1.5) *out = f * (cs - ss / x);
  else if (nu == -1.5) *out = f * (ss - cs / x);
  else if (nu == 2.5) *out = f * (ss - 3 * cs / x + 3 * ss / (x * x));
  else if (nu == -2.5) *out = f * (cs - 3 * ss / x + 3 * cs / (x * x));
  else return false;
  return true;
}

}  // namespace detail

// e^{-x} I_nu(x). The scaled form is finite across the whole supported range.
inline double bessel_i_scaled(double nu, double x) {
  detail::check_bessel_args(nu, x);
  // I_{-n} = I_n for integer orders; the series below cannot start at a
  // gamma pole.
  if (nu < 0 && nu == std::nearbyint(nu)) nu = -nu;
  double closed = 0;
  if (x >= 0.5 && detail::bessel_half_integer_scaled(nu, x, &closed)) return closed;
  if (x <= 100) return detail::bessel_i_series(nu, x) * std::exp(-x);
  return detail::bessel_i_scaled_asym(nu, x);
}

// I_nu(x). Overflows to +inf once x exceeds roughly 705; use the scaled
// variant for large arguments.
inline double bessel_i(double nu, double x) {
  return bessel_i_scaled(nu, x) * std::exp(x);
}

// Standard normal distribution function via the complementary error function.
inline double normal_cdf(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("normal_cdf: requires finite x");
  return 0.5 * std::erfc(-x / M_SQRT2);
}

}  // namespace unirank
