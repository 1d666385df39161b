#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "unirank/bigint.hpp"
#include "unirank/special_functions.hpp"
#include "unirank/trunc_series.hpp"

namespace unirank {

// Shared constants of the main-term asymptotics. growth_rate is the exponent
// coefficient pi sqrt(2/3) common to all counts here.
inline double growth_rate() { return M_PI * std::sqrt(2.0 / 3.0); }

// First correction coefficient for the total count: -(2 pi^2 + 9)/(2^6 sqrt(24) pi).
inline double total_count_beta1() {
  return -(2 * M_PI * M_PI + 9) / (64.0 * std::sqrt(24.0) * M_PI);
}

// m-independent shift in the first-order rank-count correction:
// sqrt(3)/(sqrt(2) pi) - 11 pi/(24 sqrt(6)).
inline double rank_count_shift() {
  return std::sqrt(3.0) / (std::sqrt(2.0) * M_PI) - 11 * M_PI / (24 * std::sqrt(6.0));
}

namespace detail {

inline void check_n(long n) {
  if (n < 1) throw std::invalid_argument("asymptotics: n must be >= 1");
}

inline void check_order(int order) {
  if (order != 0 && order != 1) throw std::invalid_argument("asymptotics: order must be 0 or 1");
}

}  // namespace detail

// An estimate plus the summands it was assembled from.
struct AsymEstimate {
  double value = 0;
  int order = 0;
  std::vector<double> terms;
};

// log of the partition main term e^{c sqrt n} / (4 sqrt 3 n).
inline double hr_partition_log(long n) {
  detail::check_n(n);
  const double nn = static_cast<double>(n);
  return growth_rate() * std::sqrt(nn) - std::log(4 * std::sqrt(3.0)) - std::log(nn);
}

inline double hr_partition_main(long n) { return std::exp(hr_partition_log(n)); }

// log of the total-count main term e^{c sqrt n} / (8 * 6^{1/4} n^{3/4}).
inline double u_total_log(long n) {
  detail::check_n(n);
  const double nn = static_cast<double>(n);
  return growth_rate() * std::sqrt(nn) - std::log(8.0) - 0.25 * std::log(6.0) -
         0.75 * std::log(nn);
}

// Total-count estimate; order 1 appends the beta_1 / sqrt(n) correction.
inline AsymEstimate u_total_asymptotic(long n, int order) {
  detail::check_order(order);
  const double main = std::exp(u_total_log(n));
  AsymEstimate e;
  e.order = order;
  e.terms.push_back(main);
  if (order >= 1) e.terms.push_back(main * total_count_beta1() / std::sqrt(static_cast<double>(n)));
  for (double t : e.terms) e.value += t;
  return e;
}

// log of the fixed-rank main term e^{c sqrt n} / (16 sqrt 3 n), independent of m.
inline double u_mn_log(long n) {
  detail::check_n(n);
  const double nn = static_cast<double>(n);
  return growth_rate() * std::sqrt(nn) - std::log(16 * std::sqrt(3.0)) - std::log(nn);
}

// Fixed-rank estimate; order 1 appends the -(pi m^2 / (2 sqrt 6) + shift)/sqrt(n)
// correction. Meaningful for m fixed and small relative to sqrt(n).
inline AsymEstimate u_mn_asymptotic(long m, long n, int order) {
  detail::check_order(order);
  const double main = std::exp(u_mn_log(n));
  const double mm = static_cast<double>(m);
  AsymEstimate e;
  e.order = order;
  e.terms.push_back(main);
  if (order >= 1) {
    const double corr = -(M_PI * mm * mm / (2 * std::sqrt(6.0)) + rank_count_shift()) /
                        std::sqrt(static_cast<double>(n));
    e.terms.push_back(main * corr);
  }
  for (double t : e.terms) e.value += t;
  return e;
}

// Main terms for the structural differences: the adjacent-rank gap
// u(m,n) - u(m+1,n) and the log-concavity combination u(m,n)^2 - u(m-1,n)u(m+1,n).
struct StructuralAsym {
  double log_diff = 0;
  double log_logconc = 0;
  double diff = 0;
  double logconc = 0;
};

inline StructuralAsym structural_asymptotics(long m, long n) {
  detail::check_n(n);
  if (m < 0) throw std::invalid_argument("structural_asymptotics: m must be >= 0");
  const double nn = static_cast<double>(n);
  const double c = growth_rate();
  StructuralAsym s;
  s.log_diff = c * std::sqrt(nn) + std::log(M_PI * (2 * m + 1)) - std::log(96 * std::sqrt(2.0)) -
               1.5 * std::log(nn);
  s.log_logconc = 2 * c * std::sqrt(nn) + std::log(M_PI) - std::log(768 * std::sqrt(6.0)) -
                  2.5 * std::log(nn);
  s.diff = std::exp(s.log_diff);
  s.logconc = std::exp(s.log_logconc);
  return s;
}

inline double double_factorial_odd(int k) {
  // (2k-1)!! with the empty product at k = 0
  double v = 1;
  for (int j = 1; j <= k; ++j) v *= 2 * j - 1;
  return v;
}

// log of the 2k-th signed moment main term:
// e^{c sqrt n}/(8 * 6^{1/4} n^{3/4}) * (2k-1)!! * (6n/pi^2)^{k/2}.
inline double moment_log(int k, long n) {
  if (k < 0) throw std::invalid_argument("moment_log: k must be >= 0");
  const double nn = static_cast<double>(n);
  return u_total_log(n) + std::log(double_factorial_odd(k)) +
         0.5 * k * (std::log(6 * nn) - 2 * std::log(M_PI));
}

inline double moment_asymptotic(int k, long n) { return std::exp(moment_log(k, n)); }

// Half-normal moment constant 2^{r/2} Gamma((r+1)/2) / sqrt(pi).
inline double abs_moment_constant(int r) {
  if (r < 0) throw std::invalid_argument("abs_moment_constant: r must be >= 0");
  return std::exp(0.5 * r * M_LN2 + std::lgamma((r + 1) / 2.0) - 0.5 * std::log(M_PI));
}

// r-th absolute moment estimate built on the order-1 total count.
inline double abs_moment_asymptotic(int r, long n) {
  const double nn = static_cast<double>(n);
  return u_total_asymptotic(n, 1).value * abs_moment_constant(r) *
         std::pow(6 * nn / (M_PI * M_PI), 0.25 * r);
}

inline double log_ratio_to_estimate(const Int& exact, double log_estimate) {
  return log_abs(exact) - log_estimate;
}

// Ratio exact/estimate computed through logs so huge counts cannot overflow.
inline double ratio_to_estimate(const Int& exact, double log_estimate) {
  if (sgn(exact) == 0) return 0;
  const double r = std::exp(log_ratio_to_estimate(exact, log_estimate));
  return sgn(exact) > 0 ? r : -r;
}

// Coefficient growth envelope |a_n| <= amplitude * (n+1)^poly_degree *
// e^{sqrt_rate * sqrt n}, used to certify evaluation tails.
struct GrowthEnvelope {
  double amplitude = 1;
  double sqrt_rate = 0;
  double poly_degree = 0;
};

struct QSeriesValue {
  double value = 0;
  double tail_bound = 0;
};

// Evaluates sum a_n e^{-n t} from the stored coefficients and certifies the
// truncation error: beyond N the envelope is dominated by a geometric series
// with ratio rho = exp(c/(2 sqrt(N+1)) + d/(N+2) - t), via
// sqrt(n) <= sqrt(N+1) + j/(2 sqrt(N+1)) and log(n+1) <= log(N+2) + j/(N+2)
// for n = N+1+j.
inline QSeriesValue eval_q_series(const TruncSeries& a, double t, const GrowthEnvelope& env) {
  if (!std::isfinite(t) || t <= 0) throw std::invalid_argument("eval_q_series: requires t > 0");
  if (!(env.amplitude > 0) || !std::isfinite(env.amplitude) || env.sqrt_rate < 0 ||
      env.poly_degree < 0)
    throw std::invalid_argument("eval_q_series: malformed envelope");
  const long N = a.trunc_order();
  const double logA = std::log(env.amplitude);
  const double c = env.sqrt_rate;
  const double d = env.poly_degree;
  long double acc = 0;
  for (long n = 0; n <= N; ++n) {
    const Int& an = a.coeff(n);
    if (sgn(an) == 0) continue;
    const double nn = static_cast<double>(n);
    if (log_abs(an) > logA + d * std::log(nn + 1) + c * std::sqrt(nn) + 1e-9)
      throw std::runtime_error("eval_q_series: coefficient exceeds the declared envelope at n = " +
                               std::to_string(n));
    acc += static_cast<long double>(mpz_get_d(an.get_mpz_t())) *
           std::exp(static_cast<long double>(-t * nn));
  }
  const double sqN1 = std::sqrt(static_cast<double>(N) + 1);
  const double rho = std::exp(c / (2 * sqN1) + d / (static_cast<double>(N) + 2) - t);
  if (!(rho < 1))
    throw std::invalid_argument("eval_q_series: trunc_order too small for a finite tail bound");
  const double log_first = logA + d * std::log(static_cast<double>(N) + 2) + c * sqN1 -
                           t * (static_cast<double>(N) + 1);
  QSeriesValue out;
  out.value = static_cast<double>(acc);
  out.tail_bound = std::exp(log_first) / (1 - rho);
  return out;
}

}  // namespace unirank
