#pragma once

// Fast evaluation of the Hardy Z-function on the critical line,
//
//   Z(t) = e^{i theta(t)} zeta(1/2 + it)
//        = 2 sum_{n <= N} n^{-1/2} cos(theta(t) - t ln n) + remainder,
//
// with N = floor(sqrt(t/2pi)) and the asymptotic remainder expansion in
// powers of (t/2pi)^{-1/2}.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "zll/detail/main_sum.hpp"
#include "zll/detail/psi_series.hpp"

namespace zll {

// Minimum height for the Riemann-Siegel path; below this only the
// high-precision oracle is meaningful.
inline constexpr double kTMin = 10.0;

// One evaluation point on the critical line.
struct ZSample {
  double t;         // height
  double theta;     // Riemann-Siegel theta(t), radians
  double z;         // Hardy Z(t), real
  double abs_zeta;  // |zeta(1/2+it)| = |z|
};

namespace detail {

// theta(t) evaluated in long double and split hi/lo; the asymptotic tail
// 1/(48t) + 7/(5760 t^3) leaves the series below 1e-13 already at t = 10.
inline PhaseDD rs_theta_dd(double t) {
  const long double tl = t;
  long double th =
      0.5L * tl * (std::log(tl / (2.0L * std::numbers::pi_v<long double>)) - 1.0L);
  th -= std::numbers::pi_v<long double> / 8.0L;
  th += 1.0L / (48.0L * tl) + 7.0L / (5760.0L * tl * tl * tl);
  const double hi = static_cast<double>(th);
  return {hi, static_cast<double>(th - hi)};
}

// Per-n tables: 1/sqrt(n) and ln n as a hi/lo pair. Covers t up to ~1.7e9;
// larger n fall back to on-the-fly long double logs.
struct NTables {
  static constexpr std::int64_t kSize = 16384;
  std::vector<double> rsqrt;
  std::vector<double> ln_hi;
  std::vector<double> ln_lo;
};

inline const NTables& n_tables() {
  static const NTables tables = [] {
    NTables t;
    t.rsqrt.resize(NTables::kSize + 1);
    t.ln_hi.resize(NTables::kSize + 1);
    t.ln_lo.resize(NTables::kSize + 1);
    for (std::int64_t n = 1; n <= NTables::kSize; ++n) {
      t.rsqrt[static_cast<std::size_t>(n)] = 1.0 / std::sqrt(static_cast<double>(n));
      const long double l = std::log(static_cast<long double>(n));
      t.ln_hi[static_cast<std::size_t>(n)] = static_cast<double>(l);
      t.ln_lo[static_cast<std::size_t>(n)] =
          static_cast<double>(l - t.ln_hi[static_cast<std::size_t>(n)]);
    }
    return t;
  }();
  return tables;
}

// Remainder coefficients in terms of psi derivatives, through the cubic term
// in x = (t/2pi)^{-1/2}. Validated against the Euler-Maclaurin oracle in the
// test suite; the residual at t = 1e3 sits near 3e-9.
inline double rs_remainder(double tau, std::int64_t big_n, double p) {
  const auto& series = psi_series();
  const double x_cheb = 2.0 * p - 1.0;
  const double c0 = psi_eval<double>(p);
  const double c1 = clenshaw(series.c1, x_cheb);
  const double c2 = clenshaw(series.c2, x_cheb);
  const double c3 = clenshaw(series.c3, x_cheb);
  const double x = 1.0 / std::sqrt(tau);
  const double base = std::sqrt(x);  // tau^{-1/4}
  const double corr = c0 + x * (c1 + x * (c2 + x * c3));
  return (big_n % 2 == 1 ? base : -base) * corr;  // (-1)^{N-1}
}

}  // namespace detail

// Riemann-Siegel theta by its asymptotic series.
inline double rs_theta(double t) {
  if (!(t >= kTMin)) throw std::domain_error("rs_theta: t below validity minimum");
  const detail::PhaseDD th = detail::rs_theta_dd(t);
  return th.hi + th.lo;
}

// Hardy Z(t) via the Riemann-Siegel formula. Deterministic: identical t
// yields bit-identical results; safe to call from any number of threads.
inline ZSample hardy_z(double t) {
  if (!(t >= kTMin)) throw std::domain_error("hardy_z: t below validity minimum");

  const detail::PhaseDD theta = detail::rs_theta_dd(t);
  const double tau = t / (2.0 * std::numbers::pi);
  const double a = std::sqrt(tau);
  const auto big_n = static_cast<std::int64_t>(a);
  const double p = a - static_cast<double>(big_n);

  const auto& tab = detail::n_tables();
  const std::int64_t tabled = big_n < detail::NTables::kSize ? big_n : detail::NTables::kSize;
  double acc = detail::main_sum_tabled(theta, t, tabled, tab.rsqrt.data(), tab.ln_hi.data(),
                                       tab.ln_lo.data());
  for (std::int64_t n = tabled + 1; n <= big_n; ++n) {
    const long double l = std::log(static_cast<long double>(n));
    const double lhi = static_cast<double>(l);
    const double llo = static_cast<double>(l - lhi);
    acc += detail::reduced_cos(detail::reduced_phase(theta, t, lhi, llo)) /
           std::sqrt(static_cast<double>(n));
  }

  const double z = 2.0 * acc + detail::rs_remainder(tau, big_n, p);
  return ZSample{t, theta.hi + theta.lo, z, std::abs(z)};
}

// Z(t)^2, the workhorse integrand.
inline double hardy_z_sq(double t) {
  const double z = hardy_z(t).z;
  return z * z;
}

}  // namespace zll
