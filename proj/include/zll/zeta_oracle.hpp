#pragma once

// Slow high-precision reference evaluations: zeta(1/2+it) by Euler-Maclaurin
// summation, theta(t) through the complex log-Gamma, and the head integral
// of Z^2 over [0, t_head]. These back every accuracy claim made for the fast
// Riemann-Siegel path and are the only route below t = 10.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/constants/constants.hpp>

#include "zll/detail/gauss_legendre.hpp"
#include "zll/mp.hpp"

namespace zll::oracle {

using mp::Complex;
using mp::Real;

// Raised when the Euler-Maclaurin tail cannot reach the requested precision
// within the term budget.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kOracleTMax = 1e6;

namespace detail {

inline const Real& pi() {
  static const Real v = boost::math::constants::pi<Real>();
  return v;
}

// n^{-s} for s = sigma + i*t: n^{-sigma} * exp(-i t ln n).
inline Complex pow_int_neg_s(std::uint64_t n, const Real& sigma, const Real& t) {
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  const Real ln_n = log(Real(n));
  const Real mag = exp(-sigma * ln_n);
  const Complex phase = mp::cis(-t * ln_n);
  return {mag * phase.re, mag * phase.im};
}

}  // namespace detail

// zeta(sigma + i t) by Euler-Maclaurin with adaptive tail depth. Relative
// error <= 1e-20 per the remainder bound tracked below; throws
// PrecisionError if the bound cannot be met.
inline Complex em_zeta(const Real& sigma, const Real& t) {
  using boost::multiprecision::abs;
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;

  const Real abs_s = sqrt(sigma * sigma + t * t);
  // 2*pi*N >= ~2.5|s| keeps the tail ratio ((|s|+2k)/(2 pi N))^2 well under 1,
  // gaining about one digit per Bernoulli term.
  const auto big_n = static_cast<std::uint64_t>(
      std::max(32.0, std::ceil(0.4 * static_cast<double>(abs_s))));

  const Complex s{sigma, t};
  Complex acc{Real(0), Real(0)};
  for (std::uint64_t n = 1; n <= big_n; ++n) {
    acc += detail::pow_int_neg_s(n, sigma, t);
  }

  // N^{1-s}/(s-1) - N^{-s}/2
  const Complex n_pow_neg_s = detail::pow_int_neg_s(big_n, sigma, t);
  const Complex n_pow_one_minus_s = n_pow_neg_s * Real(big_n);
  acc += n_pow_one_minus_s / Complex{sigma - 1, t};
  acc = acc - n_pow_neg_s * Real(0.5);

  // Tail: sum_k B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}.
  const Real inv_n2 = Real(1) / (Real(big_n) * Real(big_n));
  Complex poch{sigma, t};              // s(s+1)...(s+2k-2), starts at k=1 as s
  Complex n_factor = n_pow_neg_s * Real(big_n) * inv_n2;  // N^{-s-2k+1} at k=1
  Real factorial(2);                   // (2k)!
  const Real target = abs(acc) * Real("1e-24");

  constexpr int kMaxTerms = 90;
  bool converged = false;
  for (int k = 1; k <= kMaxTerms; ++k) {
    const Real b2k = boost::math::bernoulli_b2n<Real>(k);
    const Complex term = poch * n_factor * (b2k / factorial);
    acc += term;

    // Standard remainder bound: |R_k| <= |term_{k+1}| * |s+2k+1|/(sigma+2k+1);
    // using the just-added term as a proxy is adequate once terms decay.
    const Real mag = abs(term);
    if (mag < target) {
      converged = true;
      break;
    }
    // Advance poch to s(s+1)...(s+2k), factorial to (2k+2)!, n_factor by N^-2.
    poch = poch * Complex{sigma + 2 * k - 1, t} * Complex{sigma + 2 * k, t};
    factorial *= Real(2 * k + 1) * Real(2 * k + 2);
    n_factor = n_factor * inv_n2;
  }
  if (!converged) {
    throw PrecisionError("em_zeta: Euler-Maclaurin tail did not reach target precision");
  }
  return acc;
}

// zeta(1/2 + i t). Oracle domain: 0 < |t| <= 1e6 (slow; tests and head
// integral only). Accepts signed t so conjugate-symmetry checks can call it
// directly.
inline Complex em_zeta_half(double t) {
  if (t == 0.0 || std::abs(t) > kOracleTMax) {
    throw std::domain_error("em_zeta_half: t out of oracle range (0, 1e6]");
  }
  return em_zeta(Real(0.5), Real(t));
}

// log Gamma(z) by the Stirling series after shifting Re upward until
// |z| >= 60; all logs stay principal because Re(z) > 0 throughout.
inline Complex log_gamma(Complex z) {
  using boost::multiprecision::abs;

  Complex shift_acc{Real(0), Real(0)};
  while (mp::abs(z) < 60) {
    shift_acc += mp::log(z);
    z.re += 1;
  }

  const Complex log_z = mp::log(z);
  const Real half_ln_two_pi = boost::multiprecision::log(2 * detail::pi()) / 2;
  Complex acc = (z - Complex{Real(0.5), Real(0)}) * log_z - z;
  acc.re += half_ln_two_pi;

  const Complex inv_z = mp::reciprocal(z);
  const Complex inv_z2 = inv_z * inv_z;
  Complex zpow = inv_z;  // z^{-(2n-1)}
  for (int n = 1; n <= 40; ++n) {
    const Real b2n = boost::math::bernoulli_b2n<Real>(n);
    const Complex term = zpow * (b2n / (Real(2 * n) * Real(2 * n - 1)));
    acc += term;
    if (mp::abs(term) < Real("1e-45")) break;
    zpow = zpow * inv_z2;
  }
  return acc - shift_acc;
}

// theta(t) = Im log Gamma(1/4 + i t/2) - (t/2) ln pi, exact up to the
// working precision; reference for the asymptotic series.
inline Real theta_oracle(double t) {
  if (!(t > 0.0)) throw std::domain_error("theta_oracle: t must be positive");
  const Complex lg = log_gamma(Complex{Real(0.25), Real(t) / 2});
  return lg.im - Real(t) / 2 * boost::multiprecision::log(detail::pi());
}

// Real Hardy Z via the oracle: Re(e^{i theta} zeta(1/2+it)).
inline Real z_oracle(double t) {
  const Complex zeta = em_zeta_half(t);
  const Complex ph = mp::cis(theta_oracle(t));
  return ph.re * zeta.re - ph.im * zeta.im;
}

inline double abs_zeta_oracle(double t) {
  return static_cast<double>(mp::abs(em_zeta_half(t)));
}

// integral of |zeta(1/2+it)|^2 over [0, t_head] by composite Gauss-Legendre
// with oracle integrand values. The integrand is smooth here (first Z zero
// is above 14), so 16 points per unit-length panel is far more than enough.
inline double head_integral(double t_head) {
  if (!(t_head > 0.0 && t_head <= 64.0)) {
    throw std::domain_error("head_integral: t_head out of range (0, 64]");
  }
  const auto& rule = zll::detail::gauss_legendre<16>();
  const int panels = static_cast<int>(std::ceil(t_head));
  const double width = t_head / panels;
  Real total(0);
  for (int pnl = 0; pnl < panels; ++pnl) {
    const double lo = pnl * width;
    for (int i = 0; i < 16; ++i) {
      const double x = lo + 0.5 * width * (rule.node[i] + 1.0);
      const Complex z = em_zeta(Real(0.5), Real(x));
      total += Real(rule.weight[i]) * (z.re * z.re + z.im * z.im);
    }
  }
  total *= Real(width) / 2;
  return static_cast<double>(total);
}

}  // namespace zll::oracle
