#pragma once

// Reference asymptotics for the second and fourth moments of Z, plus
// windowed numeric moments to hold against them. The fourth-moment
// reference keeps the leading coefficient only: the lower-order
// coefficients have no usable published values, so reports show the
// residual drift rather than asserting invented constants.

#include <cmath>
#include <stdexcept>

#include "zll/constants.hpp"
#include "zll/quadrature.hpp"
#include "zll/zeta_rs.hpp"

namespace zll {

enum class MomentKind { second, fourth };

struct MomentEstimate {
  MomentKind kind = MomentKind::second;
  double T = 0.0;
  double U = 0.0;
  double numeric = 0.0;
  double asymptotic_main = 0.0;
  double ratio = 0.0;
  double quad_err = 0.0;
};

// T ln T + (2c - 1 - ln 2pi) T: full-interval second moment main terms.
inline double second_moment_asymptotic(double T) {
  if (!(T >= 100.0)) throw std::domain_error("second_moment_asymptotic: T must be >= 100");
  return T * std::log(T) + kHlLinearCoeff * T;
}

// U ln T + (2c - ln 2pi) U: windowed second moment over [T, T+U].
inline double windowed_second_asymptotic(double T, double U) {
  if (!(T >= 100.0)) throw std::domain_error("windowed_second_asymptotic: T must be >= 100");
  if (!(U > 0.0 && U <= T)) throw std::domain_error("windowed_second_asymptotic: need 0 < U <= T");
  return U * std::log(T) + (2.0 * kEulerC - kLnTwoPi) * U;
}

// (1/2pi^2) T ln^4 T: leading term of the fourth moment.
inline double fourth_moment_leading(double T) {
  if (!(T >= 100.0)) throw std::domain_error("fourth_moment_leading: T must be >= 100");
  const double l = std::log(T);
  const double l2 = l * l;
  return kC0 * T * l2 * l2;
}

// Numeric integral of Z^power over [T, T+U] against its windowed reference.
// Default tolerance: 1e-6 relative to the reference value.
inline MomentEstimate windowed_numeric_moment(double T, double U, int power,
                                              double rel_tol = 1e-6,
                                              const QuadOptions& opts = {}) {
  if (power != 2 && power != 4) {
    throw std::invalid_argument("windowed_numeric_moment: power must be 2 or 4");
  }
  if (!(T >= kTMin && U > 0.0)) {
    throw std::domain_error("windowed_numeric_moment: empty or invalid window");
  }

  MomentEstimate est;
  est.kind = power == 2 ? MomentKind::second : MomentKind::fourth;
  est.T = T;
  est.U = U;
  if (power == 2) {
    est.asymptotic_main = windowed_second_asymptotic(T, U);
  } else {
    const double l = std::log(T);
    const double l2 = l * l;
    est.asymptotic_main = kC0 * U * l2 * l2;
  }

  auto integrand = [power](double t) {
    const double z = hardy_z(t).z;
    const double z2 = z * z;
    return power == 2 ? z2 : z2 * z2;
  };
  const IntegralEstimate q =
      integrate(integrand, T, T + U, rel_tol * std::abs(est.asymptotic_main), opts);
  est.numeric = q.value;
  est.quad_err = q.err_est;
  est.ratio = est.numeric / est.asymptotic_main;
  return est;
}

}  // namespace zll
