#pragma once

#include <numbers>

namespace zll {

// Named constants entering the asymptotic reference formulas. Pinned to 17
// significant digits; the test suite recomputes each one from its defining
// expression or limit.
struct ConstantSet {
  double euler_c;      // Euler-Mascheroni constant c
  double ln_two_pi;    // ln(2*pi)
  double c0;           // 1/(2*pi^2), leading fourth-moment coefficient
  double one_minus_c;  // 1 - c
};

inline constexpr double kEulerC = std::numbers::egamma;
inline constexpr double kLnTwoPi = 1.8378770664093455;
inline constexpr double kC0 = 0.050660591821168886;

inline constexpr ConstantSet constants() {
  return ConstantSet{kEulerC, kLnTwoPi, kC0, 1.0 - kEulerC};
}

// Coefficient of T in the full Hardy-Littlewood main terms T ln T + (2c-1-ln 2pi) T.
inline constexpr double kHlLinearCoeff = 2.0 * kEulerC - 1.0 - kLnTwoPi;

}  // namespace zll
