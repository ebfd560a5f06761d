#pragma once

// The Riemann-Siegel remainder auxiliary
//
//   psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p),  p in [0, 1),
//
// and Chebyshev proxies for its derivatives psi^(k). The correction-term
// coefficients need derivatives up to order 9; differentiating a double
// precision Chebyshev fit that many times would amplify the coefficient
// noise floor past usefulness, so the fit and the differentiation passes run
// at 40-digit precision once, and only the final coefficient arrays are
// frozen to double.

#include <array>
#include <cmath>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "zll/mp.hpp"

namespace zll::detail {

// Both numerator and denominator of psi vanish at p = 1/4 and 3/4 (the
// singularities are removable). Near those points the ratio is rewritten as
//
//   psi = sin(u0) sin(v0) * (A/B) * sinc(A)/sinc(B),
//   A = 2 pi (p - 1/4)(p - 3/4),  B = 2 pi (p - q0),  A/B = p - (other q),
//
// where q0 is the nearby quarter point and u0 = u - A, v0 = v - B sit at odd
// multiples of pi/2 (so their sines are +-1). No cancellation anywhere.
template <class R>
R psi_eval(const R& p) {
  using std::abs;
  using std::cos;
  using std::sin;
  const R pi_v = boost::math::constants::pi<R>();
  const R two_pi = 2 * pi_v;
  const R u = two_pi * (p * p - p - R(1) / 16);
  const R v = two_pi * p;
  const R cv = cos(v);
  if (abs(cv) >= R(1) / 10000) {
    return cos(u) / cv;
  }
  const bool near_quarter = abs(p - R(1) / 4) < abs(p - R(3) / 4);
  const R q0 = near_quarter ? R(1) / 4 : R(3) / 4;
  const R q_other = near_quarter ? R(3) / 4 : R(1) / 4;
  const R A = two_pi * (p - R(1) / 4) * (p - R(3) / 4);
  const R B = two_pi * (p - q0);
  const R su0 = sin(u - A);  // +-1 up to rounding
  const R sv0 = sin(v - B);
  auto sinc = [](const R& x) { return x == R(0) ? R(1) : R(sin(x) / x); };
  return su0 * sv0 * (p - q_other) * (sinc(A) / sinc(B));
}

inline double clenshaw(const std::vector<double>& a, double x) {
  double d = 0.0, dd = 0.0;
  for (std::size_t j = a.size() - 1; j >= 1; --j) {
    const double sv = d;
    d = 2.0 * x * d - dd + a[j];
    dd = sv;
  }
  return x * d - dd + 0.5 * a[0];
}

// Chebyshev series (half-c0 convention, argument x = 2p - 1) for psi, its
// first nine derivatives with respect to p, and the three remainder
// coefficient combinations used by the Riemann-Siegel evaluator.
struct PsiSeries {
  std::array<std::vector<double>, 10> deriv;
  std::vector<double> c1;  // -psi'''/(96 pi^2)
  std::vector<double> c2;  // psi''/(64 pi^2) + psi^(6)/(18432 pi^4)
  std::vector<double> c3;  // -psi'/(64 pi^2) - psi^(5)/(3840 pi^4) - psi^(9)/(5308416 pi^6)

  double eval(int order, double p) const {
    return clenshaw(deriv[static_cast<std::size_t>(order)], 2.0 * p - 1.0);
  }
};

inline const PsiSeries& psi_series() {
  static const PsiSeries series = [] {
    using mp::Real;
    constexpr int n = 128;  // polynomial degree; psi is entire, coefficients
                            // decay below 1e-40 long before k = n
    const Real pi_v = boost::math::constants::pi<Real>();

    // Values at the Chebyshev-Lobatto nodes x_j = cos(pi j / n).
    std::vector<Real> fx(n + 1);
    std::vector<Real> xs(n + 1);
    for (int j = 0; j <= n; ++j) {
      xs[j] = cos(pi_v * j / n);
      fx[j] = psi_eval<Real>((xs[j] + 1) / 2);
    }

    // Interpolation coefficients, k = n term folded into the stored value so
    // that f = a0/2 + sum_{k>=1} a_k T_k throughout.
    std::vector<Real> coef(n + 1);
    for (int k = 0; k <= n; ++k) {
      Real s = fx[0] / 2;
      for (int j = 1; j < n; ++j) s += fx[j] * cos(pi_v * j * k / n);
      s += (k % 2 == 0 ? fx[n] : -fx[n]) / 2;
      coef[k] = s * 2 / n;
    }
    coef[n] /= 2;

    PsiSeries out;
    auto freeze = [&](const std::vector<Real>& c, std::vector<double>& dst) {
      // Drop the tail relative to the series' own scale; keep at least 8 terms.
      Real peak(0);
      for (const auto& v : c) peak = std::max(peak, Real(abs(v)));
      const Real cut = peak * Real("1e-19");
      std::size_t keep = c.size();
      while (keep > 8 && abs(c[keep - 1]) < cut) --keep;
      dst.resize(keep);
      for (std::size_t i = 0; i < keep; ++i) dst[i] = static_cast<double>(c[i]);
    };

    std::array<std::vector<Real>, 10> deriv_mp;
    deriv_mp[0] = coef;
    freeze(coef, out.deriv[0]);
    for (int order = 1; order <= 9; ++order) {
      const std::vector<Real>& cur = deriv_mp[static_cast<std::size_t>(order - 1)];
      std::vector<Real> der(cur.size(), Real(0));
      const int m = static_cast<int>(cur.size()) - 1;
      if (m >= 1) {
        der[m - 1] = Real(2 * m) * cur[m];
        for (int j = m - 2; j >= 0; --j) {
          der[j] = der[j + 2] + Real(2 * (j + 1)) * cur[j + 1];
        }
        // Chain rule: d/dp = 2 d/dx.
        for (auto& v : der) v *= 2;
      }
      freeze(der, out.deriv[static_cast<std::size_t>(order)]);
      deriv_mp[static_cast<std::size_t>(order)] = std::move(der);
    }

    // Combined remainder-coefficient series, one Clenshaw pass each at
    // evaluation time instead of six.
    const Real pi2 = pi_v * pi_v;
    const Real pi4 = pi2 * pi2;
    const Real pi6 = pi4 * pi2;
    auto combine = [&](std::initializer_list<std::pair<int, Real>> parts,
                       std::vector<double>& dst) {
      std::vector<Real> acc(static_cast<std::size_t>(n) + 1, Real(0));
      for (const auto& [order, scale] : parts) {
        const auto& src = deriv_mp[static_cast<std::size_t>(order)];
        for (std::size_t i = 0; i < src.size(); ++i) acc[i] += scale * src[i];
      }
      freeze(acc, dst);
    };
    combine({{3, Real(-1) / (96 * pi2)}}, out.c1);
    combine({{2, Real(1) / (64 * pi2)}, {6, Real(1) / (18432 * pi4)}}, out.c2);
    combine({{1, Real(-1) / (64 * pi2)},
             {5, Real(-1) / (3840 * pi4)},
             {9, Real(-1) / (5308416 * pi6)}},
            out.c3);
    return out;
  }();
  return series;
}

}  // namespace zll::detail
