#pragma once

// The Riemann-Siegel main sum  sum_{n=1}^{N} n^{-1/2} cos(theta - t ln n).
//
// Phases are huge (theta and t ln n both reach ~1e7) while only their value
// mod 2pi matters, so every product is formed with an exact fma residual and
// reduced in double-double before the cosine. The cosine itself is a
// quadrant-reduced Taylor polynomial rather than libm: the same few flops in
// every lane lets the loop run four wide under AVX2, and the scalar tail
// performs the identical per-n arithmetic, so results do not depend on how
// the iterations were grouped.

#include <cmath>
#include <cstdint>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

namespace zll::detail {

inline constexpr double kTwoPiHi = 6.283185307179586476925286766559;
inline constexpr double kTwoPiLo = 2.4492935982947063545861696e-16;
inline constexpr double kInvTwoPi = 0.15915494309189533576888376337251;
inline constexpr double kPiO2Hi = 1.5707963267948966192313216916398;
inline constexpr double kPiO2Lo = 6.123233995736766035868820147292e-17;
inline constexpr double kTwoOverPi = 0.63661977236758134307553505349006;
// 1.5 * 2^52: add-then-subtract rounds to nearest integer and exposes the
// integer's low bits in the mantissa (|x| < 2^51 required; ours is < 2^22).
inline constexpr double kRoundMagic = 6755399441055744.0;

// Taylor coefficients in u = r^2 for cos(r) and sin(r)/r on |r| <= pi/4;
// truncation error below 2e-18.
inline constexpr double kCosCoef[9] = {
    1.0,
    -0.5,
    4.1666666666666666667e-2,
    -1.3888888888888888889e-3,
    2.4801587301587301587e-5,
    -2.7557319223985890653e-7,
    2.0876756987868098979e-9,
    -1.1470745597729724714e-11,
    4.7794773323873852974e-14,
};
inline constexpr double kSinCoef[9] = {
    1.0,
    -1.6666666666666666667e-1,
    8.3333333333333333333e-3,
    -1.9841269841269841270e-4,
    2.7557319223985890653e-6,
    -2.5052108385441718775e-8,
    1.6059043836821614599e-10,
    -7.6471637318198164759e-13,
    2.8114572543455207632e-15,
};

struct PhaseDD {
  double hi;
  double lo;
};

// cos of an already-reduced argument |r| <= pi (plus rounding slack).
inline double reduced_cos(double r) {
  const double m2 = std::fma(r, kTwoOverPi, kRoundMagic);
  std::int64_t bits;
  __builtin_memcpy(&bits, &m2, sizeof bits);
  const int q = static_cast<int>(bits & 3);
  const double k2 = m2 - kRoundMagic;
  double r4 = r - k2 * kPiO2Hi;
  r4 = std::fma(-k2, kPiO2Lo, r4);
  const double u = r4 * r4;
  double pc = kCosCoef[8];
  double ps = kSinCoef[8];
  for (int i = 7; i >= 0; --i) {
    pc = std::fma(pc, u, kCosCoef[i]);
    ps = std::fma(ps, u, kSinCoef[i]);
  }
  const double sinv = r4 * ps;
  const double sel = (q & 1) ? sinv : pc;
  return ((q + 1) & 2) ? -sel : sel;
}

// theta - t ln n reduced to [-pi, pi]; ln n supplied as a hi/lo pair.
inline double reduced_phase(const PhaseDD& theta, double t, double ln_hi, double ln_lo) {
  const double p_hi = t * ln_hi;
  const double p_e = std::fma(t, ln_hi, -p_hi);
  const double p_lo = std::fma(t, ln_lo, p_e);
  const double s = theta.hi - p_hi;
  const double bb = s - theta.hi;
  const double err = (theta.hi - (s - bb)) - (p_hi + bb);
  const double s_lo = err + (theta.lo - p_lo);
  const double m = std::fma(s, kInvTwoPi, kRoundMagic);
  const double k = m - kRoundMagic;
  const double ph = k * kTwoPiHi;
  const double e2 = std::fma(k, kTwoPiHi, -ph);
  return ((s - ph) - e2) + std::fma(-k, kTwoPiLo, s_lo);
}

#if defined(__AVX2__) && defined(__FMA__)

inline __m256d reduced_cos_v(__m256d r) {
  const __m256d magic = _mm256_set1_pd(kRoundMagic);
  const __m256d m2 = _mm256_fmadd_pd(r, _mm256_set1_pd(kTwoOverPi), magic);
  const __m256i q = _mm256_and_si256(_mm256_castpd_si256(m2), _mm256_set1_epi64x(3));
  const __m256d k2 = _mm256_sub_pd(m2, magic);
  __m256d r4 = _mm256_sub_pd(r, _mm256_mul_pd(k2, _mm256_set1_pd(kPiO2Hi)));
  r4 = _mm256_fnmadd_pd(k2, _mm256_set1_pd(kPiO2Lo), r4);
  const __m256d u = _mm256_mul_pd(r4, r4);
  __m256d pc = _mm256_set1_pd(kCosCoef[8]);
  __m256d ps = _mm256_set1_pd(kSinCoef[8]);
  for (int i = 7; i >= 0; --i) {
    pc = _mm256_fmadd_pd(pc, u, _mm256_set1_pd(kCosCoef[i]));
    ps = _mm256_fmadd_pd(ps, u, _mm256_set1_pd(kSinCoef[i]));
  }
  const __m256d sinv = _mm256_mul_pd(r4, ps);
  const __m256d odd = _mm256_castsi256_pd(_mm256_cmpeq_epi64(
      _mm256_and_si256(q, _mm256_set1_epi64x(1)), _mm256_set1_epi64x(1)));
  __m256d sel = _mm256_blendv_pd(pc, sinv, odd);
  const __m256d neg = _mm256_castsi256_pd(_mm256_cmpeq_epi64(
      _mm256_and_si256(_mm256_add_epi64(q, _mm256_set1_epi64x(1)), _mm256_set1_epi64x(2)),
      _mm256_set1_epi64x(2)));
  return _mm256_xor_pd(sel, _mm256_and_pd(neg, _mm256_set1_pd(-0.0)));
}

inline __m256d reduced_phase_v(__m256d th_hi, __m256d th_lo, __m256d t, __m256d lh, __m256d ll) {
  const __m256d p_hi = _mm256_mul_pd(t, lh);
  const __m256d p_e = _mm256_fmsub_pd(t, lh, p_hi);
  const __m256d p_lo = _mm256_fmadd_pd(t, ll, p_e);
  const __m256d s = _mm256_sub_pd(th_hi, p_hi);
  const __m256d bb = _mm256_sub_pd(s, th_hi);
  const __m256d err = _mm256_sub_pd(_mm256_sub_pd(th_hi, _mm256_sub_pd(s, bb)),
                                    _mm256_add_pd(p_hi, bb));
  const __m256d s_lo = _mm256_add_pd(err, _mm256_sub_pd(th_lo, p_lo));
  const __m256d magic = _mm256_set1_pd(kRoundMagic);
  const __m256d m = _mm256_fmadd_pd(s, _mm256_set1_pd(kInvTwoPi), magic);
  const __m256d k = _mm256_sub_pd(m, magic);
  const __m256d ph = _mm256_mul_pd(k, _mm256_set1_pd(kTwoPiHi));
  const __m256d e2 = _mm256_fmsub_pd(k, _mm256_set1_pd(kTwoPiHi), ph);
  return _mm256_add_pd(_mm256_sub_pd(_mm256_sub_pd(s, ph), e2),
                       _mm256_fnmadd_pd(k, _mm256_set1_pd(kTwoPiLo), s_lo));
}

#endif  // __AVX2__ && __FMA__

// sum_{n=1}^{count} rsqrt[n] * cos(theta - t * ln[n]); the table spans
// indices [1, count]. Lane partial sums collapse in a fixed order, so the
// result is a pure function of (theta, t, tables).
inline double main_sum_tabled(const PhaseDD& theta, double t, std::int64_t count,
                              const double* rsqrt, const double* ln_hi, const double* ln_lo) {
  std::int64_t n = 1;
  double acc = 0.0;
#if defined(__AVX2__) && defined(__FMA__)
  if (count >= 8) {
    const __m256d th_hi = _mm256_set1_pd(theta.hi);
    const __m256d th_lo = _mm256_set1_pd(theta.lo);
    const __m256d tv = _mm256_set1_pd(t);
    __m256d vacc = _mm256_setzero_pd();
    for (; n + 3 <= count; n += 4) {
      const __m256d lh = _mm256_loadu_pd(ln_hi + n);
      const __m256d ll = _mm256_loadu_pd(ln_lo + n);
      const __m256d rs = _mm256_loadu_pd(rsqrt + n);
      const __m256d r = reduced_phase_v(th_hi, th_lo, tv, lh, ll);
      vacc = _mm256_fmadd_pd(rs, reduced_cos_v(r), vacc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vacc);
    acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  }
#endif
  for (; n <= count; ++n) {
    acc += rsqrt[n] * reduced_cos(reduced_phase(theta, t, ln_hi[n], ln_lo[n]));
  }
  return acc;
}

}  // namespace zll::detail
