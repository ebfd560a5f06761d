#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace zll::mp {

// 40 working decimal digits: comfortable margin over the 1e-20 oracle
// contract even after the argument reduction losses at t ~ 1e6.
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<40>>;

// Minimal complex arithmetic over Real; only what the oracle needs.
struct Complex {
  Real re{0};
  Real im{0};

  Complex() = default;
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  explicit Complex(double r) : re(r), im(0) {}

  Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
  Complex operator-(const Complex& o) const { return {re - o.re, im - o.im}; }
  Complex operator*(const Complex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  Complex operator*(const Real& s) const { return {re * s, im * s}; }
  Complex operator/(const Complex& o) const {
    const Real d = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
  }
  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
};

inline Real abs(const Complex& z) {
  using boost::multiprecision::sqrt;
  return sqrt(z.re * z.re + z.im * z.im);
}

// exp(i*phi) for real phi.
inline Complex cis(const Real& phi) {
  using boost::multiprecision::cos;
  using boost::multiprecision::sin;
  return {cos(phi), sin(phi)};
}

// Principal complex logarithm; callers keep re > 0 so no branch issues.
inline Complex log(const Complex& z) {
  using boost::multiprecision::atan2;
  using boost::multiprecision::log;
  return {log(abs(z)), atan2(z.im, z.re)};
}

inline Complex reciprocal(const Complex& z) {
  const Real d = z.re * z.re + z.im * z.im;
  return {z.re / d, -z.im / d};
}

}  // namespace zll::mp
