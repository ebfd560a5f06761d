#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "zll/moments.hpp"

using namespace zll;

TEST_CASE("second moment asymptotic arithmetic") {
  const double v = second_moment_asymptotic(1e4);
  const long double ref =
      1e4L * std::log(1e4L) + (2.0L * kEulerC - 1.0L - std::log(2.0L * std::numbers::pi_v<long double>)) * 1e4L;
  CHECK(std::abs(v - static_cast<double>(ref)) <= 1e-8);
  CHECK(std::abs(v - 7.5269e4) <= 15.0);
  CHECK_THROWS_AS(second_moment_asymptotic(50.0), std::domain_error);
}

TEST_CASE("second moment grows superlinearly") {
  double prev = second_moment_asymptotic(100.0) / 100.0;
  for (const double T : {300.0, 1e3, 1e4, 1e5, 1e6}) {
    const double cur = second_moment_asymptotic(T) / T;
    REQUIRE(cur > prev);
    prev = cur;
  }
}

TEST_CASE("windowed second asymptotic: difference bound and limits") {
  for (const double T : {1e3, 1e4, 1e5}) {
    const double U = std::pow(T, 0.875);
    const double windowed = windowed_second_asymptotic(T, U);
    const double diff = second_moment_asymptotic(T + U) - second_moment_asymptotic(T);
    CAPTURE(T);
    CHECK(std::abs(windowed - diff) <= U * U / T + 1e-9);
  }
  // Linear in U: small windows give proportionally small values.
  const double tiny = windowed_second_asymptotic(1e4, 1e-6);
  CHECK(tiny > 0.0);
  CHECK(tiny <= 1e-5);
  CHECK_THROWS_AS(windowed_second_asymptotic(1e4, 0.0), std::domain_error);
  CHECK_THROWS_AS(windowed_second_asymptotic(1e4, 2e4), std::domain_error);
}

TEST_CASE("windowed second asymptotic spot value at T = 1e5") {
  const double U = std::pow(1e5, 0.875);
  const double v = windowed_second_asymptotic(1e5, U);
  CHECK(std::abs(v - 2.567e5) <= 2e3);
}

TEST_CASE("fourth moment leading term arithmetic and scaling") {
  const double v = fourth_moment_leading(1e4);
  CHECK(std::abs(v - 3.645e6) <= 5e3);
  const double T = 7e4;
  const double ratio = fourth_moment_leading(std::numbers::e * T) / fourth_moment_leading(T);
  const double closed = std::numbers::e * std::pow((std::log(T) + 1.0) / std::log(T), 4.0);
  CHECK(std::abs(ratio - closed) <= 1e-12);
}

TEST_CASE("windowed numeric second moment near its reference at T = 1e4") {
  const auto m = windowed_numeric_moment(1e4, std::pow(1e4, 0.875), 2);
  CHECK(m.numeric >= 0.0);
  CHECK(m.ratio == m.numeric / m.asymptotic_main);
  CHECK(m.ratio >= 0.90);
  CHECK(m.ratio <= 1.10);
}

TEST_CASE("windowed numeric fourth moment against the leading term") {
  const auto m = windowed_numeric_moment(1e4, std::pow(1e4, 0.875), 4);
  CHECK(m.numeric >= 0.0);
  CHECK(m.kind == MomentKind::fourth);
  // Lower-order terms are missing from the reference; wide band on purpose.
  CHECK(m.ratio >= 0.5);
  CHECK(m.ratio <= 1.9);
}

TEST_CASE("window additivity of numeric moments") {
  const double T = 2e4, U = 400.0;
  const auto whole = windowed_numeric_moment(T, 2.0 * U, 2);
  const auto left = windowed_numeric_moment(T, U, 2);
  const auto right = windowed_numeric_moment(T + U, U, 2);
  const double slack = whole.quad_err + left.quad_err + right.quad_err + 1e-9 * whole.numeric;
  CHECK(std::abs(whole.numeric - (left.numeric + right.numeric)) <= slack);
}

TEST_CASE("moment preconditions") {
  CHECK_THROWS_AS(windowed_numeric_moment(1e4, 0.0, 2), std::domain_error);
  CHECK_THROWS_AS(windowed_numeric_moment(1e4, 100.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(fourth_moment_leading(10.0), std::domain_error);
}
