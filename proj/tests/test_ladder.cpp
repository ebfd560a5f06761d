#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "zll/ladder.hpp"
#include "zll/moments.hpp"

using namespace zll;

namespace {

const LadderModel& small_model() {
  static const LadderModel model = build_ladder(LadderMode::numeric_hl, 14000.0, {});
  return model;
}

}  // namespace

TEST_CASE("analytic hl value at T = 1e4") {
  const LadderModel analytic = build_ladder(LadderMode::analytic_hl, 14000.0, {});
  const double v = hl_integral(analytic, 1e4);
  CHECK(std::abs(v - 7.5269e4) <= 15.0);  // T ln T + (2c-1-ln 2pi) T
  CHECK(v == second_moment_asymptotic(1e4));
  CHECK_THROWS_AS(hl_integral(analytic, 50.0), std::range_error);
}

TEST_CASE("numeric and analytic hl agree within the remainder band") {
  const double num = hl_integral(small_model(), 1e4);
  const double ana = second_moment_asymptotic(1e4);
  CHECK(std::abs(num - ana) <= 3.0 * std::sqrt(1e4) * std::log(1e4));
}

TEST_CASE("hl at the grid head equals the head constant") {
  const LadderModel& m = small_model();
  CHECK(hl_integral(m, m.t_head) == m.head_constant);
  CHECK(m.head_constant > 0.0);
}

TEST_CASE("hl is nondecreasing across nodes and mid-panel points") {
  const LadderModel& m = small_model();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(m.t_head, m.t_max);
  std::vector<double> ts(400);
  for (auto& t : ts) t = dist(rng);
  std::sort(ts.begin(), ts.end());
  double prev = hl_integral(m, m.t_head);
  for (const double t : ts) {
    const double cur = hl_integral(m, t);
    REQUIRE(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("F inversion round-trips to 1e-9 relative") {
  const LadderModel& m = small_model();
  for (const double t : {150.0, 1234.5, 5000.0, 9999.25, 13500.0}) {
    const LadderPoint p = ladder_phi(m, t);
    const double hl = hl_integral(m, t);
    CHECK(std::abs(ladder_f(p.phi_half) - hl) <= 1e-9 * hl);
    CHECK(p.phi == 2.0 * p.phi_half);
    CHECK(p.z_hat_sq >= 0.0);
  }
  CHECK_THROWS_AS(ladder_phi(m, 99.0), std::domain_error);
}

TEST_CASE("phi' growth factor sits near half log t") {
  const LadderPoint p = ladder_phi(small_model(), 1e4);
  const double ratio = phi_prime_big(p.phi) / (0.5 * std::log(1e4));
  CHECK(ratio >= 0.85);
  CHECK(ratio <= 1.15);
}

TEST_CASE("defect is positive and tracks (1-c) pi(t)") {
  const LadderModel& m = small_model();
  for (const double t : {1000.0, 2500.0, 5000.0, 10000.0, 13900.0}) {
    const DefectCheck d = ladder_defect(m, t);
    CAPTURE(t);
    CHECK(d.defect > 0.0);
    CHECK(d.reference > 0.0);
  }
  const DefectCheck d = ladder_defect(m, 1e4);
  CHECK(d.ratio >= 0.8);
  CHECK(d.ratio <= 1.25);
}

TEST_CASE("phi is monotone with image left of source") {
  const LadderModel& m = small_model();
  double prev_y = 0.0;
  for (int i = 0; i <= 120; ++i) {
    const double t = 120.0 + i * (13900.0 - 120.0) / 120.0;
    const double y = phi_half(m, t);
    REQUIRE(y > prev_y);
    if (t >= 1000.0) REQUIRE(y < t);
    prev_y = y;
  }
}

TEST_CASE("window-averaged finite difference of phi matches z_hat_sq in the mean") {
  const LadderModel& m = small_model();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(1e4, 1.1e4);
  const double h = 5.0;
  double fd_mean = 0.0;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    const double t = dist(rng);
    const double fd = (ladder_phi(m, t + h).phi - ladder_phi(m, t - h).phi) / (2.0 * h);
    fd_mean += fd;
  }
  fd_mean /= n;
  // Windowed mean of z_hat_sq over the same range via its hat-integral form.
  const auto hat = integrate(
      [&m](double t) {
        const double y = phi_half(m, t);
        return hardy_z_sq(t) / phi_prime_big(2.0 * y);
      },
      1e4, 1.1e4, 1e-3);
  const double window_mean = hat.value / 1e3;
  CHECK(std::abs(fd_mean - window_mean) <= 0.10 * window_mean);
}

TEST_CASE("slope behaves and is reproducible from ladder points") {
  const LadderModel& m = small_model();
  const double T = 1e4;
  const double U = std::pow(T, 0.875);
  const double slope = ladder_slope(m, T, U);
  CHECK(slope > 0.0);
  CHECK(std::abs(slope - 1.0) <= 3.0 * std::log(std::log(T)) / std::log(T));
  const LadderPoint a = ladder_phi(m, T);
  const LadderPoint b = ladder_phi(m, T + U);
  REQUIRE(slope == (b.phi - a.phi) / (2.0 * U));  // bit-identical recompute
}

TEST_CASE("build rejects a step too wide for the requested height") {
  LadderBuildOptions opts;
  opts.step = 1.0;
  CHECK_THROWS_AS(build_ladder(LadderMode::numeric_hl, 5e6, opts), std::invalid_argument);
}

TEST_CASE("grid build is thread-count invariant") {
  LadderBuildOptions one;
  one.threads = 1;
  LadderBuildOptions two;
  two.threads = 2;
  const LadderModel a = build_ladder(LadderMode::numeric_hl, 600.0, one);
  const LadderModel b = build_ladder(LadderMode::numeric_hl, 600.0, two);
  REQUIRE(a.prefix == b.prefix);
  REQUIRE(a.head_constant == b.head_constant);
}

TEST_CASE("cache round-trip reproduces phi bit-exactly") {
  const LadderModel& m = small_model();
  const std::string path = (std::filesystem::temp_directory_path() / "zll-test-ladder.cache").string();
  save_ladder_cache(m, path);
  const LadderModel loaded = load_ladder_cache(path);
  REQUIRE(loaded.nodes() == m.nodes());
  REQUIRE(loaded.head_constant == m.head_constant);
  REQUIRE(loaded.t_max == m.t_max);
  REQUIRE(ladder_cache_matches(loaded, LadderMode::numeric_hl, m.t_head, m.step, m.t_max));

  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> dist(120.0, m.t_max);
  for (int i = 0; i < 1000; ++i) {
    const double t = dist(rng);
    REQUIRE(phi_half(m, t) == phi_half(loaded, t));
  }
  std::filesystem::remove(path);
}

TEST_CASE("cache mismatch is detected, not silently reused") {
  const LadderModel& m = small_model();
  CHECK_FALSE(ladder_cache_matches(m, LadderMode::analytic_hl, m.t_head, m.step, 1000.0));
  CHECK_FALSE(ladder_cache_matches(m, LadderMode::numeric_hl, m.t_head, 0.5, 1000.0));
  CHECK_FALSE(ladder_cache_matches(m, LadderMode::numeric_hl, m.t_head, m.step, m.t_max + 100.0));
  CHECK(ladder_cache_matches(m, LadderMode::numeric_hl, m.t_head, m.step, m.t_max - 100.0));
}

TEST_CASE("range errors outside the grid") {
  const LadderModel& m = small_model();
  CHECK_THROWS_AS(hl_integral(m, m.t_max + 1.0), std::range_error);
  CHECK_THROWS_AS(hl_integral(m, 5.0), std::range_error);
  CHECK_THROWS_AS(ladder_slope(m, m.t_max - 10.0, 100.0), std::range_error);
  CHECK_THROWS_AS(ladder_slope(m, 1e4, -1.0), std::domain_error);
}
