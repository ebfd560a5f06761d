#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "zll/quadrature.hpp"
#include "zll/zeta_rs.hpp"

using namespace zll;

TEST_CASE("constant and full-period integrands") {
  const auto c = integrate([](double) { return 1.0; }, 0.0, 5.0, 1e-12);
  CHECK(std::abs(c.value - 5.0) <= 1e-12);
  CHECK(c.err_est >= 0.0);
  CHECK(c.evals >= c.panels * 16);

  const auto osc = integrate([](double x) { return std::cos(x); }, 0.0, 2.0 * std::numbers::pi, 1e-12);
  CHECK(std::abs(osc.value) <= 1e-10);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("non-convergence raises after the refinement budget") {
  QuadOptions opts;
  opts.max_refine = 0;
  // Absurd absolute tolerance on a Z^2 window: the conservative error
  // estimate cannot reach it without refinement.
  CHECK_THROWS_AS(integrate(hardy_z_sq, 1e4, 1.02e4, 1e-30, opts), QuadratureError);
}

TEST_CASE("Z^2 window self-consistency under halved panels") {
  const auto base = integrate(hardy_z_sq, 1e4, 1.1e4, 1e-3);
  QuadOptions half;
  half.kappa = 0.25;
  const auto fine = integrate(hardy_z_sq, 1e4, 1.1e4, 1e-3, half);
  CHECK(std::abs(base.value - fine.value) <= base.err_est + fine.err_est + 1e-9 * base.value);
}

TEST_CASE("linearity on random combinations") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  auto f = [](double x) { return std::sin(0.7 * x) + 0.2 * x; };
  auto g = [](double x) { return std::exp(-0.001 * x) * std::cos(1.3 * x); };
  for (int trial = 0; trial < 5; ++trial) {
    const double a = coef(rng), b = coef(rng);
    const auto fa = integrate(f, 50.0, 90.0, 1e-10);
    const auto ga = integrate(g, 50.0, 90.0, 1e-10);
    const auto combo =
        integrate([&](double x) { return a * f(x) + b * g(x); }, 50.0, 90.0, 1e-10);
    const double expect = a * fa.value + b * ga.value;
    const double slack =
        2.0 * (std::abs(a) * fa.err_est + std::abs(b) * ga.err_est + combo.err_est) + 1e-12;
    CAPTURE(a, b);
    CHECK(std::abs(combo.value - expect) <= slack);
  }
}

TEST_CASE("interval additivity on a Z^2 integrand") {
  const auto whole = integrate(hardy_z_sq, 2e4, 2.06e4, 1e-4);
  const auto left = integrate(hardy_z_sq, 2e4, 2.0321e4, 1e-4);
  const auto right = integrate(hardy_z_sq, 2.0321e4, 2.06e4, 1e-4);
  const double slack = whole.err_est + left.err_est + right.err_est + 1e-9 * whole.value;
  CHECK(std::abs(whole.value - (left.value + right.value)) <= slack);
}

TEST_CASE("single- and multi-thread runs are bit-identical") {
  QuadOptions one;
  one.threads = 1;
  QuadOptions two;
  two.threads = 2;
  const auto a = integrate(hardy_z_sq, 1e4, 1.03e4, 1e-4, one);
  const auto b = integrate(hardy_z_sq, 1e4, 1.03e4, 1e-4, two);
  REQUIRE(a.value == b.value);
  REQUIRE(a.err_est == b.err_est);
  REQUIRE(a.panels == b.panels);
}

TEST_CASE("pairwise sum is grouping-invariant and accurate") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(10001);
  long double exact = 0.0L;
  for (auto& x : v) {
    x = dist(rng);
    exact += x;
  }
  const double s = pairwise_sum(v);
  CHECK(std::abs(s - static_cast<double>(exact)) <= 1e-12);
}

TEST_CASE("cumulative grid: constant integrand prefix") {
  const auto grid = cumulative_grid([](double) { return 1.0; }, 0.0, 10.0, 1.0);
  REQUIRE(grid.nodes() == 11);
  for (std::int64_t i = 0; i < grid.nodes(); ++i) {
    CHECK(std::abs(grid.prefix[static_cast<std::size_t>(i)] - static_cast<double>(i)) <= 1e-13);
  }
}

TEST_CASE("cumulative grid node count rounds the last node onto b") {
  const auto grid = cumulative_grid([](double) { return 2.0; }, 0.0, 1.9, 0.5);
  REQUIRE(grid.nodes() == 5);  // 0, .5, 1, 1.5, 1.9
  CHECK(grid.node(grid.nodes() - 1) == 1.9);
  CHECK(std::abs(grid.prefix.back() - 3.8) <= 1e-13);
}

TEST_CASE("cumulative grid matches one-shot integration and stays monotone") {
  const auto grid = cumulative_grid(hardy_z_sq, 10.0, 2000.0, 0.5);
  const auto oneshot = integrate(hardy_z_sq, 10.0, 2000.0, 1e-4);
  CHECK(std::abs(grid.prefix.back() - oneshot.value) <= 1e-6 * oneshot.value);
  for (std::size_t i = 1; i < grid.prefix.size(); ++i) {
    REQUIRE(grid.prefix[i] >= grid.prefix[i - 1]);
  }
}

TEST_CASE("cumulative grid thread bit-identity") {
  QuadOptions one;
  one.threads = 1;
  QuadOptions two;
  two.threads = 2;
  const auto a = cumulative_grid(hardy_z_sq, 10.0, 500.0, 0.25, one);
  const auto b = cumulative_grid(hardy_z_sq, 10.0, 500.0, 0.25, two);
  REQUIRE(a.prefix == b.prefix);
}

TEST_CASE("panel fit antiderivative matches direct integration inside the panel") {
  const auto fit = fit_panel(hardy_z_sq, 5000.0, 5000.25);
  for (double frac : {0.15, 0.5, 0.83}) {
    const double t = 5000.0 + 0.25 * frac;
    const auto direct = integrate(hardy_z_sq, 5000.0, t, 1e-11);
    CHECK(std::abs(fit.antiderivative(t) - direct.value) <= 1e-10);
  }
  // Endpoint consistency with the plain panel integral.
  const auto& rule = detail::gauss_legendre<16>();
  double dot = 0.0;
  for (int j = 0; j < 16; ++j) {
    dot += rule.weight[j] * hardy_z_sq(5000.0 + 0.125 * (rule.node[j] + 1.0));
  }
  const double panel_integral = 0.125 * dot;
  CHECK(std::abs(fit.antiderivative(5000.25) - panel_integral) <= 1e-12);
}
