#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "zll/correlation.hpp"

using namespace zll;

namespace {

const LadderModel& model14k() {
  static const LadderModel model = build_ladder(LadderMode::numeric_hl, 14000.0, {});
  return model;
}

}  // namespace

TEST_CASE("substitution identity: f = 1 reduces to the image length") {
  const auto c = transform_identity_check(model14k(), TransformF::const_one, 1e4, 1e3);
  const double y_lo = phi_half(model14k(), 1e4);
  const double y_hi = phi_half(model14k(), 1.1e4);
  CHECK(std::abs(c.lhs - 2.0 * (y_hi - y_lo)) <= 1e-7 * c.lhs);
  CHECK(c.rel_diff <= 1e-9);
}

TEST_CASE("substitution identity: linear and |Z|^4 integrands") {
  const auto lin = transform_identity_check(model14k(), TransformF::linear, 1e4, 1e3);
  CHECK(lin.rel_diff <= 1e-6);
  const auto z4 = transform_identity_check(model14k(), TransformF::abs_z_4, 1e4, 1e3);
  CHECK(z4.rel_diff <= 1e-4);
}

TEST_CASE("window admissibility") {
  CHECK_THROWS_AS(resolve_window(model14k(), 1e4, 0.2, 0.875), std::domain_error);
  CHECK_THROWS_AS(resolve_window(model14k(), 1e4, 0.05, 0.875), std::domain_error);
  const WindowSpec w = resolve_window(model14k(), 1e4, 0.01, 0.875);
  CHECK(w.U == std::pow(1e4, 0.875 + 0.02));
  CHECK(w.phi_half_T < w.phi_half_TU);
  CHECK_FALSE(w.meets_asymptotic_condition);  // desk scale: U > T/ln T
  CHECK_THROWS_AS(correlation6(model14k(), 5e3, 0.01), std::domain_error);
}

TEST_CASE("correlation6 report algebra and bands at T = 1e4") {
  CorrelationOptions opts;
  opts.refine_sampling = 4;
  const CorrelationReport rep = correlation6(model14k(), 1e4, 0.01, opts);
  CHECK(rep.order == 6);
  CHECK(rep.lhs >= 0.0);
  CHECK(std::abs(rep.ratio * rep.rhs - rep.lhs) <= 1e-15 * std::abs(rep.lhs));
  CHECK(rep.ratio >= 0.5);
  CHECK(rep.ratio <= 2.0);
  CHECK(rep.intermediate_ratio >= 0.5);
  CHECK(rep.intermediate_ratio <= 2.0);

  // Mean-value reduction: lhs / hat must sit inside the window range of
  // Phi'(phi(t)).
  const double lo = phi_prime_big(ladder_phi(model14k(), 1e4).phi);
  const double hi = phi_prime_big(ladder_phi(model14k(), 1e4 + rep.spec.U).phi);
  const double factor = rep.lhs / rep.intermediate_hat;
  CHECK(factor >= std::min(lo, hi) - 1e-9);
  CHECK(factor <= std::max(lo, hi) + 1e-9);

  REQUIRE(rep.alpha.has_value());
  CHECK(*rep.alpha > 1e4);
  CHECK(*rep.alpha < 1e4 + rep.spec.U);
  const double mean = rep.lhs / rep.spec.U;
  CHECK(std::abs(*rep.g_alpha - mean) <= 1e-9 * mean);

  // Prediction residual is algebraically the square root of the ratio at the
  // crossing, up to ln(alpha)/ln(T) drift.
  REQUIRE(rep.prediction_residual.has_value());
  const double la = std::log(*rep.alpha);
  const double la5 = la * la * la * la * la;
  const double implied = std::sqrt(mean / (kC0 * la5)) - 1.0;
  CHECK(std::abs(*rep.prediction_residual - implied) <= 1e-6);
}

TEST_CASE("correlation reports are deterministic") {
  CorrelationOptions opts;
  opts.refine_sampling = 4;
  const CorrelationReport a = correlation6(model14k(), 1e4, 0.01, opts);
  const CorrelationReport b = correlation6(model14k(), 1e4, 0.01, opts);
  REQUIRE(a.lhs == b.lhs);
  REQUIRE(a.intermediate_hat == b.intermediate_hat);
  REQUIRE(a.quad_err == b.quad_err);
  REQUIRE(a.alpha == b.alpha);
  REQUIRE(a.prediction_residual == b.prediction_residual);
  REQUIRE(a.geometry.rho == b.geometry.rho);
}

TEST_CASE("correlation4 structure at T = 1e4") {
  const CorrelationReport rep = correlation4(model14k(), 1e4, 0.01);
  CHECK(rep.order == 4);
  CHECK(rep.lhs >= 0.0);
  CHECK_FALSE(rep.alpha.has_value());
  CHECK_FALSE(rep.prediction_residual.has_value());
  // rhs arithmetic: U ln^2 T by an independent route.
  const double U = std::exp(std::log(1e4) * (1.0 / 3.0 + 0.02));
  CHECK(std::abs(rep.rhs - U * std::log(1e4) * std::log(1e4)) <= 1e-9 * rep.rhs);
}

TEST_CASE("correlation4 reference value at T = 1e6 (arithmetic only)") {
  const double U = std::pow(1e6, 1.0 / 3.0 + 0.02);
  const double rhs = U * std::log(1e6) * std::log(1e6);
  CHECK(std::abs(rhs - 2.516e4) <= 60.0);
}

TEST_CASE("mean crossing finder against a closed-form oracle") {
  // g(t) = 3 + sin(t) over one full period starting at 0.3: the window mean
  // is exactly 3, and the leftmost crossing of the mean is at pi.
  auto g = [](double t) { return 3.0 + std::sin(t); };
  const double a = 0.3;
  const double b = 0.3 + 2.0 * std::numbers::pi;
  const auto alpha = find_mean_crossing(g, a, b, 3.0, 0.1, 1e-12);
  REQUIRE(alpha.has_value());
  CHECK(std::abs(*alpha - std::numbers::pi) <= 1e-9);

  // Constant g: no crossing anywhere.
  const auto none = find_mean_crossing([](double) { return 2.0; }, 0.0, 10.0, 3.0, 0.5, 1e-9);
  CHECK_FALSE(none.has_value());
}

TEST_CASE("mean_value_point on the real integrand") {
  const MeanValuePoint mvp = mean_value_point(model14k(), 1e4, 500.0);
  CHECK(mvp.alpha >= 1e4);
  CHECK(mvp.alpha <= 1.05e4);
  CHECK(std::abs(mvp.g_alpha - mvp.mean) <= 1e-9 * mvp.mean);
  const double l = std::log(1e4);
  CHECK(std::abs(mvp.target - kC0 * l * l * l * l * l) <= 1e-9 * mvp.target);
}

TEST_CASE("prediction check: positive prediction and shift identity fields") {
  const PredictionCheck p = prediction_check(model14k(), 1e4, 1e3);
  REQUIRE_FALSE(p.degenerate);
  CHECK(p.rhs_pred > 0.0);
  CHECK(p.lhs_abs_z >= 0.0);
  CHECK(p.shift_value > 0.0);
  CHECK(std::abs(p.shift_ratio - p.shift_value / p.shift_reference) <= 1e-15);
  CHECK(p.shift_ratio >= 0.8);
  CHECK(p.shift_ratio <= 1.25);
}

TEST_CASE("image fourth moment and the doubled-image consistency") {
  CorrelationOptions opts;
  opts.refine_sampling = 4;
  const CorrelationReport rep = correlation6(model14k(), 1e4, 0.01, opts);
  const MomentEstimate im = image_fourth_check(model14k(), 1e4, rep.spec.U);
  CHECK(im.kind == MomentKind::fourth);
  CHECK(im.ratio >= 0.5);
  CHECK(im.ratio <= 1.8);
  const double tol = 10.0 * (2.0 * im.quad_err + rep.quad_err_hat) + 1e-9 * rep.intermediate_hat;
  CHECK(std::abs(2.0 * im.numeric - rep.intermediate_hat) <= tol);
}

TEST_CASE("segment geometry: gap, bound, and desk-scale overlap honesty") {
  const double T = 1e4, eps = 0.01;
  const double U_small = eps * T / std::log(T);
  const SegmentGeometry g = segment_geometry(model14k(), T, U_small, eps);
  CHECK(g.disjoint);
  CHECK(g.rho == T - g.image_hi);
  CHECK(g.rho > g.rho_lower_bound);
  CHECK(g.image_hi < g.source_lo);

  // With the exponent window the image overlaps the source at desk scale.
  const double U_big = std::pow(T, 0.895);
  const SegmentGeometry g2 = segment_geometry(model14k(), T, U_big, eps);
  CHECK_FALSE(g2.disjoint);
  CHECK(g2.rho == 0.0);
}
