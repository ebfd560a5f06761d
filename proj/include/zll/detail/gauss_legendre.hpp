#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

namespace zll::detail {

template <int Order>
struct GaussLegendre {
  std::array<double, Order> node;
  std::array<double, Order> weight;
};

// Nodes and weights on [-1, 1], found by Newton iteration on P_Order from
// the Chebyshev initial guess. Generated once at startup; no hand-typed
// tables to mistype. Nodes are stored in ascending order so panel sweeps
// advance monotonically (integrand caches like that).
template <int Order>
inline const GaussLegendre<Order>& gauss_legendre() {
  static const GaussLegendre<Order> rule = [] {
    GaussLegendre<Order> r{};
    for (int i = 0; i < Order; ++i) {
      long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (Order + 0.5L));
      long double p1 = 0, dp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        long double p0 = 1.0L;
        p1 = x;
        for (int k = 2; k <= Order; ++k) {
          const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = Order * (x * p1 - p0) / (x * x - 1.0L);
        const long double dx = p1 / dp;
        x -= dx;
        if (std::abs(static_cast<double>(dx)) < 1e-19) break;
      }
      r.node[i] = static_cast<double>(x);
      r.weight[i] = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
    }
    for (int i = 0; i < Order / 2; ++i) {
      std::swap(r.node[i], r.node[Order - 1 - i]);
      std::swap(r.weight[i], r.weight[Order - 1 - i]);
    }
    return r;
  }();
  return rule;
}

}  // namespace zll::detail
