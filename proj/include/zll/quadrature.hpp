#pragma once

// Quadrature for oscillatory integrands built from Z(t). Panels are sized a
// priori from the local zero gap of Z (about 2pi/ln(t/2pi)) instead of
// adaptive subdivision: integrand cost dominates and the oscillation scale
// is known analytically, so fixed 16-point Gauss-Legendre panels at half a
// gap are both cheaper and deterministic. Each panel is also evaluated as
// two half panels; the refined value is kept and the difference feeds a
// conservative error estimate.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "zll/detail/gauss_legendre.hpp"
#include "zll/parallel.hpp"

namespace zll {

struct IntegralEstimate {
  double value = 0.0;
  double err_est = 0.0;    // conservative absolute estimate
  std::int64_t panels = 0;
  std::int64_t evals = 0;
};

template <std::size_t K>
struct MultiEstimate {
  std::array<double, K> value{};
  std::array<double, K> err_est{};
  std::int64_t panels = 0;
  std::int64_t evals = 0;
};

struct QuadOptions {
  int threads = 1;
  double kappa = 0.5;       // panel width cap, in units of the local zero gap
  int max_refine = 8;       // global halvings before declaring non-convergence
  int refine_sampling = 1;  // split-compare every k-th panel; k>1 extrapolates
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mean spacing of Z zeros near height t.
inline double zero_gap(double t) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double floor_t = t < 6.0 * std::numbers::pi ? 6.0 * std::numbers::pi : t;
  return kTwoPi / std::log(floor_t / kTwoPi);
}

inline double panel_width_cap(double t, double kappa) { return kappa * zero_gap(t); }

namespace detail {

// Panel boundaries over [a, b], widths capped by the local zero gap scaled
// with kappa. Built left to right; deterministic for given inputs.
inline std::vector<double> panel_boundaries(double a, double b, double kappa) {
  std::vector<double> bounds;
  const double span = b - a;
  bounds.reserve(static_cast<std::size_t>(span / panel_width_cap(b, kappa)) + 8);
  bounds.push_back(a);
  double t = a;
  while (t < b) {
    double w = panel_width_cap(t, kappa);
    if (w > span / 4.0) w = span / 4.0;
    double next = t + w;
    if (next >= b || b - next < 1e-12 * span) next = b;
    bounds.push_back(next);
    t = next;
  }
  return bounds;
}

template <std::size_t K, class F>
inline void gl16_values(F&& f, double x0, double x1, std::array<double, K>* out) {
  const auto& rule = gauss_legendre<16>();
  const double c = 0.5 * (x0 + x1);
  const double h = 0.5 * (x1 - x0);
  for (std::size_t k = 0; k < K; ++k) out[0][k] = 0.0;
  for (int j = 0; j < 16; ++j) {
    const std::array<double, K> fv = f(c + h * rule.node[j]);
    for (std::size_t k = 0; k < K; ++k) out[0][k] += rule.weight[j] * fv[k];
  }
  for (std::size_t k = 0; k < K; ++k) out[0][k] *= h;
}

}  // namespace detail

// Integral of a vector-valued integrand f: double -> array<double, K> over
// [a, b]. tol is an absolute target per component; err_est is conservative
// (sum of |refined - coarse| over panels). Throws QuadratureError if the
// estimate still exceeds tol after max_refine global halvings.
template <std::size_t K, class F>
MultiEstimate<K> integrate_multi(F&& f, double a, double b, const std::array<double, K>& tol,
                                 const QuadOptions& opts = {}) {
  if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");
  for (const double tv : tol) {
    if (!(tv > 0)) throw std::invalid_argument("integrate: requires tol > 0");
  }

  double kappa = opts.kappa;
  const int sampling = opts.refine_sampling < 1 ? 1 : opts.refine_sampling;
  std::int64_t evals_total = 0;

  for (int attempt = 0;; ++attempt) {
    const std::vector<double> bounds = detail::panel_boundaries(a, b, kappa);
    const std::int64_t n_panels = static_cast<std::int64_t>(bounds.size()) - 1;

    std::vector<std::array<double, K>> panel_value(static_cast<std::size_t>(n_panels));
    std::vector<std::array<double, K>> panel_delta(
        static_cast<std::size_t>((n_panels + sampling - 1) / sampling));

    parallel_for(n_panels, opts.threads, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t i = lo; i < hi; ++i) {
        const double x0 = bounds[static_cast<std::size_t>(i)];
        const double x1 = bounds[static_cast<std::size_t>(i) + 1];
        std::array<double, K> coarse;
        detail::gl16_values<K>(f, x0, x1, &coarse);
        if (i % sampling == 0) {
          const double xm = 0.5 * (x0 + x1);
          std::array<double, K> left, right;
          detail::gl16_values<K>(f, x0, xm, &left);
          detail::gl16_values<K>(f, xm, x1, &right);
          std::array<double, K> refined;
          for (std::size_t k = 0; k < K; ++k) refined[k] = left[k] + right[k];
          auto& delta = panel_delta[static_cast<std::size_t>(i / sampling)];
          for (std::size_t k = 0; k < K; ++k) delta[k] = std::abs(refined[k] - coarse[k]);
          // Keep the refined value when every panel is being split; under
          // sampling all panels must stay at the same resolution.
          panel_value[static_cast<std::size_t>(i)] = sampling == 1 ? refined : coarse;
        } else {
          panel_value[static_cast<std::size_t>(i)] = coarse;
        }
      }
    });

    const std::int64_t sampled = static_cast<std::int64_t>(panel_delta.size());
    evals_total += n_panels * 16 + sampled * 32;

    MultiEstimate<K> est;
    est.panels = n_panels;
    est.evals = evals_total;
    std::vector<double> column(static_cast<std::size_t>(n_panels));
    std::vector<double> delta_column(static_cast<std::size_t>(sampled));
    bool ok = true;
    for (std::size_t k = 0; k < K; ++k) {
      for (std::int64_t i = 0; i < n_panels; ++i) {
        column[static_cast<std::size_t>(i)] = panel_value[static_cast<std::size_t>(i)][k];
      }
      for (std::int64_t i = 0; i < sampled; ++i) {
        delta_column[static_cast<std::size_t>(i)] = panel_delta[static_cast<std::size_t>(i)][k];
      }
      est.value[k] = pairwise_sum(column);
      const double sampled_err = pairwise_sum(delta_column);
      est.err_est[k] = sampling == 1 ? sampled_err : 2.0 * sampling * sampled_err;
      if (est.err_est[k] > tol[k]) ok = false;
    }
    if (ok) return est;
    if (attempt >= opts.max_refine) {
      throw QuadratureError("integrate: refinement stalled before reaching tolerance");
    }
    kappa *= 0.5;
  }
}

template <class F>
IntegralEstimate integrate(F&& f, double a, double b, double tol, const QuadOptions& opts = {}) {
  auto wrapped = [&f](double t) { return std::array<double, 1>{f(t)}; };
  const MultiEstimate<1> m = integrate_multi<1>(wrapped, a, b, std::array<double, 1>{tol}, opts);
  return IntegralEstimate{m.value[0], m.err_est[0], m.panels, m.evals};
}

// Prefix integrals of f on an even grid: prefix[i] = integral from a to the
// i-th node, nodes a + i*step with the last node rounded onto b. Step values
// are computed independently (parallelizable), the prefix scan is
// sequential, so results do not depend on the thread count.
struct CumulativeGrid {
  double a = 0.0;
  double b = 0.0;
  double step = 0.0;
  std::vector<double> prefix;
  double err_est = 0.0;
  std::int64_t evals = 0;

  std::int64_t nodes() const { return static_cast<std::int64_t>(prefix.size()); }
  double node(std::int64_t i) const {
    return i + 1 == nodes() ? b : a + static_cast<double>(i) * step;
  }
};

template <class F>
CumulativeGrid cumulative_grid(F&& f, double a, double b, double step,
                               const QuadOptions& opts = {}) {
  if (!(a < b)) throw std::invalid_argument("cumulative_grid: requires a < b");
  if (!(step > 0.0 && step <= 1.0)) {
    throw std::invalid_argument("cumulative_grid: requires 0 < step <= 1");
  }

  const auto n_steps = static_cast<std::int64_t>(std::ceil((b - a) / step - 1e-12));
  std::vector<double> step_value(static_cast<std::size_t>(n_steps));
  std::vector<double> step_delta(static_cast<std::size_t>((n_steps + 63) / 64), 0.0);

  auto wrapped = [&f](double t) { return std::array<double, 1>{f(t)}; };
  auto sub_count = [&](double x0, double x1) {
    // Sub-panels if the zero-gap cap is tighter than the step.
    const double cap = panel_width_cap(x1, opts.kappa);
    return cap >= (x1 - x0) ? 1 : static_cast<int>(std::ceil((x1 - x0) / cap));
  };

  parallel_for(n_steps, opts.threads, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      const double x0 = a + static_cast<double>(i) * step;
      const double x1 = i + 1 == n_steps ? b : a + static_cast<double>(i + 1) * step;
      const int subs = sub_count(x0, x1);
      double v = 0.0;
      std::array<double, 1> tmp;
      for (int s = 0; s < subs; ++s) {
        const double y0 = x0 + (x1 - x0) * s / subs;
        const double y1 = s + 1 == subs ? x1 : x0 + (x1 - x0) * (s + 1) / subs;
        detail::gl16_values<1>(wrapped, y0, y1, &tmp);
        v += tmp[0];
      }
      step_value[static_cast<std::size_t>(i)] = v;
      if (i % 64 == 0) {
        // Sampled split comparison for the error estimate.
        double refined = 0.0;
        for (int s = 0; s < 2 * subs; ++s) {
          const double y0 = x0 + (x1 - x0) * s / (2 * subs);
          const double y1 = s + 1 == 2 * subs ? x1 : x0 + (x1 - x0) * (s + 1) / (2 * subs);
          detail::gl16_values<1>(wrapped, y0, y1, &tmp);
          refined += tmp[0];
        }
        step_delta[static_cast<std::size_t>(i / 64)] = std::abs(refined - v);
      }
    }
  });

  CumulativeGrid grid;
  grid.a = a;
  grid.b = b;
  grid.step = step;
  grid.prefix.resize(static_cast<std::size_t>(n_steps) + 1);
  grid.prefix[0] = 0.0;
  for (std::int64_t i = 0; i < n_steps; ++i) {
    grid.prefix[static_cast<std::size_t>(i) + 1] =
        grid.prefix[static_cast<std::size_t>(i)] + step_value[static_cast<std::size_t>(i)];
  }
  std::int64_t evals = 0;
  for (std::int64_t i = 0; i < n_steps; ++i) {
    const double x0 = a + static_cast<double>(i) * step;
    const double x1 = i + 1 == n_steps ? b : a + static_cast<double>(i + 1) * step;
    const int subs = sub_count(x0, x1);
    evals += 16 * subs + (i % 64 == 0 ? 32 * subs : 0);
  }
  grid.evals = evals;
  grid.err_est = 2.0 * 64.0 * pairwise_sum(step_delta);
  return grid;
}

// Degree-15 Legendre fit of f on one panel from its 16 Gauss nodes, plus the
// closed-form antiderivative. Lets a cumulative grid be evaluated between
// nodes with a derivative that matches f to spectral accuracy, which is what
// makes the change-of-variables identity hold to quadrature precision.
struct PanelFit {
  double t0 = 0.0;
  double t1 = 0.0;
  std::array<double, 16> leg{};

  // integral of the fit from t0 to t; by construction the value at t1 equals
  // the plain GL16 panel integral up to one rounding.
  double antiderivative(double t) const {
    const double h = 0.5 * (t1 - t0);
    const double xi = (t - t0) / h - 1.0;
    // P_0..P_16 at xi.
    double pk[17];
    pk[0] = 1.0;
    pk[1] = xi;
    for (int k = 2; k <= 16; ++k) {
      pk[k] = ((2 * k - 1) * xi * pk[k - 1] - (k - 1) * pk[k - 2]) / k;
    }
    double acc = leg[0] * (xi + 1.0);
    for (int k = 1; k <= 15; ++k) {
      acc += leg[static_cast<std::size_t>(k)] * (pk[k + 1] - pk[k - 1]) / (2 * k + 1);
    }
    return acc * h;
  }
};

namespace detail {

// M[k][j] = (2k+1)/2 * w_j * P_k(x_j): discrete Legendre transform of GL16
// node values (exact for the degree-15 interpolant).
inline const std::array<std::array<double, 16>, 16>& legendre_fit_matrix() {
  static const auto m = [] {
    const auto& rule = gauss_legendre<16>();
    std::array<std::array<double, 16>, 16> out{};
    for (int j = 0; j < 16; ++j) {
      const double x = rule.node[j];
      double pk[16];
      pk[0] = 1.0;
      pk[1] = x;
      for (int k = 2; k < 16; ++k) {
        pk[k] = ((2 * k - 1) * x * pk[k - 1] - (k - 1) * pk[k - 2]) / k;
      }
      for (int k = 0; k < 16; ++k) {
        out[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
            (2.0 * k + 1.0) / 2.0 * rule.weight[j] * pk[k];
      }
    }
    return out;
  }();
  return m;
}

}  // namespace detail

template <class F>
PanelFit fit_panel(F&& f, double t0, double t1) {
  const auto& rule = detail::gauss_legendre<16>();
  const auto& mat = detail::legendre_fit_matrix();
  const double c = 0.5 * (t0 + t1);
  const double h = 0.5 * (t1 - t0);
  std::array<double, 16> fv;
  for (int j = 0; j < 16; ++j) fv[static_cast<std::size_t>(j)] = f(c + h * rule.node[j]);
  PanelFit fit;
  fit.t0 = t0;
  fit.t1 = t1;
  for (int k = 0; k < 16; ++k) {
    double acc = 0.0;
    for (int j = 0; j < 16; ++j) {
      acc += mat[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] *
             fv[static_cast<std::size_t>(j)];
    }
    fit.leg[static_cast<std::size_t>(k)] = acc;
  }
  return fit;
}

}  // namespace zll
