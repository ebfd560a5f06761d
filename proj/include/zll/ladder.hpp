#pragma once

// A concrete increasing reparametrization phi(t) of the critical line tied
// to the cumulative mass of Z^2. With
//
//   F(y) = y ln y + (c - ln 2pi) y,      hl(t) = integral_0^t Z^2(s) ds,
//
// phi(t)/2 is defined as the F-inverse of hl(t). F's derivative is
// F'(y) = ln y + 1 + c - ln 2pi, so Phi'(x) = F'(x/2)/2 matches the
// half-log growth of the second moment, d phi/dt equals
// Z^2(t)/Phi'(phi(t)) exactly, and t - phi(t)/2 tracks (1-c) pi(t). The
// numeric mode carries hl as a prefix grid of Z^2 with a spectral in-panel
// antiderivative, so the change-of-variables identity survives numerically
// at the 1e-9 level instead of degrading to interpolation error.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zll/constants.hpp"
#include "zll/primes.hpp"
#include "zll/quadrature.hpp"
#include "zll/zeta_oracle.hpp"
#include "zll/zeta_rs.hpp"

namespace zll {

enum class LadderMode { numeric_hl, analytic_hl };

inline const char* to_string(LadderMode m) {
  return m == LadderMode::numeric_hl ? "numeric_hl" : "analytic_hl";
}

// Minimum height for ladder inversion: below this F loses monotonic margin
// and the asymptotic regime is meaningless anyway.
inline constexpr double kLadderTMin = 100.0;

struct LadderPoint {
  double t;
  double phi;        // phi(t)
  double phi_half;   // phi(t)/2, the image coordinate
  double z_hat_sq;   // Z^2(t) / Phi'(phi(t))
  double defect;     // t - phi(t)/2
};

struct DefectCheck {
  double defect;
  double reference;  // (1-c) pi(t)
  double ratio;
};

struct LadderModel {
  LadderMode mode = LadderMode::numeric_hl;
  double t_head = 10.0;
  double head_constant = 0.0;  // integral of Z^2 over [0, t_head] (oracle)
  double step = 0.25;
  double t_max = 0.0;
  std::vector<double> prefix;  // prefix[i] = integral_{t_head}^{node i} Z^2
  double grid_err_est = 0.0;
  std::uint64_t serial = 0;    // identity stamp for the in-panel fit cache

  std::int64_t nodes() const { return static_cast<std::int64_t>(prefix.size()); }
  double node(std::int64_t i) const {
    return i + 1 == nodes() ? t_max : t_head + static_cast<double>(i) * step;
  }
};

// F and its derivative; Phi'(x) = F'(x/2)/2.
inline double ladder_f(double y) { return y * std::log(y) + (kEulerC - kLnTwoPi) * y; }
inline double ladder_f_prime(double y) { return std::log(y) + 1.0 + kEulerC - kLnTwoPi; }
inline double phi_prime_big(double x) { return 0.5 * ladder_f_prime(0.5 * x); }

namespace detail {

inline std::uint64_t next_ladder_serial() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

}  // namespace detail

struct LadderBuildOptions {
  double t_head = 10.0;
  double step = 0.25;
  int threads = 1;
  // Called with fraction complete in [0,1] at coarse intervals; may be empty.
  std::function<void(double)> progress;
};

inline LadderModel build_ladder(LadderMode mode, double t_max,
                                const LadderBuildOptions& opts = {}) {
  if (!(t_max > opts.t_head + 1.0)) {
    throw std::invalid_argument("build_ladder: t_max too small");
  }
  LadderModel model;
  model.mode = mode;
  model.t_head = opts.t_head;
  model.step = opts.step;
  model.serial = detail::next_ladder_serial();

  if (mode == LadderMode::analytic_hl) {
    model.t_max = t_max;
    model.head_constant = opts.t_head * std::log(opts.t_head) + kHlLinearCoeff * opts.t_head;
    return model;
  }

  // Grid nodes land on exact multiples of step; one GL16 panel per step
  // requires the zero-gap cap to stay above the step width.
  if (panel_width_cap(t_max, 0.5) < opts.step) {
    throw std::invalid_argument("build_ladder: step too wide for t_max (raise resolution)");
  }
  const auto n_steps =
      static_cast<std::int64_t>(std::ceil((t_max - opts.t_head) / opts.step - 1e-9));
  model.t_max = opts.t_head + static_cast<double>(n_steps) * opts.step;
  model.head_constant = oracle::head_integral(opts.t_head);

  QuadOptions qopts;
  qopts.threads = opts.threads;
  std::atomic<std::int64_t> done{0};
  auto z_sq = [&](double t) {
    return hardy_z_sq(t);
  };
  // cumulative_grid already parallelizes + samples split-panel errors.
  CumulativeGrid grid;
  if (opts.progress) {
    // Wrap the integrand to emit coarse progress (every ~1/64 of the work).
    const std::int64_t total = n_steps * 16;
    const std::int64_t tick = total / 64 + 1;
    auto counted = [&, tick](double t) {
      const std::int64_t d = done.fetch_add(1) + 1;
      if (d % tick == 0) opts.progress(static_cast<double>(d) / static_cast<double>(total));
      return hardy_z_sq(t);
    };
    grid = cumulative_grid(counted, opts.t_head, model.t_max, opts.step, qopts);
  } else {
    grid = cumulative_grid(z_sq, opts.t_head, model.t_max, opts.step, qopts);
  }
  model.prefix = std::move(grid.prefix);
  model.grid_err_est = grid.err_est;
  return model;
}

namespace detail {

// Small per-thread ring of recent panel fits. Quadrature sweeps revisit the
// same one or two grid panels between coarse and split passes; four slots
// keep those resident. Pure cache: hit or miss, the returned fit is the same
// deterministic function of the panel.
struct HlPanelCache {
  struct Slot {
    std::uint64_t serial = 0;
    std::int64_t index = -1;
    PanelFit fit;
  };
  std::array<Slot, 4> slots;
  unsigned next = 0;

  const PanelFit* find(std::uint64_t serial, std::int64_t index) const {
    for (const auto& s : slots) {
      if (s.serial == serial && s.index == index) return &s.fit;
    }
    return nullptr;
  }
  const PanelFit* insert(std::uint64_t serial, std::int64_t index, PanelFit fit) {
    Slot& s = slots[next % slots.size()];
    ++next;
    s.serial = serial;
    s.index = index;
    s.fit = fit;
    return &s.fit;
  }
};

inline thread_local HlPanelCache tl_hl_cache;

}  // namespace detail

// hl(t) = head_constant + prefix integral of Z^2 up to t. Mid-panel values
// come from the degree-15 Legendre antiderivative of the panel's own Gauss
// data (cached per thread); the cache never changes results, only cost.
inline double hl_integral(const LadderModel& model, double t) {
  if (model.mode == LadderMode::analytic_hl) {
    if (!(t >= kLadderTMin)) {
      throw std::range_error("hl_integral: analytic mode requires T >= 100");
    }
    return t * std::log(t) + kHlLinearCoeff * t;
  }
  if (!(t >= model.t_head && t <= model.t_max)) {
    throw std::range_error("hl_integral: t outside grid range");
  }
  auto idx = static_cast<std::int64_t>((t - model.t_head) / model.step);
  if (idx >= model.nodes() - 1) idx = model.nodes() - 2;
  const double x0 = model.node(idx);
  const double x1 = model.node(idx + 1);
  const double p0 = model.prefix[static_cast<std::size_t>(idx)];
  if (t <= x0) return model.head_constant + p0;
  const double p1 = model.prefix[static_cast<std::size_t>(idx) + 1];
  if (t >= x1) return model.head_constant + p1;

  auto& cache = detail::tl_hl_cache;
  const PanelFit* fit = cache.find(model.serial, idx);
  if (fit == nullptr) {
    fit = cache.insert(model.serial, idx, fit_panel(hardy_z_sq, x0, x1));
  }
  double inc = fit->antiderivative(t);
  // Clamp within the step's mass: keeps hl monotone against last-ulp noise.
  const double span = p1 - p0;
  if (inc < 0.0) inc = 0.0;
  if (inc > span) inc = span;
  return model.head_constant + p0 + inc;
}

namespace detail {

// Solve F(y) = target by bracketed bisection with a secant acceleration
// step. The seed y0 = t - (1-c) t / ln t starts within a percent of the
// root; the bracket widens from there if needed (a failure to bracket means
// the hl grid lost monotonicity upstream). Terminates on the F-residual, so
// the secant step usually finishes in a handful of evaluations.
inline double solve_phi_half(double t, double target) {
  const double seed_defect = (1.0 - kEulerC) * t / std::log(t);
  const double y0 = t - seed_defect;
  double lo = y0 - 0.25 * seed_defect;
  double hi = std::min(t, y0 + 0.25 * seed_defect);
  double f_lo = ladder_f(lo) - target;
  double f_hi = ladder_f(hi) - target;
  for (int expand = 0; f_lo > 0.0 || f_hi < 0.0; ++expand) {
    if (expand > 64) {
      throw std::runtime_error("ladder_phi: bracketing failed (hl grid not monotone?)");
    }
    if (f_lo > 0.0) {
      lo -= seed_defect;
      f_lo = ladder_f(lo) - target;
    }
    if (f_hi < 0.0) {
      hi = std::min(t * (1.0 + 1e-12) + seed_defect * expand, hi + seed_defect);
      f_hi = ladder_f(hi) - target;
    }
  }

  const double residual_target = 3e-12 * std::abs(target) + 1e-300;
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * hi; ++iter) {
    double m;
    if (iter % 3 == 2 || f_hi == f_lo) {
      m = 0.5 * (lo + hi);  // periodic bisection keeps the bracket shrinking
    } else {
      m = lo + (hi - lo) * (-f_lo) / (f_hi - f_lo);  // secant step
      const double guard = 1e-3 * (hi - lo);
      if (!(m > lo + guard && m < hi - guard)) m = 0.5 * (lo + hi);
    }
    const double f_m = ladder_f(m) - target;
    if (std::abs(f_m) <= residual_target) return m;
    if (f_m <= 0.0) {
      lo = m;
      f_lo = f_m;
    } else {
      hi = m;
      f_hi = f_m;
    }
  }
  // Final secant interpolation inside the last bracket.
  if (f_hi != f_lo) {
    const double m = lo + (hi - lo) * (-f_lo) / (f_hi - f_lo);
    if (m >= lo && m <= hi) return m;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Image coordinate phi(t)/2 alone (no Z evaluation).
inline double phi_half(const LadderModel& model, double t) {
  if (!(t >= kLadderTMin)) throw std::domain_error("ladder_phi: t must be >= 100");
  const double target = hl_integral(model, t);
  const double y = detail::solve_phi_half(t, target);
  const double residual = std::abs(ladder_f(y) - target);
  if (!(residual <= 1e-9 * target)) {
    throw std::runtime_error("ladder_phi: inversion residual exceeds contract");
  }
  return y;
}

inline LadderPoint ladder_phi(const LadderModel& model, double t) {
  const double y = phi_half(model, t);
  const double z = hardy_z(t).z;
  LadderPoint point;
  point.t = t;
  point.phi_half = y;
  point.phi = 2.0 * y;
  point.z_hat_sq = z * z / phi_prime_big(point.phi);
  point.defect = t - y;
  return point;
}

inline DefectCheck ladder_defect(const LadderModel& model, double t) {
  const double defect = t - phi_half(model, t);
  const double reference = pnt_defect_reference(t);
  return DefectCheck{defect, reference, defect / reference};
}

// (phi(T+U) - phi(T)) / (2U): the slope of the image segment against the
// source window; tends to 1 at the rate ln ln T / ln T.
inline double ladder_slope(const LadderModel& model, double T, double U) {
  if (!(U > 0.0)) throw std::domain_error("ladder_slope: U must be positive");
  const double hi = phi_half(model, T + U);  // throws if out of model range
  const double lo = phi_half(model, T);
  return (2.0 * hi - 2.0 * lo) / (2.0 * U);
}

// ---------------------------------------------------------------------------
// Cache persistence. Text, line oriented:
//   # zeta-ladder-cache v1 mode=<m> t_head=<v> head_constant=<17 digits> step=<v>
//   <t>,<hl_prefix>            (one line per node, strictly increasing t)
// hl_prefix is the grid prefix (integral from t_head), so hl = head + prefix.
// 17 significant digits round-trip doubles exactly.

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void save_ladder_cache(const LadderModel& model, const std::string& path) {
  if (model.mode == LadderMode::analytic_hl) {
    throw std::invalid_argument("save_ladder_cache: analytic ladder has no grid to cache");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_ladder_cache: cannot open " + path);
  out << "# zeta-ladder-cache v1 mode=" << to_string(model.mode)
      << " t_head=" << detail::fmt17(model.t_head)
      << " head_constant=" << detail::fmt17(model.head_constant)
      << " step=" << detail::fmt17(model.step) << "\n";
  for (std::int64_t i = 0; i < model.nodes(); ++i) {
    out << detail::fmt17(model.node(i)) << ',' << detail::fmt17(model.prefix[static_cast<std::size_t>(i)])
        << "\n";
  }
  if (!out) throw std::runtime_error("save_ladder_cache: write failed: " + path);
}

// Returns an empty optional-like flag via exception-free probe: callers that
// want "load or rebuild" should use load_ladder_cache_if_match.
inline LadderModel load_ladder_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_ladder_cache: cannot open " + path);
  std::string header;
  std::getline(in, header);
  LadderModel model;
  {
    char mode_buf[32] = {0};
    double t_head = 0, head = 0, step = 0;
    const int got = std::sscanf(header.c_str(),
                                "# zeta-ladder-cache v1 mode=%31s t_head=%lf head_constant=%lf step=%lf",
                                mode_buf, &t_head, &head, &step);
    if (got != 4) throw std::runtime_error("load_ladder_cache: bad header: " + path);
    const std::string mode_str = mode_buf;
    if (mode_str == "numeric_hl") {
      model.mode = LadderMode::numeric_hl;
    } else if (mode_str == "analytic_hl") {
      model.mode = LadderMode::analytic_hl;
    } else {
      throw std::runtime_error("load_ladder_cache: unknown mode: " + mode_str);
    }
    model.t_head = t_head;
    model.head_constant = head;
    model.step = step;
  }
  std::string line;
  double prev_t = -1.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("load_ladder_cache: malformed line: " + line);
    }
    const double t = std::strtod(line.c_str(), nullptr);
    const double p = std::strtod(line.c_str() + comma + 1, nullptr);
    if (!(t > prev_t)) throw std::runtime_error("load_ladder_cache: t not increasing");
    prev_t = t;
    model.prefix.push_back(p);
    model.t_max = t;
  }
  if (model.mode == LadderMode::numeric_hl && model.prefix.size() < 2) {
    throw std::runtime_error("load_ladder_cache: empty grid");
  }
  model.serial = detail::next_ladder_serial();
  return model;
}

// Key match for reuse: mode, t_head, step identical and cached range covers
// the requested t_max. Mismatches rebuild rather than silently reuse.
inline bool ladder_cache_matches(const LadderModel& model, LadderMode mode, double t_head,
                                 double step, double t_max) {
  return model.mode == mode && model.t_head == t_head && model.step == step &&
         model.t_max >= t_max;
}

}  // namespace zll
