#pragma once

// Method-of-lines solver for the conformal flow equation in log form,
//   u_tt = e^{-u} Lap u - u_t^2,
// as the first-order system u_t = p, p_t = e^{-u} Lap u - p^2 - sigma(x) p.
// Classical RK4 in time, 4th-order stencils in space, CFL step from the
// instantaneous wave speed e^{-u/2}, and a smoothstep sponge that damps p in
// the outer annulus to absorb outgoing waves on the truncated domain. The
// outermost two rings of nodes hold their initial values (see kFrozenRim), so
// the evolving rows see centered stencils only.
// Breakdown detection: cheap signals (non-finite, amplitude, dt collapse)
// every step; weighted-norm and curvature monitors at snapshot cadence.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgf/geometry.hpp"
#include "hgf/grid.hpp"
#include "hgf/initial_data.hpp"
#include "hgf/probe.hpp"
#include "hgf/quadrature.hpp"
#include "hgf/vector_fields.hpp"

namespace hgf {

enum class DataFamily { rational, gaussian_tail };

inline const char* data_family_name(DataFamily f) {
  return f == DataFamily::rational ? "rational" : "gaussian_tail";
}

struct Thresholds {
  double u_max{10.0};
  double norm_multiple{20.0};
  double curvature_cap{1e3};
  double dt_min{1e-7};
};

struct SpongeConfig {
  bool enabled{true};
  double width_frac{0.1};  // fraction of the half-width
  double strength{2.0};
};

struct RunConfig {
  double half_width{16.0};
  int nodes{129};
  DataFamily family{DataFamily::rational};
  DecayParams decay{1.0, 2.0, 0.1};  // profile amplitude A, rate k, size eps
  double u1_sign{-1.0};
  double cfl_safety{0.4};
  double snapshot_dt{0.5};
  double t_max{10.0};
  Thresholds thresholds{};
  SpongeConfig sponge{};
  int l1{2};
  int l2{1};
  bool keep_snapshots{true};

  void validate() const {
    if (!(half_width > 0.0) || nodes < 7)
      throw std::invalid_argument("RunConfig: need half_width > 0 and nodes >= 7");
    decay.validate();
    if (u1_sign != 1.0 && u1_sign != -1.0)
      throw std::invalid_argument("RunConfig: u1_sign must be +1 or -1");
    // (0, 2): values >= 1 are admitted deliberately for instability studies.
    if (!(cfl_safety > 0.0) || !(cfl_safety < 2.0))
      throw std::invalid_argument("RunConfig: cfl_safety must lie in (0, 2)");
    if (!(snapshot_dt > 0.0) || !(t_max > 0.0))
      throw std::invalid_argument("RunConfig: need snapshot_dt > 0 and t_max > 0");
    if (l1 < 0 || l2 < 0 || l2 > l1 || l1 + 1 > kMaxJetDepth)
      throw std::invalid_argument("vector-field order cap exceeded");
    if (sponge.enabled && (!(sponge.width_frac > 0.0) || sponge.width_frac >= 0.5))
      throw std::invalid_argument("RunConfig: sponge width_frac must lie in (0, 0.5)");
  }
};

// Profile u0 sampled and scaled by eps; u1 = u1_sign * companion profile.
// Every node is checked against the fitted class envelope.
inline std::pair<GridField, GridField> make_initial_data(DataFamily family,
                                                         const DecayParams& d,
                                                         const GridGeometry& geom,
                                                         double u1_sign = -1.0) {
  d.validate();
  ScalarFn p0, p1;
  if (family == DataFamily::rational) {
    p0 = [d](double x, double y) { return d.A * std::pow(1.0 + x * x + y * y, -d.k / 2.0); };
    p1 = [d, u1_sign](double x, double y) {
      return u1_sign * d.A * std::pow(1.0 + x * x + y * y, -(d.k + 1.0) / 2.0);
    };
  } else {
    p0 = [d](double x, double y) { return d.A * std::exp(-(x * x + y * y)); };
    p1 = [d, u1_sign](double x, double y) { return u1_sign * d.A * std::exp(-(x * x + y * y)); };
  }
  const double A_env = fit_envelope_amplitude(p0, p1, d.k);
  GridField u0(geom), u1(geom);
  for (int j = 0; j < geom.ny; ++j) {
    const double y = geom.y(j);
    for (int i = 0; i < geom.nx; ++i) {
      const double x = geom.x(i);
      const double r = std::hypot(x, y);
      const double f0 = p0(x, y), f1 = p1(x, y);
      const double env = A_env * std::pow(1.0 + r, -d.k) * (1.0 + 1e-9);
      if (std::abs(f0) > env || std::abs(f1) * (1.0 + r) > env)
        throw std::invalid_argument("data outside the admissible decay class");
      u0.at(i, j) = d.eps * f0;
      u1.at(i, j) = d.eps * f1;
    }
  }
  return {std::move(u0), std::move(u1)};
}

// Largest stable step: safety * h / max wave speed e^{-u/2}.
inline double cfl_dt(const WaveState& s, double h, double safety) {
  double cmax = 0.0;
  for (double u : s.u.data()) cmax = std::max(cmax, std::exp(-0.5 * u));
  if (!(cmax > 0.0) || !std::isfinite(cmax))
    throw std::domain_error("cfl_dt: wave speed not finite");
  return safety * h / cmax;
}

namespace detail {

inline GridField make_sponge(const GridGeometry& g, const SpongeConfig& cfg) {
  GridField sigma(g);
  if (!cfg.enabled) return sigma;
  const double w = cfg.width_frac * 0.5 * (g.x_max() - g.x0);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double dist = std::min(std::min(g.x(i) - g.x0, g.x_max() - g.x(i)),
                                   std::min(g.y(j) - g.y0, g.y_max() - g.y(j)));
      double xi = (w - dist) / w;
      xi = std::min(1.0, std::max(0.0, xi));
      sigma.at(i, j) = cfg.strength * xi * xi * (3.0 - 2.0 * xi);
    }
  }
  return sigma;
}

}  // namespace detail

struct RhsContext {
  bool quasilinear{true};
  const GridField* sponge{nullptr};  // damping sigma(x), may be null
};

namespace detail {

// Rows this many nodes from each edge are held fixed during time stepping.
// The one-sided closure rows of the second-derivative stencil live exactly
// there; freezing them keeps every row that actually evolves purely centered,
// which is what makes the damped layer stable. Outgoing waves are absorbed by
// the sponge before they reach the frozen rim, so the rim never reflects
// anything of consequence back into the measured region.
inline constexpr int kFrozenRim = 2;

inline void eval_rhs(const GridField& u, const GridField& p, const RhsContext& ctx,
                     GridField& du, GridField& dp) {
  du = p;
  dp = laplacian(u);
  const std::size_t n = dp.data().size();
  for (std::size_t i = 0; i < n; ++i) {
    const double pv = p.data()[i];
    double a = dp.data()[i];
    if (ctx.quasilinear) a = std::exp(-u.data()[i]) * a - pv * pv;
    if (ctx.sponge) a -= ctx.sponge->data()[i] * pv;
    dp.data()[i] = a;
  }
  const GridGeometry& g = u.geom();
  for (int j = 0; j < g.ny; ++j) {
    const bool edge_row = j < kFrozenRim || j >= g.ny - kFrozenRim;
    for (int i = 0; i < g.nx; ++i) {
      if (edge_row || i < kFrozenRim || i >= g.nx - kFrozenRim) {
        du.at(i, j) = 0.0;
        dp.at(i, j) = 0.0;
      }
    }
  }
}

}  // namespace detail

// One classical RK4 step; the caller controls the new time stamp so snapshot
// times land exactly.
inline WaveState step(const WaveState& s, double dt, const RhsContext& ctx) {
  GridField k1u, k1p, k2u, k2p, k3u, k3p, k4u, k4p;
  detail::eval_rhs(s.u, s.p, ctx, k1u, k1p);

  GridField u2 = s.u, p2 = s.p;
  add_scaled(u2, 0.5 * dt, k1u);
  add_scaled(p2, 0.5 * dt, k1p);
  detail::eval_rhs(u2, p2, ctx, k2u, k2p);

  GridField u3 = s.u, p3 = s.p;
  add_scaled(u3, 0.5 * dt, k2u);
  add_scaled(p3, 0.5 * dt, k2p);
  detail::eval_rhs(u3, p3, ctx, k3u, k3p);

  GridField u4 = s.u, p4 = s.p;
  add_scaled(u4, dt, k3u);
  add_scaled(p4, dt, k3p);
  detail::eval_rhs(u4, p4, ctx, k4u, k4p);

  WaveState out;
  out.t = s.t + dt;
  out.u = s.u;
  out.p = s.p;
  const double c = dt / 6.0;
  add_scaled(out.u, c, k1u);
  add_scaled(out.u, 2.0 * c, k2u);
  add_scaled(out.u, 2.0 * c, k3u);
  add_scaled(out.u, c, k4u);
  add_scaled(out.p, c, k1p);
  add_scaled(out.p, 2.0 * c, k2p);
  add_scaled(out.p, 2.0 * c, k3p);
  add_scaled(out.p, c, k4p);
  return out;
}

enum class BreakdownReason {
  none,
  nonfinite,
  amplitude_cap,
  norm_monitor_violation,
  curvature_cap,
  cfl_collapse
};

inline const char* breakdown_reason_name(BreakdownReason r) {
  switch (r) {
    case BreakdownReason::none: return "none";
    case BreakdownReason::nonfinite: return "nonfinite";
    case BreakdownReason::amplitude_cap: return "amplitude_cap";
    case BreakdownReason::norm_monitor_violation: return "norm_monitor_violation";
    case BreakdownReason::curvature_cap: return "curvature_cap";
    case BreakdownReason::cfl_collapse: return "cfl_collapse";
  }
  return "?";
}

struct BreakdownInfo {
  double time{0.0};
  BreakdownReason reason{BreakdownReason::none};
  std::string detail;
};

struct NormSample {
  double t{0.0};
  NormBundle norms;            // generator norms on the interior window
  double max_R_interior{0.0};  // curvature away from the sponge annulus
  double weighted_n1{0.0};     // (1+t)^{1/2} N1
  double weighted_n2{0.0};     // (1+t)^{1/2} N2
};

struct MonitorBaseline {
  double n1_0{0.0};
  double n2_0{0.0};
};

// Cheap signals use only the state; the weighted-norm and curvature signals
// fire when a NormSample is supplied (snapshot cadence).
inline std::optional<BreakdownInfo> detect_breakdown(const WaveState& s,
                                                     const std::optional<NormSample>& sample,
                                                     const Thresholds& th,
                                                     const MonitorBaseline& base) {
  if (!s.u.all_finite() || !s.p.all_finite())
    return BreakdownInfo{s.t, BreakdownReason::nonfinite, "non-finite node"};
  const double umax = s.u.max_abs();
  if (umax > th.u_max)
    return BreakdownInfo{s.t, BreakdownReason::amplitude_cap,
                         "max|u| = " + std::to_string(umax)};
  if (sample) {
    if (base.n1_0 > 0.0 && sample->weighted_n1 > th.norm_multiple * base.n1_0)
      return BreakdownInfo{s.t, BreakdownReason::norm_monitor_violation,
                           "(1+t)^{1/2} N1 = " + std::to_string(sample->weighted_n1)};
    if (base.n2_0 > 0.0 && sample->weighted_n2 > th.norm_multiple * base.n2_0)
      return BreakdownInfo{s.t, BreakdownReason::norm_monitor_violation,
                           "(1+t)^{1/2} N2 = " + std::to_string(sample->weighted_n2)};
    if (sample->max_R_interior > th.curvature_cap)
      return BreakdownInfo{s.t, BreakdownReason::curvature_cap,
                           "max|R| = " + std::to_string(sample->max_R_interior)};
  }
  return std::nullopt;
}

struct RunResult {
  GridGeometry geom;
  std::vector<WaveState> snapshots;    // empty when keep_snapshots = false
  std::vector<NormSample> norm_series;
  BreakdownInfo breakdown;             // reason == none means censored at t_max
  double t_end{0.0};
  double peak_weighted_n2{0.0};
};

namespace detail {

// Bulk norms and the curvature cap are read on the interior window only,
// excluding the absorbing layer: the damped annulus compresses outgoing
// waves into steep non-physical profiles whose derivatives would otherwise
// dominate every generator norm.
inline NormSample take_norm_sample(const WaveState& s, const RunConfig& cfg) {
  NormSample ns;
  ns.t = s.t;
  const double margin = cfg.sponge.enabled ? cfg.sponge.width_frac : 0.0;
  const FieldJet jet =
      restrict_to_interior(make_quasilinear_jet(s, cfg.l1 + 1), margin);
  ns.norms = norm_bundle(jet, cfg.l1, cfg.l2);
  GridField R = laplacian(s.u);
  for (std::size_t i = 0; i < R.data().size(); ++i)
    R.data()[i] = -std::exp(-s.u.data()[i]) * R.data()[i];
  ns.max_R_interior = max_abs_interior(R, margin);
  const double w = std::sqrt(1.0 + s.t);
  ns.weighted_n1 = w * ns.norms.N1;
  ns.weighted_n2 = w * ns.norms.N2;
  return ns;
}

}  // namespace detail

inline RunResult run(const RunConfig& cfg) {
  cfg.validate();
  RunResult out;
  out.geom = GridGeometry::centered_square(cfg.half_width, cfg.nodes);
  auto [u0, u1] = make_initial_data(cfg.family, cfg.decay, out.geom, cfg.u1_sign);
  const GridField sponge = detail::make_sponge(out.geom, cfg.sponge);
  RhsContext ctx{true, cfg.sponge.enabled ? &sponge : nullptr};

  WaveState s{0.0, std::move(u0), std::move(u1)};
  NormSample first = detail::take_norm_sample(s, cfg);
  MonitorBaseline base{first.norms.N1, first.norms.N2};
  out.norm_series.push_back(first);
  out.peak_weighted_n2 = first.weighted_n2;
  if (cfg.keep_snapshots) out.snapshots.push_back(s);

  double next_snap = cfg.snapshot_dt;
  while (s.t < cfg.t_max - 1e-12) {
    double dt = cfl_dt(s, out.geom.h, cfg.cfl_safety);
    if (dt < cfg.thresholds.dt_min) {
      out.breakdown = {s.t, BreakdownReason::cfl_collapse, "dt = " + std::to_string(dt)};
      out.t_end = s.t;
      return out;
    }
    double target = std::min(next_snap, cfg.t_max);
    bool at_snapshot = false;
    if (s.t + dt >= target - 1e-12) {
      dt = target - s.t;
      at_snapshot = true;
    }
    WaveState next = step(s, dt, ctx);
    if (at_snapshot) next.t = target;  // pin against accumulated drift

    std::optional<NormSample> sample;
    if (at_snapshot && next.u.all_finite() && next.p.all_finite())
      sample = detail::take_norm_sample(next, cfg);
    if (auto bd = detect_breakdown(next, sample, cfg.thresholds, base)) {
      out.breakdown = *bd;
      out.t_end = next.t;
      if (sample) out.norm_series.push_back(*sample);
      return out;
    }
    s = std::move(next);
    if (at_snapshot) {
      out.norm_series.push_back(*sample);
      out.peak_weighted_n2 = std::max(out.peak_weighted_n2, sample->weighted_n2);
      if (cfg.keep_snapshots) out.snapshots.push_back(s);
      if (std::abs(target - next_snap) < 1e-12) next_snap += cfg.snapshot_dt;
    }
  }
  out.t_end = s.t;
  out.breakdown = {s.t, BreakdownReason::none, "censored at horizon"};
  return out;
}

// ---------------------------------------------------------------------------
// Energy-inequality diagnostic for the perturbed operator
//   box u + gamma Lap u = F,  gamma = 1 - e^{-u},  F = -u_t^2:
//   ||d u(t)|| <= 2 e^{Int_0^t 2|gamma'|} ||d u(0)||
//                 + 2 Int_0^t e^{Int_s^t 2|gamma'|} ||F(s)|| ds,
// valid under the hypothesis sup |gamma| <= 1/2. |gamma'|(t) is the sup over
// nodes and space-time directions of |d gamma|.

inline double energy_data_term(double growth, double lhs0) { return 2.0 * growth * lhs0; }
inline double energy_source_term(double growth, double int_f_over_e) {
  return 2.0 * growth * int_f_over_e;
}

inline ProbeReport energy_inequality_diagnostic(const std::vector<WaveState>& snaps) {
  if (snaps.empty()) throw std::invalid_argument("energy diagnostic: empty trajectory");
  ProbeReport r;
  r.probe = "perturbed energy inequality";
  r.sample = std::to_string(snaps.size()) + " snapshots";
  r.slack = 1.0;  // explicit constants, no fitted slack

  std::vector<double> ts, gdot, lhs, fnorm;
  std::size_t valid = snaps.size();
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const auto& s = snaps[i];
    double gmax = 0.0, gd = 0.0;
    const GridField ux = dx(s.u), uy = dy(s.u);
    for (std::size_t n = 0; n < s.u.data().size(); ++n) {
      const double emu = std::exp(-s.u.data()[n]);
      gmax = std::max(gmax, std::abs(1.0 - emu));
      const double du = std::max(std::abs(s.p.data()[n]),
                                 std::max(std::abs(ux.data()[n]), std::abs(uy.data()[n])));
      gd = std::max(gd, emu * du);
    }
    if (gmax > 0.5 && i < valid) {
      valid = i;
      r.note = "hypothesis |gamma| <= 1/2 violated at t = " + std::to_string(s.t);
    }
    ts.push_back(s.t);
    gdot.push_back(2.0 * gd);
    const double h = s.u.geom().h;
    double e2 = 0.0, f2 = 0.0;
    for (std::size_t n = 0; n < s.u.data().size(); ++n) {
      e2 += s.p.data()[n] * s.p.data()[n] + ux.data()[n] * ux.data()[n] +
            uy.data()[n] * uy.data()[n];
      f2 += s.p.data()[n] * s.p.data()[n] * s.p.data()[n] * s.p.data()[n];
    }
    lhs.push_back(h * std::sqrt(e2));
    fnorm.push_back(h * std::sqrt(f2));
  }
  if (valid == 0) {
    r.pass = false;
    return r;
  }

  const auto g_int = cumulative_trapezoid(ts, gdot);  // Int_0^t 2|gamma'|
  std::vector<double> f_over_e(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) f_over_e[i] = fnorm[i] / std::exp(g_int[i]);
  const auto f_int = cumulative_trapezoid(ts, f_over_e);

  bool ok = true;
  for (std::size_t i = 0; i < valid; ++i) {
    const double growth = std::exp(g_int[i]);
    const double rhs = energy_data_term(growth, lhs[0]) + energy_source_term(growth, f_int[i]);
    const double ratio = (lhs[i] == 0.0 && rhs == 0.0) ? 0.0 : lhs[i] / rhs;
    r.trend.push_back(ratio);
    r.c_est = std::max(r.c_est, ratio);
    if (ratio > 1.0) ok = false;
  }
  r.pass = ok;
  return r;
}

}  // namespace hgf
