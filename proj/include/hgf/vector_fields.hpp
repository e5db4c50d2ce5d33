#pragma once

// The seven Klainerman generators on R^{1+2}:
//   d0, d1, d2, L0 = t d0 + x1 d1 + x2 d2, Omega12 = x1 d2 - x2 d1,
//   Omega0i = t di + xi d0 (i = 1, 2).
// A field at fixed time is carried as a jet of time derivatives
// (w[0], w[1], ..., w[depth]); applying a generator consumes one jet level
// (Leibniz in t, 4th-order stencils in x), so composed operators and
// space-time gradients of composites stay well defined. Higher time
// derivatives are reconstructed from the governing equation, not stored.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgf/grid.hpp"
#include "hgf/probe.hpp"

namespace hgf {

enum class FieldOp { dt, d1, d2, L0, Omega12, Omega01, Omega02 };

inline constexpr std::array<FieldOp, 7> kFieldOps = {
    FieldOp::dt,  FieldOp::d1,      FieldOp::d2,     FieldOp::L0,
    FieldOp::Omega12, FieldOp::Omega01, FieldOp::Omega02};

inline const char* field_op_name(FieldOp op) {
  switch (op) {
    case FieldOp::dt: return "dt";
    case FieldOp::d1: return "d1";
    case FieldOp::d2: return "d2";
    case FieldOp::L0: return "L0";
    case FieldOp::Omega12: return "Omega12";
    case FieldOp::Omega01: return "Omega01";
    case FieldOp::Omega02: return "Omega02";
  }
  return "?";
}

struct MultiIndex {
  std::vector<FieldOp> ops;  // applied left to right: ops[0] acts first
  int order() const { return static_cast<int>(ops.size()); }
};

constexpr int kDefaultOrderCap = 2;
constexpr int kMaxJetDepth = 4;

struct FieldJet {
  double t{0.0};
  std::vector<GridField> w;  // w[d] = d-th time derivative at time t

  int depth() const { return static_cast<int>(w.size()) - 1; }
  const GridGeometry& geom() const {
    if (w.empty()) throw std::invalid_argument("FieldJet: empty jet");
    return w[0].geom();
  }
};

// Restrict every jet layer to the window obtained by trimming margin_frac of
// the half-width off each side (same convention as max_abs_interior). Node
// coordinates are preserved, so the t di + xi d0 generators still weight by
// the true positions. Restricting after the layers were built on the full
// grid means every retained value came from a centered stencil.
inline FieldJet restrict_to_interior(const FieldJet& jet, double margin_frac) {
  if (margin_frac <= 0.0) return jet;
  const GridGeometry& g = jet.geom();
  const double m = margin_frac * 0.5 * (g.x_max() - g.x0);
  int i0 = 0, i1 = g.nx - 1, j0 = 0, j1 = g.ny - 1;
  while (i0 < i1 && g.x(i0) < g.x0 + m) ++i0;
  while (i1 > i0 && g.x(i1) > g.x_max() - m) --i1;
  while (j0 < j1 && g.y(j0) < g.y0 + m) ++j0;
  while (j1 > j0 && g.y(j1) > g.y_max() - m) --j1;
  GridGeometry cg;
  cg.nx = i1 - i0 + 1;
  cg.ny = j1 - j0 + 1;
  cg.h = g.h;
  cg.x0 = g.x(i0);
  cg.y0 = g.y(j0);
  FieldJet out;
  out.t = jet.t;
  out.w.reserve(jet.w.size());
  for (const GridField& layer : jet.w) {
    GridField c(cg);
    for (int j = 0; j < cg.ny; ++j)
      for (int i = 0; i < cg.nx; ++i) c.at(i, j) = layer.at(i0 + i, j0 + j);
    out.w.push_back(std::move(c));
  }
  return out;
}

namespace detail {

inline GridField multiply(const GridField& a, const GridField& b) {
  if (!(a.geom() == b.geom())) throw std::invalid_argument("multiply: geometry mismatch");
  GridField out = a;
  auto& o = out.data();
  const auto& bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] *= bd[i];
  return out;
}

struct CoordCache {
  GridField X, Y;
  explicit CoordCache(const GridGeometry& g) : X(coordinate_x(g)), Y(coordinate_y(g)) {}
};

}  // namespace detail

// Apply one generator to a jet; the result is a jet one level shallower.
inline FieldJet apply_op_jet(FieldOp op, const FieldJet& in) {
  if (in.depth() < 1) throw std::invalid_argument("missing time-derivative channel");
  const auto& g = in.geom();
  detail::CoordCache coords(g);
  const double t = in.t;
  FieldJet out;
  out.t = t;
  out.w.reserve(in.w.size() - 1);
  for (int d = 0; d + 1 < static_cast<int>(in.w.size()); ++d) {
    switch (op) {
      case FieldOp::dt:
        out.w.push_back(in.w[d + 1]);
        break;
      case FieldOp::d1:
        out.w.push_back(dx(in.w[d]));
        break;
      case FieldOp::d2:
        out.w.push_back(dy(in.w[d]));
        break;
      case FieldOp::L0: {
        // dt^d (t w_t + x.grad w) = t w[d+1] + d w[d] + x.grad w[d]
        GridField v = t * in.w[d + 1];
        if (d > 0) add_scaled(v, static_cast<double>(d), in.w[d]);
        v += detail::multiply(coords.X, dx(in.w[d]));
        v += detail::multiply(coords.Y, dy(in.w[d]));
        out.w.push_back(std::move(v));
        break;
      }
      case FieldOp::Omega12: {
        GridField v = detail::multiply(coords.X, dy(in.w[d]));
        v -= detail::multiply(coords.Y, dx(in.w[d]));
        out.w.push_back(std::move(v));
        break;
      }
      case FieldOp::Omega01:
      case FieldOp::Omega02: {
        // dt^d (t di w + xi w_t) = t di w[d] + d di w[d-1] + xi w[d+1]
        const bool first = (op == FieldOp::Omega01);
        auto di = [&](const GridField& f) { return first ? dx(f) : dy(f); };
        const GridField& xi = first ? coords.X : coords.Y;
        GridField v = t * di(in.w[d]);
        if (d > 0) {
          GridField lower = di(in.w[d - 1]);
          add_scaled(v, static_cast<double>(d), lower);
        }
        v += detail::multiply(xi, in.w[d + 1]);
        out.w.push_back(std::move(v));
        break;
      }
    }
  }
  return out;
}

inline GridField apply_op(FieldOp op, const FieldJet& in) { return apply_op_jet(op, in).w[0]; }

inline FieldJet apply_multiindex_jet(const MultiIndex& I, FieldJet jet,
                                     int cap = kDefaultOrderCap) {
  if (I.order() > cap) throw std::invalid_argument("vector-field order cap exceeded");
  for (FieldOp op : I.ops) jet = apply_op_jet(op, jet);
  return jet;
}

inline GridField apply_multiindex(const MultiIndex& I, const FieldJet& jet,
                                  int cap = kDefaultOrderCap) {
  return apply_multiindex_jet(I, jet, cap).w[0];
}

// ---------------------------------------------------------------------------
// Jet builders: the missing time derivatives come from the governing PDE.

// Linear wave u_tt = Lap u + f. Optional source jet (f, f_t); depths beyond
// their reach treat the source as absent.
inline FieldJet make_linear_jet(const WaveState& s, int depth, const GridField* f = nullptr,
                                const GridField* ft = nullptr) {
  if (depth < 1 || depth > kMaxJetDepth)
    throw std::invalid_argument("make_linear_jet: depth must be in [1, 4]");
  FieldJet jet;
  jet.t = s.t;
  jet.w.push_back(s.u);
  jet.w.push_back(s.p);
  if (depth >= 2) {
    GridField utt = laplacian(s.u);
    if (f) utt += *f;
    jet.w.push_back(std::move(utt));
  }
  if (depth >= 3) {
    GridField uttt = laplacian(s.p);
    if (ft) uttt += *ft;
    jet.w.push_back(std::move(uttt));
  }
  if (depth >= 4) jet.w.push_back(laplacian(jet.w[2]));
  return jet;
}

// Quasilinear closure for u_tt = e^{-u} Lap u - u_t^2:
//   w2 = e^{-u}(Lap u) - p^2
//   w3 = e^{-u}(Lap p - p Lap u) - 2 p w2
//   w4 = e^{-u}(Lap w2 - 2 p Lap p + (p^2 - w2) Lap u) - 2 w2^2 - 2 p w3
inline FieldJet make_quasilinear_jet(const WaveState& s, int depth) {
  if (depth < 1 || depth > kMaxJetDepth)
    throw std::invalid_argument("make_quasilinear_jet: depth must be in [1, 4]");
  FieldJet jet;
  jet.t = s.t;
  jet.w.push_back(s.u);
  jet.w.push_back(s.p);
  if (depth < 2) return jet;

  const auto& g = s.u.geom();
  GridField emu(g), lap_u = laplacian(s.u);
  for (std::size_t i = 0; i < emu.data().size(); ++i)
    emu.data()[i] = std::exp(-s.u.data()[i]);

  GridField w2 = detail::multiply(emu, lap_u);
  for (std::size_t i = 0; i < w2.data().size(); ++i)
    w2.data()[i] -= s.p.data()[i] * s.p.data()[i];
  jet.w.push_back(w2);
  if (depth < 3) return jet;

  GridField lap_p = laplacian(s.p);
  GridField w3(g);
  for (std::size_t i = 0; i < w3.data().size(); ++i) {
    const double p = s.p.data()[i];
    w3.data()[i] = emu.data()[i] * (lap_p.data()[i] - p * lap_u.data()[i]) -
                   2.0 * p * w2.data()[i];
  }
  jet.w.push_back(w3);
  if (depth < 4) return jet;

  GridField lap_w2 = laplacian(w2);
  GridField w4(g);
  for (std::size_t i = 0; i < w4.data().size(); ++i) {
    const double p = s.p.data()[i], q = w2.data()[i];
    w4.data()[i] = emu.data()[i] * (lap_w2.data()[i] - 2.0 * p * lap_p.data()[i] +
                                    (p * p - q) * lap_u.data()[i]) -
                   2.0 * q * q - 2.0 * p * w3.data()[i];
  }
  jet.w.push_back(w4);
  return jet;
}

// ---------------------------------------------------------------------------
// Commutator residual [box, Z] phi - expected, with phi analytic.

// Analytic space-time test function: phi(d, t, x, y) returns the d-th time
// derivative (d = 0..3); box(d, t, x, y) the d-th time derivative of box phi
// (d = 0..1).
struct SpaceTimeTestFn {
  std::string name;
  std::function<double(int, double, double, double)> phi;
  std::function<double(int, double, double, double)> box;
};

// Built-in corpus for the commutator suite. The trig/Gaussian entries have
// genuinely nonzero stencil error (usable for order estimation); the
// polynomial entry is degree <= 4, so every residual should be exactly zero.
inline std::vector<SpaceTimeTestFn> standard_test_functions() {
  std::vector<SpaceTimeTestFn> fns;

  const double a = 1.2, s = 4.0;
  fns.push_back(SpaceTimeTestFn{
      "gauss_sin",
      [=](int d, double t, double x, double y) {
        const double g = std::exp(-(x * x + y * y) / s);
        const double T[4] = {std::sin(a * t), a * std::cos(a * t), -a * a * std::sin(a * t),
                             -a * a * a * std::cos(a * t)};
        return T[d] * g;
      },
      [=](int d, double t, double x, double y) {
        const double r2 = x * x + y * y;
        const double g = std::exp(-r2 / s);
        const double lap = g * (4.0 * r2 / (s * s) - 4.0 / s);
        const double T[2] = {std::sin(a * t), a * std::cos(a * t)};
        const double Ttt[2] = {-a * a * std::sin(a * t), -a * a * a * std::cos(a * t)};
        return Ttt[d] * g - T[d] * lap;
      }});

  const double w = 1.1, b = 0.7, c = 0.5;
  fns.push_back(SpaceTimeTestFn{
      "trig_product",
      [=](int d, double t, double x, double y) {
        const double S = std::cos(b * x) * std::cos(c * y);
        const double T[4] = {std::cos(w * t), -w * std::sin(w * t), -w * w * std::cos(w * t),
                             w * w * w * std::sin(w * t)};
        return T[d] * S;
      },
      [=](int d, double t, double x, double y) {
        const double S = std::cos(b * x) * std::cos(c * y);
        const double T[2] = {std::cos(w * t), -w * std::sin(w * t)};
        return (b * b + c * c - w * w) * T[d] * S;
      }});

  fns.push_back(SpaceTimeTestFn{
      "quartic_poly",
      [](int d, double t, double x, double y) {
        switch (d) {
          case 0: return t * t * (x * x - y * y) + t * x * y;
          case 1: return 2.0 * t * (x * x - y * y) + x * y;
          case 2: return 2.0 * (x * x - y * y);
          default: return 0.0;
        }
      },
      [](int d, double t, double x, double y) {
        (void)t;
        return d == 0 ? 2.0 * (x * x - y * y) : 0.0;  // Laplacian vanishes, box = phi_tt
      }});

  return fns;
}

// Norm of box_h(Z phi) - Z(box phi) - expected at time t0, where the
// Z(box phi) route differentiates analytically sampled box phi, so the
// residual measures pure discretization error and does not collapse to an
// identity between identical discrete routes. Interior nodes converge at the
// stencil order; the max-norm is usually set by the one-sided closures, where
// composing two stencils drops the observed rate to second order. The L2
// norm gives the edge band vanishing measure, so its observed rate sits
// between 2 and the interior 4.
enum class ResidualNorm { max, l2 };

inline double commutator_residual(FieldOp op, const SpaceTimeTestFn& fn, const GridGeometry& g,
                                  double t0, ResidualNorm norm = ResidualNorm::max) {
  FieldJet base;
  base.t = t0;
  for (int d = 0; d <= 3; ++d)
    base.w.push_back(GridField::sample(g, [&](double x, double y) { return fn.phi(d, t0, x, y); }));

  FieldJet zphi = apply_op_jet(op, base);
  GridField residual = zphi.w[2] - laplacian(zphi.w[0]);  // box_h(Z phi)

  FieldJet boxjet;
  boxjet.t = t0;
  for (int d = 0; d <= 1; ++d)
    boxjet.w.push_back(
        GridField::sample(g, [&](double x, double y) { return fn.box(d, t0, x, y); }));
  residual -= apply_op(op, boxjet);

  if (op == FieldOp::L0) add_scaled(residual, -2.0, boxjet.w[0]);  // [box, L0] = 2 box
  return norm == ResidualNorm::max ? residual.max_abs() : residual.l2();
}

// ---------------------------------------------------------------------------
// Weighted norm bundle.

struct NormBundle {
  double M1{0.0};  // sum_{|I|<=l1} ||d Z^I u||_{L2}
  double M2{0.0};  // sum_{|I|<=l1} ||Z^I u||_{L2}
  double N1{0.0};  // sum_{|I|<=l2} ||d Z^I u||_{Linf}
  double N2{0.0};  // sum_{|I|<=l2} ||Z^I u||_{Linf}
  int l1{0};
  int l2{0};
};

namespace detail {

struct BundleAccum {
  NormBundle b;

  void visit(const FieldJet& jet, int order) {
    const GridField& v = jet.w[0];
    const GridField vx = dx(v), vy = dy(v);
    const GridField& vt = jet.w[1];
    double sum2 = 0.0, maxd = 0.0;
    for (std::size_t i = 0; i < v.data().size(); ++i) {
      const double m2 = vt.data()[i] * vt.data()[i] + vx.data()[i] * vx.data()[i] +
                        vy.data()[i] * vy.data()[i];
      sum2 += m2;
      maxd = std::max(maxd, m2);
    }
    b.M2 += v.l2();
    b.M1 += v.geom().h * std::sqrt(sum2);
    if (order <= b.l2) {
      b.N2 += v.max_abs();
      b.N1 += std::sqrt(maxd);
    }
    if (order < b.l1)
      for (FieldOp op : kFieldOps) visit(apply_op_jet(op, jet), order + 1);
  }
};

}  // namespace detail

// Sums over all multi-indices up to order l1 (L2 family) and l2 (sup family),
// enumerated in the fixed generator order, so results are deterministic.
inline NormBundle norm_bundle(const FieldJet& base, int l1, int l2) {
  if (l1 < 0 || l2 < 0 || l2 > l1 || l1 + 1 > kMaxJetDepth)
    throw std::invalid_argument("vector-field order cap exceeded");
  if (base.depth() < l1 + 1) throw std::invalid_argument("missing time-derivative channel");
  detail::BundleAccum acc;
  acc.b.l1 = l1;
  acc.b.l2 = l2;
  acc.visit(base, 0);
  return acc.b;
}

// Sum_{|I|<=N} ||Z^I u||_{L2} only (no gradients); needs jet depth N.
inline double z_l2_sum(const FieldJet& jet, int order, int N) {
  double s = jet.w[0].l2();
  if (order < N)
    for (FieldOp op : kFieldOps) s += z_l2_sum(apply_op_jet(op, jet), order + 1, N);
  return s;
}

// Global Sobolev inequality probe (n = 2, p = 2):
//   |u(t,x)| <= C (1+t+|x|)^{-1/2} (1+|t-|x||)^{-1/2} sum_{|I|<=N} ||Z^I u||_{L2}.
// Trend = cumulative fitted constant at horizons T/4, T/2, T.
inline ProbeReport klainerman_inequality_probe(
    const std::vector<WaveState>& snapshots,
    const std::function<FieldJet(const WaveState&, int)>& make_jet, int N = 2) {
  if (snapshots.empty()) throw std::invalid_argument("klainerman probe: empty sample");
  if (N < 1 || N > kMaxJetDepth - 1)
    throw std::invalid_argument("vector-field order cap exceeded");
  const double T = snapshots.back().t;
  const std::array<double, 3> checkpoints = {0.25 * T, 0.5 * T, T};
  std::vector<double> trend(checkpoints.size(), 0.0);

  for (const auto& s : snapshots) {
    const FieldJet jet = make_jet(s, N);
    const double rhs = z_l2_sum(jet, 0, N);
    double lhs = 0.0;
    const auto& g = s.u.geom();
    for (int j = 0; j < g.ny; ++j) {
      const double y = g.y(j);
      for (int i = 0; i < g.nx; ++i) {
        const double r = std::hypot(g.x(i), y);
        const double w =
            std::sqrt(1.0 + s.t + r) * std::sqrt(1.0 + std::abs(s.t - r));
        lhs = std::max(lhs, std::abs(s.u.at(i, j)) * w);
      }
    }
    const double c = (rhs == 0.0) ? 0.0 : lhs / rhs;
    for (std::size_t h = 0; h < checkpoints.size(); ++h)
      if (s.t <= checkpoints[h] + 1e-12) trend[h] = std::max(trend[h], c);
  }
  return make_trend_report("global Sobolev decay inequality",
                           "all nodes, N=" + std::to_string(N), trend, 2.0);
}

}  // namespace hgf
