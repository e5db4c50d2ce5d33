#pragma once

// Conformally flat surface geometry g_ij = v delta_ij with v > 0:
//   scalar curvature  R = -Lap(ln v) / v   (computed from ln v directly)
//   Ricci             R_11 = R_22 = R v / 2, R_12 = 0
//   flow residual     v_tt - Lap(ln v)  (second-order central difference in t)
// Curvature uses the same 4th-order stencils as the rest of the library;
// values in the one-sided closure band near the domain edge are less
// trustworthy and callers monitoring curvature should restrict to the
// interior (see max_abs_interior).

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hgf/grid.hpp"

namespace hgf {

struct ConformalMetric {
  GridField v;

  void validate() const {
    for (double x : v.data())
      if (!(x > 0.0)) throw std::domain_error("conformal factor must be positive");
  }
};

inline ConformalMetric conformal_factor(const GridField& u) {
  ConformalMetric m{u};
  for (double& x : m.v.data()) x = std::exp(x);
  return m;
}

inline GridField scalar_curvature(const ConformalMetric& m) {
  m.validate();
  GridField ln_v = m.v;
  for (double& x : ln_v.data()) x = std::log(x);
  GridField R = laplacian(ln_v);
  for (std::size_t i = 0; i < R.data().size(); ++i)
    R.data()[i] = -R.data()[i] / m.v.data()[i];
  return R;
}

// The two independent Ricci components: (R_11, R_12) with R_22 = R_11.
inline std::pair<GridField, GridField> ricci(const ConformalMetric& m) {
  GridField r11 = scalar_curvature(m);
  for (std::size_t i = 0; i < r11.data().size(); ++i)
    r11.data()[i] = 0.5 * r11.data()[i] * m.v.data()[i];
  return {std::move(r11), GridField(m.v.geom())};
}

// Residual of the flow equation v_tt = Lap(ln v) at the middle of the
// centered triplet around index size/2; snapshots must be equally spaced dt.
inline GridField flow_residual(const std::vector<ConformalMetric>& snaps, double dt) {
  if (snaps.size() < 3) throw std::invalid_argument("flow_residual: need >= 3 snapshots");
  if (!(dt > 0.0)) throw std::invalid_argument("flow_residual: need dt > 0");
  const std::size_t m = snaps.size() / 2;
  const GridField& vm = snaps[m].v;
  const GridField& va = snaps[m - 1].v;
  const GridField& vb = snaps[m + 1].v;
  snaps[m].validate();
  GridField ln_v = vm;
  for (double& x : ln_v.data()) x = std::log(x);
  GridField res = laplacian(ln_v);
  for (std::size_t i = 0; i < res.data().size(); ++i) {
    const double vtt = (vb.data()[i] - 2.0 * vm.data()[i] + va.data()[i]) / (dt * dt);
    res.data()[i] = vtt - res.data()[i];
  }
  return res;
}

// Max magnitude over the interior square obtained by trimming margin_frac of
// the half-width from every edge.
inline double max_abs_interior(const GridField& f, double margin_frac) {
  const auto& g = f.geom();
  const double mx = margin_frac * 0.5 * (g.x_max() - g.x0);
  const double lo_x = g.x0 + mx, hi_x = g.x_max() - mx;
  const double lo_y = g.y0 + mx, hi_y = g.y_max() - mx;
  double m = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    if (g.y(j) < lo_y || g.y(j) > hi_y) continue;
    for (int i = 0; i < g.nx; ++i) {
      if (g.x(i) < lo_x || g.x(i) > hi_x) continue;
      m = std::max(m, std::abs(f.at(i, j)));
    }
  }
  return m;
}

}  // namespace hgf
