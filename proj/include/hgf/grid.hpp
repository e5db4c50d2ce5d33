#pragma once

// Uniform Cartesian grids on [x0, x0 + (nx-1)h] x [y0, y0 + (ny-1)h] with
// fourth-order finite-difference stencils (central in the interior, one-sided
// closures at the two nodes nearest each edge) and discrete L^p norms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgf {

struct GridGeometry {
  int nx{0};
  int ny{0};
  double h{0.0};
  double x0{0.0};
  double y0{0.0};

  // Square [-half_width, half_width]^2 with `nodes` nodes per axis.
  static GridGeometry centered_square(double half_width, int nodes) {
    if (nodes < 2 || half_width <= 0.0)
      throw std::invalid_argument("centered_square: need nodes >= 2 and half_width > 0");
    GridGeometry g;
    g.nx = g.ny = nodes;
    g.h = 2.0 * half_width / (nodes - 1);
    g.x0 = g.y0 = -half_width;
    return g;
  }

  // Torus [-L, L)^2 sampled at n equispaced nodes per axis (no duplicate seam).
  static GridGeometry torus(double L, int n) {
    if (n < 2 || L <= 0.0) throw std::invalid_argument("torus: need n >= 2 and L > 0");
    GridGeometry g;
    g.nx = g.ny = n;
    g.h = 2.0 * L / n;
    g.x0 = g.y0 = -L;
    return g;
  }

  double x(int i) const { return x0 + i * h; }
  double y(int j) const { return y0 + j * h; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  double x_max() const { return x(nx - 1); }
  double y_max() const { return y(ny - 1); }

  bool operator==(const GridGeometry&) const = default;
};

class GridField {
 public:
  GridField() = default;
  explicit GridField(const GridGeometry& g, double fill = 0.0)
      : geom_(g), v_(g.size(), fill) {}

  template <class F>
  static GridField sample(const GridGeometry& g, F&& f) {
    GridField out(g);
    for (int j = 0; j < g.ny; ++j) {
      const double y = g.y(j);
      for (int i = 0; i < g.nx; ++i) out.v_[out.idx(i, j)] = f(g.x(i), y);
    }
    return out;
  }

  const GridGeometry& geom() const { return geom_; }
  bool empty() const { return v_.empty(); }
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * geom_.nx + i; }
  double& at(int i, int j) { return v_[idx(i, j)]; }
  double at(int i, int j) const { return v_[idx(i, j)]; }
  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  GridField& operator+=(const GridField& o) { return zip(o, [](double a, double b) { return a + b; }); }
  GridField& operator-=(const GridField& o) { return zip(o, [](double a, double b) { return a - b; }); }
  GridField& operator*=(double c) {
    for (double& x : v_) x *= c;
    return *this;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

  bool all_finite() const {
    for (double x : v_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  // Midpoint-weight discrete norms; every node carries weight h^2.
  double l2() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return geom_.h * std::sqrt(s);
  }

  double l1() const {
    double s = 0.0;
    for (double x : v_) s += std::abs(x);
    return geom_.h * geom_.h * s;
  }

  double lp(double p) const {
    if (p <= 0.0) throw std::invalid_argument("lp: need p > 0");
    double s = 0.0;
    for (double x : v_) s += std::pow(std::abs(x), p);
    return std::pow(geom_.h * geom_.h * s, 1.0 / p);
  }

 private:
  template <class Op>
  GridField& zip(const GridField& o, Op op) {
    if (!(geom_ == o.geom_)) throw std::invalid_argument("GridField: geometry mismatch");
    for (std::size_t n = 0; n < v_.size(); ++n) v_[n] = op(v_[n], o.v_[n]);
    return *this;
  }

  GridGeometry geom_{};
  std::vector<double> v_;
};

inline GridField operator+(GridField a, const GridField& b) { return a += b; }
inline GridField operator-(GridField a, const GridField& b) { return a -= b; }
inline GridField operator*(double c, GridField a) { return a *= c; }

inline void add_scaled(GridField& y, double a, const GridField& x) {
  if (!(y.geom() == x.geom())) throw std::invalid_argument("add_scaled: geometry mismatch");
  auto& yd = y.data();
  const auto& xd = x.data();
  for (std::size_t n = 0; n < yd.size(); ++n) yd[n] += a * xd[n];
}

inline GridField coordinate_x(const GridGeometry& g) {
  return GridField::sample(g, [](double x, double) { return x; });
}
inline GridField coordinate_y(const GridGeometry& g) {
  return GridField::sample(g, [](double, double y) { return y; });
}

namespace detail {

// Fourth-order first-derivative along one line of `n` values with stride `s`.
// One-sided five-point closures at the two nodes nearest each end.
inline void d1_line(const double* f, double* out, int n, long s, double h) {
  const double c = 1.0 / (12.0 * h);
  auto F = [&](int i) { return f[static_cast<long>(i) * s]; };
  out[0] = c * (-25.0 * F(0) + 48.0 * F(1) - 36.0 * F(2) + 16.0 * F(3) - 3.0 * F(4));
  out[1] = c * (-3.0 * F(0) - 10.0 * F(1) + 18.0 * F(2) - 6.0 * F(3) + F(4));
  for (int i = 2; i < n - 2; ++i)
    out[i] = c * (F(i - 2) - 8.0 * F(i - 1) + 8.0 * F(i + 1) - F(i + 2));
  out[n - 2] = -c * (-3.0 * F(n - 1) - 10.0 * F(n - 2) + 18.0 * F(n - 3) - 6.0 * F(n - 4) + F(n - 5));
  out[n - 1] = -c * (-25.0 * F(n - 1) + 48.0 * F(n - 2) - 36.0 * F(n - 3) + 16.0 * F(n - 4) - 3.0 * F(n - 5));
}

// Fourth-order second derivative along one line; six-point one-sided closures.
inline void d2_line(const double* f, double* out, int n, long s, double h) {
  const double c = 1.0 / (12.0 * h * h);
  auto F = [&](int i) { return f[static_cast<long>(i) * s]; };
  out[0] = c * (45.0 * F(0) - 154.0 * F(1) + 214.0 * F(2) - 156.0 * F(3) + 61.0 * F(4) - 10.0 * F(5));
  out[1] = c * (10.0 * F(0) - 15.0 * F(1) - 4.0 * F(2) + 14.0 * F(3) - 6.0 * F(4) + F(5));
  for (int i = 2; i < n - 2; ++i)
    out[i] = c * (-F(i - 2) + 16.0 * F(i - 1) - 30.0 * F(i) + 16.0 * F(i + 1) - F(i + 2));
  out[n - 2] = c * (10.0 * F(n - 1) - 15.0 * F(n - 2) - 4.0 * F(n - 3) + 14.0 * F(n - 4) - 6.0 * F(n - 5) + F(n - 6));
  out[n - 1] = c * (45.0 * F(n - 1) - 154.0 * F(n - 2) + 214.0 * F(n - 3) - 156.0 * F(n - 4) + 61.0 * F(n - 5) - 10.0 * F(n - 6));
}

inline void require_stencil_size(const GridGeometry& g) {
  if (g.nx < 6 || g.ny < 6)
    throw std::invalid_argument("stencil: grid must have at least 6 nodes per axis");
}

}  // namespace detail

inline GridField dx(const GridField& f) {
  detail::require_stencil_size(f.geom());
  const auto& g = f.geom();
  GridField out(g);
  std::vector<double> line(g.nx);
  for (int j = 0; j < g.ny; ++j) {
    detail::d1_line(&f.data()[f.idx(0, j)], line.data(), g.nx, 1, g.h);
    for (int i = 0; i < g.nx; ++i) out.at(i, j) = line[i];
  }
  return out;
}

inline GridField dy(const GridField& f) {
  detail::require_stencil_size(f.geom());
  const auto& g = f.geom();
  GridField out(g);
  std::vector<double> line(g.ny);
  for (int i = 0; i < g.nx; ++i) {
    detail::d1_line(&f.data()[f.idx(i, 0)], line.data(), g.ny, g.nx, g.h);
    for (int j = 0; j < g.ny; ++j) out.at(i, j) = line[j];
  }
  return out;
}

inline GridField laplacian(const GridField& f) {
  detail::require_stencil_size(f.geom());
  const auto& g = f.geom();
  GridField out(g);
  std::vector<double> line(std::max(g.nx, g.ny));
  for (int j = 0; j < g.ny; ++j) {
    detail::d2_line(&f.data()[f.idx(0, j)], line.data(), g.nx, 1, g.h);
    for (int i = 0; i < g.nx; ++i) out.at(i, j) = line[i];
  }
  for (int i = 0; i < g.nx; ++i) {
    detail::d2_line(&f.data()[f.idx(i, 0)], line.data(), g.ny, g.nx, g.h);
    for (int j = 0; j < g.ny; ++j) out.at(i, j) += line[j];
  }
  return out;
}

// Solution state at a fixed time: u and its time derivative p = u_t.
struct WaveState {
  double t{0.0};
  GridField u;
  GridField p;
};

}  // namespace hgf
