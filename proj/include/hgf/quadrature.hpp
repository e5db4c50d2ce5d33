#pragma once

// One-dimensional quadrature: cached Gauss-Legendre rules (Newton iteration on
// the Legendre recurrence) and an adaptive bisection scheme built on a 15-point
// rule for integrands with end-point-tamed singularities.

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace hgf {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on (-1, 1), ascending
  std::vector<double> weights;  // positive, sum to 2
};

namespace detail {

inline GaussLegendreRule make_gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  GaussLegendreRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      pp = n * (x * pn - p0) / (x * x - 1.0);
      const double dx = pn / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n == 1) {
    r.nodes[0] = 0.0;
    r.weights[0] = 2.0;
  }
  return r;
}

}  // namespace detail

inline const GaussLegendreRule& gauss_legendre(int n) {
  static std::map<int, GaussLegendreRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::make_gauss_legendre(n)).first;
  return it->second;
}

template <class F>
double integrate_gl(F&& f, double a, double b, int n) {
  const auto& r = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
  return half * s;
}

// Adaptive bisection on a 15-point Gauss rule. `scale` guards the stopping
// test against intervals whose integral is incidentally near zero.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol, double scale = 0.0,
                          int max_depth = 30) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("integrate_adaptive: need rel_tol > 0");
  struct Rec {
    const std::function<double(double)> fn;
    double tol;
    double floor;
    double run(double lo, double hi, double whole, int depth) const {
      const double mid = 0.5 * (lo + hi);
      const double left = integrate_gl(fn, lo, mid, 15);
      const double right = integrate_gl(fn, mid, hi, 15);
      const double refined = left + right;
      const double err = std::abs(refined - whole);
      if (depth <= 0 || err <= tol * std::max(std::abs(refined), floor))
        return refined;
      return run(lo, mid, left, depth - 1) + run(mid, hi, right, depth - 1);
    }
  };
  Rec rec{std::function<double(double)>(std::forward<F>(f)), rel_tol, scale};
  return rec.run(a, b, integrate_gl(rec.fn, a, b, 15), max_depth);
}

// Equal-weight rule for periodic integrands over [0, 2*pi); spectrally
// accurate for smooth periodic functions.
template <class F>
double integrate_periodic(F&& f, int n) {
  if (n < 1) throw std::invalid_argument("integrate_periodic: need n >= 1");
  const double w = 2.0 * M_PI / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(w * i);
  return w * s;
}

// Cumulative trapezoid of samples y at nodes t (returns running integral).
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& t,
                                                const std::vector<double>& y) {
  if (t.size() != y.size()) throw std::invalid_argument("cumulative_trapezoid: size mismatch");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return out;
}

}  // namespace hgf
