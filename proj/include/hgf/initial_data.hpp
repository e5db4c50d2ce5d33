#pragma once

// Initial data (phi0, phi1) in the slow-decay class: |phi0| <= A (1+|x|)^{-k},
// |phi1| <= A (1+|x|)^{-(k+1)} with k > 1. The envelope amplitude A is the
// tight constant fitted on a deterministic radial/angular sample, so the bound
// it asserts is the true one for the profile.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hgf {

struct DecayParams {
  double A{1.0};    // envelope amplitude
  double k{2.0};    // spatial decay rate, k > 1
  double eps{1.0};  // data size multiplier (>= 0)

  void validate() const {
    if (!(A > 0.0)) throw std::invalid_argument("DecayParams: need A > 0");
    if (!(k > 1.0)) throw std::invalid_argument("DecayParams: need k > 1");
    if (!(eps >= 0.0)) throw std::invalid_argument("DecayParams: need eps >= 0");
  }
};

using ScalarFn = std::function<double(double, double)>;
using GradFn = std::function<std::array<double, 2>(double, double)>;

namespace detail {

// Deterministic radial sample: dense on [0,4], geometric out to ~1000.
inline const std::vector<double>& envelope_sample_radii() {
  static const std::vector<double> radii = [] {
    std::vector<double> r;
    for (int j = 0; j <= 400; ++j) r.push_back(0.01 * j);
    for (double x = 4.0 * 1.12; x < 1000.0; x *= 1.12) r.push_back(x);
    return r;
  }();
  return radii;
}

constexpr int kEnvelopeSampleAngles = 8;

template <class F>
void for_each_envelope_sample(F&& visit) {
  for (double r : envelope_sample_radii()) {
    for (int a = 0; a < kEnvelopeSampleAngles; ++a) {
      const double th = 2.0 * M_PI * a / kEnvelopeSampleAngles;
      visit(r, r * std::cos(th), r * std::sin(th));
      if (r == 0.0) break;
    }
  }
}

}  // namespace detail

// Tight amplitude making (phi0, phi1) a member of the decay class at rate k.
inline double fit_envelope_amplitude(const ScalarFn& phi0, const ScalarFn& phi1, double k) {
  double A = 0.0;
  detail::for_each_envelope_sample([&](double r, double x, double y) {
    const double w = std::pow(1.0 + r, k);
    A = std::max(A, std::abs(phi0(x, y)) * w);
    A = std::max(A, std::abs(phi1(x, y)) * w * (1.0 + r));
  });
  return A;
}

class InitialData {
 public:
  InitialData(ScalarFn phi0, ScalarFn phi1, DecayParams decay, GradFn grad_phi0 = nullptr)
      : phi0_(std::move(phi0)),
        phi1_(std::move(phi1)),
        grad_(std::move(grad_phi0)),
        decay_(decay) {
    decay_.validate();
    validate_membership();
  }

  double phi0(double x, double y) const { return phi0_(x, y); }
  double phi1(double x, double y) const { return phi1_(x, y); }

  std::array<double, 2> grad_phi0(double x, double y) const {
    if (grad_) return grad_(x, y);
    // Fourth-order central differences, fixed step 2^-10.
    const double h = 1.0 / 1024.0;
    auto d = [&](bool along_x) {
      auto f = [&](double s) { return along_x ? phi0_(x + s, y) : phi0_(x, y + s); };
      return (f(-2 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2 * h)) / (12.0 * h);
    };
    return {d(true), d(false)};
  }

  const DecayParams& decay() const { return decay_; }

  // Radius beyond which both components stay below `threshold` times their
  // overall peak on the deterministic sample.
  double effective_support(double threshold = 1e-16) const {
    double peak = 0.0, support = 0.0;
    detail::for_each_envelope_sample([&](double, double x, double y) {
      peak = std::max(peak, std::max(std::abs(phi0_(x, y)), std::abs(phi1_(x, y))));
    });
    if (peak == 0.0) return 0.0;
    detail::for_each_envelope_sample([&](double r, double x, double y) {
      if (std::max(std::abs(phi0_(x, y)), std::abs(phi1_(x, y))) > threshold * peak)
        support = std::max(support, r);
    });
    return support;
  }

 private:
  void validate_membership() const {
    const double slack = 1.0 + 1e-9;
    bool finite = true, bounded = true;
    detail::for_each_envelope_sample([&](double r, double x, double y) {
      const double f0 = phi0_(x, y), f1 = phi1_(x, y);
      if (!std::isfinite(f0) || !std::isfinite(f1)) finite = false;
      const double env = decay_.A * std::pow(1.0 + r, -decay_.k);
      if (std::abs(f0) > env * slack) bounded = false;
      if (std::abs(f1) > env / (1.0 + r) * slack) bounded = false;
    });
    if (!finite) throw std::invalid_argument("data not evaluable");
    if (!bounded) throw std::invalid_argument("data outside the admissible decay class");
  }

  ScalarFn phi0_, phi1_;
  GradFn grad_;
  DecayParams decay_;
};

// phi0 = A (1+|x|^2)^{-k/2}, phi1 = -A (1+|x|^2)^{-(k+1)/2}. The tight
// envelope amplitude is A * 2^{(k+1)/2} (the ratio peaks at |x| = 1).
inline InitialData rational_data(double A, double k) {
  auto p0 = [A, k](double x, double y) { return A * std::pow(1.0 + x * x + y * y, -k / 2.0); };
  auto p1 = [A, k](double x, double y) {
    return -A * std::pow(1.0 + x * x + y * y, -(k + 1.0) / 2.0);
  };
  auto g0 = [A, k](double x, double y) -> std::array<double, 2> {
    const double q = 1.0 + x * x + y * y;
    const double c = -A * k * std::pow(q, -(k + 2.0) / 2.0);
    return {c * x, c * y};
  };
  DecayParams d{fit_envelope_amplitude(p0, p1, k), k, 1.0};
  return InitialData(p0, p1, d, g0);
}

// phi0 = A exp(-|x|^2/w^2), phi1 = -A exp(-|x|^2/w^2); rapid decay, classified
// at rate k with a numerically fitted amplitude.
inline InitialData gaussian_data(double A, double width = 1.0, double k = 2.0) {
  const double iw2 = 1.0 / (width * width);
  auto p0 = [A, iw2](double x, double y) { return A * std::exp(-(x * x + y * y) * iw2); };
  auto p1 = [A, iw2](double x, double y) { return -A * std::exp(-(x * x + y * y) * iw2); };
  auto g0 = [A, iw2](double x, double y) -> std::array<double, 2> {
    const double f = A * std::exp(-(x * x + y * y) * iw2);
    return {-2.0 * iw2 * x * f, -2.0 * iw2 * y * f};
  };
  DecayParams d{fit_envelope_amplitude(p0, p1, k), k, 1.0};
  return InitialData(p0, p1, d, g0);
}

}  // namespace hgf
