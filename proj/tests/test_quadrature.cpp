#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hgf/quadrature.hpp"

using Catch::Approx;
using namespace hgf;

TEST_CASE("gauss-legendre nodes and weights") {
  const auto& r2 = gauss_legendre(2);
  REQUIRE(r2.nodes[0] == Approx(-1.0 / std::sqrt(3.0)).margin(1e-14));
  REQUIRE(r2.nodes[1] == Approx(1.0 / std::sqrt(3.0)).margin(1e-14));
  REQUIRE(r2.weights[0] == Approx(1.0).margin(1e-14));

  const auto& r3 = gauss_legendre(3);
  REQUIRE(r3.nodes[1] == Approx(0.0).margin(1e-15));
  REQUIRE(r3.nodes[2] == Approx(std::sqrt(0.6)).margin(1e-14));
  REQUIRE(r3.weights[1] == Approx(8.0 / 9.0).margin(1e-14));

  for (int n : {1, 5, 16, 97}) {
    const auto& r = gauss_legendre(n);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      wsum += r.weights[i];
      if (i) REQUIRE(r.nodes[i] > r.nodes[i - 1]);
    }
    REQUIRE(wsum == Approx(2.0).margin(1e-13));
  }
  REQUIRE_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("fixed rule is exact to polynomial degree 2n-1") {
  // n = 5 integrates degree 9 exactly: int_{-1}^{1} x^8 = 2/9, x^9 = 0
  const double even = integrate_gl([](double x) { return std::pow(x, 8); }, -1.0, 1.0, 5);
  const double odd = integrate_gl([](double x) { return std::pow(x, 9); }, -1.0, 1.0, 5);
  REQUIRE(even == Approx(2.0 / 9.0).margin(1e-14));
  REQUIRE(odd == Approx(0.0).margin(1e-15));
  // and misses degree 10
  const double ten = integrate_gl([](double x) { return std::pow(x, 10); }, -1.0, 1.0, 5);
  REQUIRE(std::abs(ten - 2.0 / 11.0) > 1e-6);
}

TEST_CASE("fixed rule on a generic interval") {
  const double s = integrate_gl([](double x) { return std::sin(x); }, 0.0, M_PI, 20);
  REQUIRE(s == Approx(2.0).margin(1e-13));
}

TEST_CASE("adaptive rule handles endpoint-tamed singularities") {
  const double a = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
  REQUIRE(a == Approx(2.0 / 3.0).epsilon(1e-9));
  const double b =
      integrate_adaptive([](double x) { return std::sqrt(1.0 - x); }, 0.0, 1.0, 1e-12);
  REQUIRE(b == Approx(2.0 / 3.0).epsilon(1e-9));
  REQUIRE(integrate_adaptive([](double) { return 0.0; }, 0.0, 1.0, 1e-10) == 0.0);
  REQUIRE_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("adaptive scale floor suppresses spurious refinement of tiny values") {
  // With a large floor, the near-zero oscillatory integral converges at once.
  const double v = integrate_adaptive([](double x) { return 1e-18 * std::sin(50.0 * x); }, 0.0,
                                      1.0, 1e-10, 1.0);
  REQUIRE(std::abs(v) < 1e-17);
}

TEST_CASE("periodic rule is spectrally accurate") {
  // int_0^{2pi} e^{cos t} dt = 2 pi I_0(1)
  const double oracle = 7.9549265210128452745;
  const double v = integrate_periodic([](double t) { return std::exp(std::cos(t)); }, 32);
  REQUIRE(v == Approx(oracle).margin(1e-11));
  REQUIRE_THROWS_AS(integrate_periodic([](double) { return 1.0; }, 0), std::invalid_argument);
}

TEST_CASE("cumulative trapezoid") {
  const std::vector<double> t{0.0, 1.0, 3.0};
  const std::vector<double> y{0.0, 2.0, 2.0};
  const auto c = cumulative_trapezoid(t, y);
  REQUIRE(c.size() == 3);
  REQUIRE(c[0] == 0.0);
  REQUIRE(c[1] == Approx(1.0));
  REQUIRE(c[2] == Approx(5.0));
  REQUIRE_THROWS_AS(cumulative_trapezoid(t, {1.0}), std::invalid_argument);
}
