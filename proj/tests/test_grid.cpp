#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hgf/grid.hpp"

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
using namespace hgf;

TEST_CASE("centered square geometry") {
  const auto g = GridGeometry::centered_square(16.0, 129);
  REQUIRE(g.nx == 129);
  REQUIRE(g.ny == 129);
  REQUIRE(g.h == Approx(0.25).margin(1e-15));
  REQUIRE(g.x(0) == -16.0);
  REQUIRE(g.x_max() == Approx(16.0).margin(1e-12));
  REQUIRE(g.size() == 129u * 129u);
  REQUIRE_THROWS_AS(GridGeometry::centered_square(-1.0, 9), std::invalid_argument);
  REQUIRE_THROWS_AS(GridGeometry::centered_square(1.0, 1), std::invalid_argument);
}

TEST_CASE("torus geometry has no duplicate seam") {
  const auto g = GridGeometry::torus(10.0, 256);
  REQUIRE(g.h == Approx(20.0 / 256).margin(1e-15));
  REQUIRE(g.x(0) == -10.0);
  // last node stops one spacing short of +L
  REQUIRE(g.x(g.nx - 1) == Approx(10.0 - g.h).margin(1e-12));
}

TEST_CASE("field sampling, indexing and arithmetic") {
  const auto g = GridGeometry::centered_square(1.0, 9);
  const GridField f = GridField::sample(g, [](double x, double y) { return x + 2.0 * y; });
  REQUIRE(f.at(0, 0) == Approx(-3.0));
  REQUIRE(f.at(8, 8) == Approx(3.0));
  REQUIRE(f.at(4, 4) == Approx(0.0).margin(1e-15));

  GridField a = f;
  a += f;
  REQUIRE(a.at(8, 8) == Approx(6.0));
  a -= f;
  REQUIRE(a.at(8, 8) == Approx(3.0));
  a *= 2.0;
  REQUIRE(a.at(8, 8) == Approx(6.0));

  GridField sum = f + f;
  GridField diff = sum - f;
  GridField scaled = 3.0 * f;
  REQUIRE(diff.at(0, 0) == Approx(f.at(0, 0)));
  REQUIRE(scaled.at(8, 8) == Approx(9.0));

  GridField y = f;
  add_scaled(y, -1.0, f);
  REQUIRE(y.max_abs() == Approx(0.0).margin(1e-15));

  const auto g2 = GridGeometry::centered_square(1.0, 7);
  GridField other(g2);
  REQUIRE_THROWS_AS(y += other, std::invalid_argument);
  REQUIRE_THROWS_AS(add_scaled(y, 1.0, other), std::invalid_argument);
}

TEST_CASE("coordinate fields") {
  const auto g = GridGeometry::centered_square(2.0, 9);
  REQUIRE(coordinate_x(g).at(0, 3) == Approx(-2.0));
  REQUIRE(coordinate_y(g).at(3, 0) == Approx(-2.0));
}

TEST_CASE("discrete norms against the Gaussian integral") {
  // ||e^{-r^2}||_{L2}^2 = pi/2 and ||e^{-r^2}||_{L1} = pi on the plane; the
  // lattice sum of a Gaussian converges to the integral beyond double
  // precision once h <= 1/8 and the box holds the mass.
  const auto g = GridGeometry::centered_square(8.0, 257);
  const GridField f =
      GridField::sample(g, [](double x, double y) { return std::exp(-(x * x + y * y)); });
  REQUIRE(f.l2() == Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-12));
  REQUIRE(f.l1() == Approx(M_PI).epsilon(1e-12));
  REQUIRE(f.lp(2.0) == Approx(f.l2()).epsilon(1e-13));
  REQUIRE(f.lp(1.0) == Approx(f.l1()).epsilon(1e-13));
  REQUIRE(f.max_abs() == Approx(1.0));  // grid contains the origin
  REQUIRE(f.all_finite());
  REQUIRE_THROWS_AS(f.lp(0.0), std::invalid_argument);

  GridField bad = f;
  bad.at(3, 5) = std::nan("");
  REQUIRE_FALSE(bad.all_finite());
}

TEST_CASE("norm carries the h^2 node weight") {
  const auto g = GridGeometry::centered_square(0.5, 11);
  const GridField ones(g, 1.0);
  REQUIRE(ones.l2() == Approx(g.h * 11.0).epsilon(1e-14));
  REQUIRE(ones.l1() == Approx(g.h * g.h * 121.0).epsilon(1e-14));
}

TEST_CASE("stencils differentiate quartic polynomials exactly") {
  const auto g = GridGeometry::centered_square(1.0, 17);
  const GridField f =
      GridField::sample(g, [](double x, double y) { return x * x * x * (y + 2.0) + y * y; });

  GridField ex = dx(f) - GridField::sample(g, [](double x, double y) {
                   return 3.0 * x * x * (y + 2.0);
                 });
  GridField ey = dy(f) - GridField::sample(g, [](double x, double y) {
                   return x * x * x + 2.0 * y;
                 });
  GridField el = laplacian(f) - GridField::sample(g, [](double x, double y) {
                   return 6.0 * x * (y + 2.0) + 2.0;
                 });
  REQUIRE(ex.max_abs() < 1e-11);
  REQUIRE(ey.max_abs() < 1e-11);
  REQUIRE(el.max_abs() < 1e-10);
}

TEST_CASE("stencils converge at fourth order") {
  auto err = [](int nodes) {
    const auto g = GridGeometry::centered_square(1.0, nodes);
    const GridField f =
        GridField::sample(g, [](double x, double y) { return std::sin(2.0 * x) * std::cos(y); });
    const GridField dxe = dx(f) - GridField::sample(g, [](double x, double y) {
                            return 2.0 * std::cos(2.0 * x) * std::cos(y);
                          });
    const GridField lape = laplacian(f) - GridField::sample(g, [](double x, double y) {
                             return -5.0 * std::sin(2.0 * x) * std::cos(y);
                           });
    return std::array<double, 2>{dxe.max_abs(), lape.max_abs()};
  };
  const auto coarse = err(65), fine = err(129);
  REQUIRE(coarse[0] / fine[0] > 12.0);  // ~16 for a fourth-order stencil
  REQUIRE(coarse[1] / fine[1] > 12.0);
}

TEST_CASE("stencils need six nodes per axis") {
  const auto g = GridGeometry::centered_square(1.0, 5);
  const GridField f(g, 1.0);
  REQUIRE_THROWS_WITH(dx(f), ContainsSubstring("at least 6 nodes"));
  REQUIRE_THROWS_WITH(dy(f), ContainsSubstring("at least 6 nodes"));
  REQUIRE_THROWS_WITH(laplacian(f), ContainsSubstring("at least 6 nodes"));
}

TEST_CASE("wave state defaults") {
  WaveState s;
  REQUIRE(s.t == 0.0);
  REQUIRE(s.u.empty());
}
