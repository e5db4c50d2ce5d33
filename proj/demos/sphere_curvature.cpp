// The conformal factor v = 4 / (1 + |x|^2)^2 is the round-sphere metric under
// stereographic projection; its scalar curvature is identically 2. This demo
// checks the discrete curvature operator against that constant.

#include <cmath>
#include <cstdio>

#include "hgf/geometry.hpp"

int main() {
  const auto g = hgf::GridGeometry::centered_square(2.0, 201);
  const hgf::GridField v = hgf::GridField::sample(g, [](double x, double y) {
    const double q = 1.0 + x * x + y * y;
    return 4.0 / (q * q);
  });
  const hgf::GridField R = hgf::scalar_curvature(hgf::ConformalMetric{v});

  double worst = 0.0;
  for (double r : R.data()) worst = std::max(worst, std::abs(r - 2.0));
  std::printf("grid %dx%d, h = %.4f\n", g.nx, g.ny, g.h);
  std::printf("max |R - 2| = %.3e\n", worst);
  return worst < 1e-4 ? 0 : 1;
}
