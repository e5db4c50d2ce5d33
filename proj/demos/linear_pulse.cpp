// Evolves a Gaussian pulse with the plane representation formula and prints
// the on-axis profile at a few times, next to the two-region decay envelope.

#include <cstdio>

#include "hgf/envelope.hpp"
#include "hgf/initial_data.hpp"
#include "hgf/wave_kernel.hpp"

int main() {
  const hgf::InitialData data = hgf::gaussian_data(1.0);
  const hgf::Envelope env{data.decay().A, data.decay().k};
  hgf::QuadratureSpec quad;
  quad.radial_nodes = 128;
  quad.angular_nodes = 128;

  std::printf("%8s %8s %14s %14s\n", "t", "x1", "u(t,x)", "envelope");
  for (double t : {1.0, 2.0, 4.0, 8.0}) {
    for (double x = 0.0; x <= 12.0; x += 2.0) {
      const double u = hgf::poisson_eval(t, {x, 0.0}, data, quad);
      std::printf("%8.2f %8.2f %14.6e %14.6e\n", t, x, u, env.value(t, x));
    }
    std::printf("\n");
  }
  return 0;
}
