#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hgf/envelope.hpp"
#include "hgf/grid.hpp"

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
using namespace hgf;

TEST_CASE("envelope takes the slow-decay rate outside the cone") {
  const Envelope env{3.0, 2.5};
  // r = 7, t = 3: gap = 5, lead = sqrt(11), exponent k - 1/2 = 2
  REQUIRE(env.value(3.0, 7.0) == Approx(3.0 / (std::sqrt(11.0) * 25.0)).epsilon(1e-14));
  // t = 0 is all exterior
  REQUIRE(env.value(0.0, 4.0) == Approx(3.0 / (std::sqrt(5.0) * std::pow(5.0, 2.0))).epsilon(1e-14));
}

TEST_CASE("envelope decays like the planar wave kernel inside the cone") {
  const Envelope env{3.0, 2.5};
  // r = 3, t = 7: gap = 5, both factors are square roots regardless of k
  REQUIRE(env.value(7.0, 3.0) == Approx(3.0 / (std::sqrt(11.0) * std::sqrt(5.0))).epsilon(1e-14));
  // interior formula does not involve k
  const Envelope steeper{3.0, 6.0};
  REQUIRE(steeper.value(7.0, 3.0) == Approx(env.value(7.0, 3.0)).epsilon(1e-15));
}

TEST_CASE("envelope is continuous across the light cone") {
  const Envelope env{2.0, 3.0};
  for (double t : {0.5, 1.0, 4.0, 25.0}) {
    const double on_cone = 2.0 / std::sqrt(1.0 + 2.0 * t);
    REQUIRE(env.value(t, t) == Approx(on_cone).epsilon(1e-14));
    const double d = 1e-9;
    REQUIRE(env.value(t, t + d) == Approx(on_cone).epsilon(1e-7));
    REQUIRE(env.value(t, t - d) == Approx(on_cone).epsilon(1e-7));
  }
}

TEST_CASE("envelope free function matches the struct on planar points") {
  REQUIRE(envelope(2.0, {3.0, 4.0}, 1.5, 2.0) ==
          Approx(Envelope{1.5, 2.0}.value(2.0, 5.0)).epsilon(1e-15));
}

TEST_CASE("envelope rejects bad parameters and negative coordinates") {
  REQUIRE_THROWS_WITH((Envelope{0.0, 2.0}).value(1.0, 1.0), ContainsSubstring("need A > 0"));
  REQUIRE_THROWS_WITH((Envelope{-1.0, 2.0}).validate(), ContainsSubstring("need A > 0"));
  REQUIRE_THROWS_WITH((Envelope{1.0, 1.0}).validate(),
                      ContainsSubstring("decay exponent out of range"));
  REQUIRE_THROWS_WITH((Envelope{1.0, 0.5}).value(1.0, 1.0),
                      ContainsSubstring("decay exponent out of range"));
  REQUIRE_THROWS_WITH((Envelope{1.0, 2.0}).value(-0.1, 1.0),
                      ContainsSubstring("need t, |x| >= 0"));
  REQUIRE_THROWS_WITH((Envelope{1.0, 2.0}).value(1.0, -0.1),
                      ContainsSubstring("need t, |x| >= 0"));
}

namespace {

// Snapshot whose field is exactly c times the envelope, so every node has
// ratio c and the per-region sups are c wherever the region is non-empty.
WaveState scaled_envelope_state(const GridGeometry& g, const Envelope& env, double t, double c) {
  WaveState s;
  s.t = t;
  s.u = GridField::sample(
      g, [&](double x, double y) { return c * env.value(t, std::hypot(x, y)); });
  s.p = GridField(g);
  return s;
}

}  // namespace

TEST_CASE("envelope ratios report the per-region sup of |u| / envelope") {
  const Envelope env{1.0, 2.0};
  const GridGeometry g = GridGeometry::centered_square(6.0, 33);
  std::vector<WaveState> sol;
  sol.push_back(scaled_envelope_state(g, env, 1.0, 0.5));
  sol.push_back(scaled_envelope_state(g, env, 2.0, 0.25));
  const EnvelopeSeries series = envelope_ratios(sol, env);
  REQUIRE(series.t == std::vector<double>{1.0, 2.0});
  REQUIRE(series.max_ratio_interior[0] == Approx(0.5).epsilon(1e-13));
  REQUIRE(series.max_ratio_exterior[0] == Approx(0.5).epsilon(1e-13));
  REQUIRE(series.max_ratio_interior[1] == Approx(0.25).epsilon(1e-13));
  REQUIRE(series.max_ratio_exterior[1] == Approx(0.25).epsilon(1e-13));
}

TEST_CASE("envelope ratios split the regions at the cone") {
  const Envelope env{1.0, 2.0};
  const GridGeometry g = GridGeometry::centered_square(4.0, 41);
  // Field supported strictly outside the cone r >= t = 2: zero for r < 3
  WaveState s;
  s.t = 2.0;
  s.u = GridField::sample(g, [](double x, double y) {
    return (std::hypot(x, y) >= 3.0) ? 1.0 : 0.0;
  });
  s.p = GridField(g);
  const EnvelopeSeries series = envelope_ratios({s}, env);
  REQUIRE(series.max_ratio_interior[0] == 0.0);
  REQUIRE(series.max_ratio_exterior[0] > 0.0);
}

TEST_CASE("envelope ratios reject an empty sample") {
  REQUIRE_THROWS_WITH(envelope_ratios({}, Envelope{1.0, 2.0}),
                      ContainsSubstring("empty sample"));
}

TEST_CASE("envelope verification passes a bounded ratio trend") {
  const Envelope env{1.0, 2.0};
  const GridGeometry g = GridGeometry::centered_square(6.0, 25);
  std::vector<WaveState> sol;
  for (double t : {1.0, 2.0, 3.0, 4.0}) sol.push_back(scaled_envelope_state(g, env, t, 0.8));
  const ProbeReport rep = verify_envelope(sol, env);
  REQUIRE(rep.pass);
  REQUIRE(rep.probe == "pointwise decay envelope");
  REQUIRE(rep.trend.size() == 3);
  REQUIRE(rep.c_est == Approx(0.8).epsilon(1e-13));
  // cumulative sup at horizons T/4, T/2, T is flat for a constant ratio
  REQUIRE(rep.trend[0] == Approx(rep.trend[2]).epsilon(1e-13));
}

TEST_CASE("envelope verification fails when the constant blows through the slack") {
  const Envelope env{1.0, 2.0};
  const GridGeometry g = GridGeometry::centered_square(6.0, 25);
  std::vector<WaveState> sol;
  sol.push_back(scaled_envelope_state(g, env, 1.0, 0.1));
  sol.push_back(scaled_envelope_state(g, env, 2.0, 0.1));
  sol.push_back(scaled_envelope_state(g, env, 4.0, 0.9));  // x9 between T/2 and T
  const ProbeReport rep = verify_envelope(sol, env);
  REQUIRE_FALSE(rep.pass);
  REQUIRE(rep.c_est == Approx(0.9).epsilon(1e-13));
}
