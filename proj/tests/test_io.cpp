#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hgf/io.hpp"

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
using namespace hgf;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/hgf_io_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("g17 formatting survives a text round-trip losslessly") {
  for (double v : {0.1, 1.0 / 3.0, M_PI, 1e-300, -7.25, 123456789.123456789}) {
    REQUIRE(std::stod(format_g17(v)) == v);
    REQUIRE(std::stod(format_g17(-v)) == -v);
  }
}

TEST_CASE("run config serializes field for field") {
  RunConfig c;
  c.half_width = 12.5;
  c.nodes = 97;
  c.family = DataFamily::gaussian_tail;
  c.decay = DecayParams{1.25, 2.5, 0.075};
  c.u1_sign = 1.0;
  c.cfl_safety = 0.3;
  c.snapshot_dt = 0.25;
  c.t_max = 7.0;
  c.thresholds.u_max = 8.0;
  c.thresholds.norm_multiple = 15.0;
  c.thresholds.curvature_cap = 500.0;
  c.thresholds.dt_min = 1e-6;
  c.sponge.enabled = true;
  c.sponge.width_frac = 0.15;
  c.sponge.strength = 3.0;
  c.l1 = 2;
  c.l2 = 2;

  const RunConfig r = run_config_from_json(to_json(c));
  REQUIRE(r.half_width == c.half_width);
  REQUIRE(r.nodes == c.nodes);
  REQUIRE(r.family == c.family);
  REQUIRE(r.decay.A == c.decay.A);
  REQUIRE(r.decay.k == c.decay.k);
  REQUIRE(r.decay.eps == c.decay.eps);
  REQUIRE(r.u1_sign == c.u1_sign);
  REQUIRE(r.cfl_safety == c.cfl_safety);
  REQUIRE(r.snapshot_dt == c.snapshot_dt);
  REQUIRE(r.t_max == c.t_max);
  REQUIRE(r.thresholds.u_max == c.thresholds.u_max);
  REQUIRE(r.thresholds.norm_multiple == c.thresholds.norm_multiple);
  REQUIRE(r.thresholds.curvature_cap == c.thresholds.curvature_cap);
  REQUIRE(r.thresholds.dt_min == c.thresholds.dt_min);
  REQUIRE(r.sponge.enabled == c.sponge.enabled);
  REQUIRE(r.sponge.width_frac == c.sponge.width_frac);
  REQUIRE(r.sponge.strength == c.sponge.strength);
  REQUIRE(r.l1 == c.l1);
  REQUIRE(r.l2 == c.l2);
}

TEST_CASE("missing config keys fall back to defaults and bad values throw") {
  const RunConfig defaults;
  const RunConfig r = run_config_from_json(nlohmann::json::object());
  REQUIRE(r.half_width == defaults.half_width);
  REQUIRE(r.nodes == defaults.nodes);
  REQUIRE(r.family == defaults.family);
  REQUIRE(r.cfl_safety == defaults.cfl_safety);

  REQUIRE_THROWS_WITH(run_config_from_json({{"family", "exponential"}}),
                      ContainsSubstring("unknown data family"));
  REQUIRE_THROWS_WITH(run_config_from_json({{"cfl_safety", 5.0}}),
                      ContainsSubstring("cfl_safety"));
}

TEST_CASE("sweep config serializes its ladder and base run") {
  SweepConfig c;
  c.epsilons = {0.4, 0.2, 0.1};
  c.budget_t = 12.0;
  c.workers = 3;
  c.base.nodes = 65;
  const SweepConfig r = sweep_config_from_json(to_json(c));
  REQUIRE(r.epsilons == c.epsilons);
  REQUIRE(r.budget_t == c.budget_t);
  REQUIRE(r.workers == c.workers);
  REQUIRE(r.base.nodes == 65);
  REQUIRE_THROWS_AS(sweep_config_from_json(nlohmann::json::object()), nlohmann::json::exception);
}

TEST_CASE("json files load back and missing paths are reported") {
  TempFile tf("config.json");
  save_text_file(tf.path, to_json(RunConfig{}).dump());
  const RunConfig r = run_config_from_json(load_json_file(tf.path));
  REQUIRE(r.nodes == RunConfig{}.nodes);
  REQUIRE_THROWS_WITH(load_json_file("/tmp/does_not_exist_hgf.json"),
                      ContainsSubstring("cannot open config file"));
}

TEST_CASE("csv tables agree with their header width") {
  const std::string t = csv_table({"a", "b"}, {{1.0, 2.0}, {3.0, 0.5}});
  REQUIRE(t == "a,b\n1,2\n3,0.5\n");
  REQUIRE_THROWS_WITH(csv_table({"a", "b"}, {{1.0}}),
                      ContainsSubstring("row width does not match header"));
}

TEST_CASE("field CSV round-trips through the reader") {
  const GridGeometry g = GridGeometry::centered_square(2.0, 9);
  const GridField f = GridField::sample(g, [](double x, double y) {
    return std::sin(x) * std::cos(y) + 0.125 * x;
  });
  TempFile tf("field.csv");
  save_text_file(tf.path, field_csv(f, "u"));
  const GridField r = read_field_csv(tf.path, "u");
  REQUIRE(r.geom().nx == g.nx);
  REQUIRE(r.geom().ny == g.ny);
  REQUIRE(r.geom().h == Approx(g.h).epsilon(1e-14));
  REQUIRE(r.geom().x0 == Approx(g.x0).epsilon(1e-14));
  REQUIRE((r - f).max_abs() == 0.0);  // g17 text is lossless
}

TEST_CASE("field reader rejects malformed lattices") {
  TempFile tf("bad.csv");

  save_text_file(tf.path, "x1,zz,u\n0,0,1\n");
  REQUIRE_THROWS_WITH(read_field_csv(tf.path, "u"), ContainsSubstring("CSV lacks x1/x2"));

  save_text_file(tf.path, "x1,x2,u\n0,0,1\n1,0,2\n0,1,3\n1,1,4\n");
  REQUIRE_NOTHROW(read_field_csv(tf.path, "u"));
  REQUIRE_THROWS_WITH(read_field_csv(tf.path, "v"), ContainsSubstring("CSV lacks column 'v'"));

  // anisotropic spacing: x step 1, y step 2
  save_text_file(tf.path, "x1,x2,u\n0,0,1\n1,0,2\n0,2,3\n1,2,4\n");
  REQUIRE_THROWS_WITH(read_field_csv(tf.path, "u"), ContainsSubstring("anisotropic grid spacing"));

  // non-uniform x axis {0, 1, 3}
  save_text_file(tf.path,
                 "x1,x2,u\n0,0,1\n1,0,2\n3,0,3\n0,1,4\n1,1,5\n3,1,6\n0,3,7\n1,3,8\n3,3,9\n");
  REQUIRE_THROWS_WITH(read_field_csv(tf.path, "u"), ContainsSubstring("non-uniform grid"));

  // missing row (0,1)
  save_text_file(tf.path, "x1,x2,u\n0,0,1\n1,0,2\n1,1,4\n");
  REQUIRE_THROWS_WITH(read_field_csv(tf.path, "u"),
                      ContainsSubstring("grid rows missing or duplicated"));

  REQUIRE_THROWS_WITH(read_field_csv("/tmp/no_such_field_file.csv", "u"),
                      ContainsSubstring("cannot open input file"));
}

TEST_CASE("field reader accepts any row order") {
  TempFile tf("shuffled.csv");
  save_text_file(tf.path, "x1,x2,u\n1,1,4\n0,0,1\n1,0,2\n0,1,3\n");
  const GridField f = read_field_csv(tf.path, "u");
  REQUIRE(f.at(0, 0) == 1.0);
  REQUIRE(f.at(1, 0) == 2.0);
  REQUIRE(f.at(0, 1) == 3.0);
  REQUIRE(f.at(1, 1) == 4.0);
}

TEST_CASE("probe reports serialize their verdict") {
  ProbeReport r;
  r.probe = "sample bound";
  r.sample = "lattice";
  r.c_est = 1.5;
  r.trend = {1.0, 1.2, 1.5};
  r.pass = true;
  r.note = "n";
  const auto j = to_json(r);
  REQUIRE(j.at("probe") == "sample bound");
  REQUIRE(j.at("pass") == true);
  REQUIRE(j.at("trend").size() == 3);
  REQUIRE(j.at("c_est") == 1.5);
}

TEST_CASE("norm series and snapshot CSV carry stable headers") {
  NormSample ns;
  ns.t = 1.0;
  ns.norms.M1 = 2.0;
  ns.norms.M2 = 3.0;
  ns.norms.N1 = 4.0;
  ns.norms.N2 = 5.0;
  ns.max_R_interior = 6.0;
  const std::string s = norm_series_csv({ns});
  REQUIRE(s == "t,M1,M2,N1,N2,max_R_interior\n1,2,3,4,5,6\n");

  const GridGeometry g{2, 2, 1.0, 0.0, 0.0};
  WaveState w;
  w.u = GridField(g);
  w.p = GridField(g);
  w.u.at(1, 0) = 0.5;
  const std::string snap = snapshot_csv(w);
  REQUIRE_THAT(snap, ContainsSubstring("x1,x2,u,p\n"));
  REQUIRE_THAT(snap, ContainsSubstring("1,0,0.5,0"));
}

TEST_CASE("lifespan records CSV spells out censoring and reasons") {
  LifespanRecord a;
  a.eps = 0.25;
  a.T_star = 4.0;
  a.censored = false;
  a.reason = BreakdownReason::amplitude_cap;
  a.peak_weighted_n2 = 1.5;
  a.mu_proxy = 0.25 * std::pow(5.0, 0.75);
  LifespanRecord b;
  b.eps = 0.1;
  b.T_star = 30.0;
  b.censored = true;
  b.reason = BreakdownReason::none;
  const std::string csv = lifespan_records_csv({a, b});
  REQUIRE_THAT(csv, ContainsSubstring("epsilon,T_star,censored,reason,peak_weighted_N2,mu_proxy\n"));
  REQUIRE_THAT(csv, ContainsSubstring("0.25,4,0,amplitude_cap,1.5,"));
  // %.17g carries all digits of the binary value of 0.1
  REQUIRE_THAT(csv, ContainsSubstring("0.10000000000000001,30,1,none,0,0"));
}

TEST_CASE("fit results and breakdowns serialize for reports") {
  FitResult f;
  f.slope = -4.0 / 3.0;
  f.intercept = 0.5;
  f.delta_cal = 0.7;
  f.n_censored = 1;
  f.n_uncensored = 3;
  f.sufficient = true;
  const auto j = to_json(f);
  REQUIRE(j.at("slope") == Approx(-4.0 / 3.0));
  REQUIRE(j.at("sufficient") == true);

  const std::string plot = lifespan_plot_script(f, "records.csv");
  REQUIRE_THAT(plot, ContainsSubstring("set logscale xy"));
  REQUIRE_THAT(plot, ContainsSubstring("records.csv"));
  REQUIRE_THAT(plot, ContainsSubstring("x**(-4.0/3.0) - 1"));

  RunResult res;
  res.breakdown = {2.5, BreakdownReason::curvature_cap, "max|R| = 2000"};
  res.t_end = 2.5;
  res.peak_weighted_n2 = 9.0;
  RunConfig cfg;
  const auto bj = breakdown_json(res, cfg);
  REQUIRE(bj.at("reason") == "curvature_cap");
  REQUIRE(bj.at("time") == 2.5);
  REQUIRE(bj.at("order_caps").at("l1") == cfg.l1);
}

TEST_CASE("data family names round-trip") {
  REQUIRE(data_family_from_name("rational") == DataFamily::rational);
  REQUIRE(data_family_from_name("gaussian_tail") == DataFamily::gaussian_tail);
  REQUIRE(std::string(data_family_name(DataFamily::rational)) == "rational");
  REQUIRE(std::string(data_family_name(DataFamily::gaussian_tail)) == "gaussian_tail");
}
