#pragma once

// Config round-trip (JSON) and result serialization (CSV / JSON / gnuplot).
// CSV numbers use %.17g so a round-trip through text is lossless.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgf/probe.hpp"
#include "hgf/solver.hpp"
#include "hgf/sweep.hpp"

namespace hgf {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// RunConfig / SweepConfig <-> JSON

inline DataFamily data_family_from_name(const std::string& s) {
  if (s == "rational") return DataFamily::rational;
  if (s == "gaussian_tail") return DataFamily::gaussian_tail;
  throw std::invalid_argument("unknown data family: " + s);
}

inline nlohmann::json to_json(const RunConfig& c) {
  return nlohmann::json{
      {"half_width", c.half_width},
      {"nodes", c.nodes},
      {"family", data_family_name(c.family)},
      {"A", c.decay.A},
      {"k", c.decay.k},
      {"epsilon", c.decay.eps},
      {"u1_sign", c.u1_sign},
      {"cfl_safety", c.cfl_safety},
      {"snapshot_dt", c.snapshot_dt},
      {"t_max", c.t_max},
      {"l1", c.l1},
      {"l2", c.l2},
      {"thresholds",
       {{"u_max", c.thresholds.u_max},
        {"norm_multiple", c.thresholds.norm_multiple},
        {"curvature_cap", c.thresholds.curvature_cap},
        {"dt_min", c.thresholds.dt_min}}},
      {"sponge",
       {{"enabled", c.sponge.enabled},
        {"width_frac", c.sponge.width_frac},
        {"strength", c.sponge.strength}}},
  };
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.half_width = j.value("half_width", c.half_width);
  c.nodes = j.value("nodes", c.nodes);
  if (j.contains("family")) c.family = data_family_from_name(j.at("family").get<std::string>());
  c.decay.A = j.value("A", c.decay.A);
  c.decay.k = j.value("k", c.decay.k);
  c.decay.eps = j.value("epsilon", c.decay.eps);
  c.u1_sign = j.value("u1_sign", c.u1_sign);
  c.cfl_safety = j.value("cfl_safety", c.cfl_safety);
  c.snapshot_dt = j.value("snapshot_dt", c.snapshot_dt);
  c.t_max = j.value("t_max", c.t_max);
  c.l1 = j.value("l1", c.l1);
  c.l2 = j.value("l2", c.l2);
  if (j.contains("thresholds")) {
    const auto& t = j.at("thresholds");
    c.thresholds.u_max = t.value("u_max", c.thresholds.u_max);
    c.thresholds.norm_multiple = t.value("norm_multiple", c.thresholds.norm_multiple);
    c.thresholds.curvature_cap = t.value("curvature_cap", c.thresholds.curvature_cap);
    c.thresholds.dt_min = t.value("dt_min", c.thresholds.dt_min);
  }
  if (j.contains("sponge")) {
    const auto& s = j.at("sponge");
    c.sponge.enabled = s.value("enabled", c.sponge.enabled);
    c.sponge.width_frac = s.value("width_frac", c.sponge.width_frac);
    c.sponge.strength = s.value("strength", c.sponge.strength);
  }
  c.validate();
  return c;
}

inline nlohmann::json to_json(const SweepConfig& c) {
  return nlohmann::json{{"epsilons", c.epsilons},
                        {"budget_t", c.budget_t},
                        {"workers", c.workers},
                        {"base", to_json(c.base)}};
}

inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig c;
  c.epsilons = j.at("epsilons").get<std::vector<double>>();
  c.budget_t = j.value("budget_t", c.budget_t);
  c.workers = j.value("workers", c.workers);
  if (j.contains("base")) c.base = run_config_from_json(j.at("base"));
  c.validate();
  return c;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

inline void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// CSV

inline std::string csv_table(const std::vector<std::string>& header,
                             const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out += ',';
    out += header[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("csv_table: row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_g17(row[c]);
    }
    out += '\n';
  }
  return out;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  save_text_file(path, csv_table(header, rows));
}

// Scalar field as x1,x2,value rows (row-major over the grid).
inline std::string field_csv(const GridField& f, const std::string& value_name = "value") {
  const GridGeometry& g = f.geom();
  std::vector<std::vector<double>> rows;
  rows.reserve(f.data().size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) rows.push_back({g.x(i), g.y(j), f.at(i, j)});
  return csv_table({"x1", "x2", value_name}, rows);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

// Reads a field column from a CSV with x1,x2 coordinate columns laid out on a
// uniform tensor grid (any row order). Throws when the lattice is not uniform
// or rows are missing.
inline GridField read_field_csv(const std::string& path, const std::string& value_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  const auto header = detail::split_csv_line(line);
  int cx = -1, cy = -1, cv = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x1") cx = static_cast<int>(i);
    if (header[i] == "x2") cy = static_cast<int>(i);
    if (header[i] == value_column) cv = static_cast<int>(i);
  }
  if (cx < 0 || cy < 0) throw std::runtime_error("CSV lacks x1/x2 columns: " + path);
  if (cv < 0) throw std::runtime_error("CSV lacks column '" + value_column + "': " + path);

  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    const std::size_t need = static_cast<std::size_t>(std::max({cx, cy, cv})) + 1;
    if (cells.size() < need) throw std::runtime_error("short CSV row in " + path);
    rows.push_back({std::stod(cells[cx]), std::stod(cells[cy]), std::stod(cells[cv])});
  }
  if (rows.empty()) throw std::runtime_error("no data rows in " + path);

  auto axis_values = [&](int comp) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r[comp]);
    std::sort(v.begin(), v.end());
    std::vector<double> uniq;
    for (double x : v)
      if (uniq.empty() || x - uniq.back() > 1e-12 * (1.0 + std::abs(x))) uniq.push_back(x);
    return uniq;
  };
  const std::vector<double> xs = axis_values(0), ys = axis_values(1);
  if (xs.size() < 2 || ys.size() < 2) throw std::runtime_error("degenerate grid in " + path);
  const double hx = (xs.back() - xs.front()) / (xs.size() - 1);
  const double hy = (ys.back() - ys.front()) / (ys.size() - 1);
  if (std::abs(hx - hy) > 1e-9 * (1.0 + std::abs(hx)))
    throw std::runtime_error("anisotropic grid spacing in " + path);
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - (xs.front() + hx * i)) > 1e-9 * (1.0 + std::abs(xs[i])))
      throw std::runtime_error("non-uniform grid in " + path);
  for (std::size_t j = 0; j < ys.size(); ++j)
    if (std::abs(ys[j] - (ys.front() + hy * j)) > 1e-9 * (1.0 + std::abs(ys[j])))
      throw std::runtime_error("non-uniform grid in " + path);
  if (rows.size() != xs.size() * ys.size())
    throw std::runtime_error("grid rows missing or duplicated in " + path);

  GridGeometry geom{static_cast<int>(xs.size()), static_cast<int>(ys.size()), hx, xs.front(),
                    ys.front()};
  GridField f(geom);
  for (const auto& r : rows) {
    const int i = static_cast<int>(std::lround((r[0] - geom.x0) / hx));
    const int j = static_cast<int>(std::lround((r[1] - geom.y0) / hy));
    f.at(i, j) = r[2];
  }
  return f;
}

// ---------------------------------------------------------------------------
// Probe / run / sweep results

inline nlohmann::json to_json(const ProbeReport& r) {
  return nlohmann::json{{"probe", r.probe},     {"sample", r.sample}, {"c_est", r.c_est},
                        {"trend", r.trend},     {"slack", r.slack},   {"pass", r.pass},
                        {"note", r.note}};
}

inline nlohmann::json breakdown_json(const RunResult& res, const RunConfig& cfg) {
  return nlohmann::json{{"reason", breakdown_reason_name(res.breakdown.reason)},
                        {"time", res.breakdown.time},
                        {"detail", res.breakdown.detail},
                        {"t_end", res.t_end},
                        {"peak_weighted_N2", res.peak_weighted_n2},
                        {"order_caps", {{"l1", cfg.l1}, {"l2", cfg.l2}}}};
}

inline std::string norm_series_csv(const std::vector<NormSample>& series) {
  std::vector<std::vector<double>> rows;
  rows.reserve(series.size());
  for (const auto& s : series)
    rows.push_back({s.t, s.norms.M1, s.norms.M2, s.norms.N1, s.norms.N2, s.max_R_interior});
  return csv_table({"t", "M1", "M2", "N1", "N2", "max_R_interior"}, rows);
}

inline std::string snapshot_csv(const WaveState& s) {
  const GridGeometry& g = s.u.geom();
  std::vector<std::vector<double>> rows;
  rows.reserve(s.u.data().size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) rows.push_back({g.x(i), g.y(j), s.u.at(i, j), s.p.at(i, j)});
  return csv_table({"x1", "x2", "u", "p"}, rows);
}

inline std::string lifespan_records_csv(const std::vector<LifespanRecord>& recs) {
  std::string out = "epsilon,T_star,censored,reason,peak_weighted_N2,mu_proxy\n";
  for (const auto& r : recs) {
    out += format_g17(r.eps);
    out += ',';
    out += format_g17(r.T_star);
    out += ',';
    out += r.censored ? '1' : '0';
    out += ',';
    out += breakdown_reason_name(r.reason);
    out += ',';
    out += format_g17(r.peak_weighted_n2);
    out += ',';
    out += format_g17(r.mu_proxy);
    out += '\n';
  }
  return out;
}

inline nlohmann::json to_json(const FitResult& f) {
  return nlohmann::json{{"slope", f.slope},
                        {"intercept", f.intercept},
                        {"delta_cal", f.delta_cal},
                        {"n_censored", f.n_censored},
                        {"n_uncensored", f.n_uncensored},
                        {"sufficient", f.sufficient},
                        {"delta_from_horizons", f.delta_from_horizons}};
}

// Gnuplot script for the records CSV: observed T_star against the fitted
// power law and the calibrated lower bound.
inline std::string lifespan_plot_script(const FitResult& f, const std::string& records_csv) {
  std::string s;
  s += "set datafile separator ','\n";
  s += "set logscale xy\n";
  s += "set xlabel 'epsilon'\n";
  s += "set ylabel 'T_star'\n";
  s += "set key left bottom\n";
  s += "fitT(x) = exp(" + format_g17(f.intercept) + ") * x**(" + format_g17(f.slope) + ")\n";
  s += "boundT(x) = " + format_g17(f.delta_cal) + " * x**(-4.0/3.0) - 1\n";
  s += "plot '" + records_csv +
       "' every ::1 using 1:2 with points pt 7 title 'observed', \\\n"
       "     fitT(x) with lines title 'fit', \\\n"
       "     boundT(x) with lines dt 2 title 'calibrated lower bound'\n";
  return s;
}

}  // namespace hgf
