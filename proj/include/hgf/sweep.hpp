#pragma once

// Life-span sweep: run the solver across a ladder of data sizes eps, record
// the observed breakdown time T_star (or censoring at the budget horizon),
// fit ln T_star against ln eps, and check every record against the calibrated
// lower-bound law T(eps) >= delta * eps^{-4/3} - 1.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hgf/detail/parallel.hpp"
#include "hgf/solver.hpp"

namespace hgf {

struct SweepConfig {
  std::vector<double> epsilons;
  RunConfig base;        // template; eps, t_max and snapshot storage overridden
  double budget_t{30.0}; // per-run simulation-time budget
  int workers{1};        // 0 = hardware concurrency

  void validate() const {
    if (epsilons.empty()) throw std::invalid_argument("SweepConfig: need at least one eps");
    for (double e : epsilons)
      if (!(e >= 0.0)) throw std::invalid_argument("SweepConfig: eps must be >= 0");
    if (!(budget_t > 0.0)) throw std::invalid_argument("SweepConfig: need budget_t > 0");
    if (workers < 0) throw std::invalid_argument("SweepConfig: need workers >= 0");
  }
};

struct LifespanRecord {
  double eps{0.0};
  double T_star{0.0};
  bool censored{false};
  BreakdownReason reason{BreakdownReason::none};
  double peak_weighted_n2{0.0};
  double mu_proxy{0.0};  // eps (1 + T_star)^{3/4}, saturation diagnostic
};

// Runs are independent and deterministic; records come back sorted by eps
// descending regardless of worker count.
inline std::vector<LifespanRecord> sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<double> eps = cfg.epsilons;
  std::sort(eps.rbegin(), eps.rend());
  std::vector<LifespanRecord> records(eps.size());
  detail::parallel_for(eps.size(), cfg.workers, [&](std::size_t i) {
    RunConfig rc = cfg.base;
    rc.decay.eps = eps[i];
    rc.t_max = cfg.budget_t;
    rc.keep_snapshots = false;
    const RunResult res = run(rc);
    LifespanRecord& r = records[i];
    r.eps = eps[i];
    r.censored = (res.breakdown.reason == BreakdownReason::none);
    r.T_star = r.censored ? cfg.budget_t : res.breakdown.time;
    r.reason = res.breakdown.reason;
    r.peak_weighted_n2 = res.peak_weighted_n2;
    r.mu_proxy = eps[i] * std::pow(1.0 + r.T_star, 0.75);
  });
  return records;
}

struct FitResult {
  double slope{0.0};      // d ln T_star / d ln eps over uncensored records
  double intercept{0.0};  // ln T_star at ln eps = 0
  double delta_cal{0.0};  // min T_star * eps^{4/3}
  int n_censored{0};
  int n_uncensored{0};
  bool sufficient{false};       // >= 3 uncensored records with distinct eps
  bool delta_from_horizons{false};  // all censored: delta is a lower estimate
};

inline FitResult fit_exponent(const std::vector<LifespanRecord>& records) {
  FitResult f;
  std::vector<double> lx, ly;
  double delta_unc = HUGE_VAL, delta_cen = HUGE_VAL;
  for (const auto& r : records) {
    if (r.eps <= 0.0) continue;
    const double d = r.T_star * std::pow(r.eps, 4.0 / 3.0);
    if (r.censored) {
      ++f.n_censored;
      delta_cen = std::min(delta_cen, d);
    } else {
      ++f.n_uncensored;
      delta_unc = std::min(delta_unc, d);
      if (r.T_star > 0.0) {
        lx.push_back(std::log(r.eps));
        ly.push_back(std::log(r.T_star));
      }
    }
  }
  if (f.n_uncensored > 0) {
    f.delta_cal = delta_unc;
  } else if (f.n_censored > 0) {
    f.delta_cal = delta_cen;
    f.delta_from_horizons = true;
  }

  std::vector<double> ux = lx;
  std::sort(ux.begin(), ux.end());
  ux.erase(std::unique(ux.begin(), ux.end()), ux.end());
  if (ux.size() < 3) return f;  // insufficient for a fit

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= ly.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.sufficient = true;
  return f;
}

enum class BoundCheck { pass, fail, indeterminate };

inline const char* bound_check_name(BoundCheck b) {
  switch (b) {
    case BoundCheck::pass: return "pass";
    case BoundCheck::fail: return "fail";
    case BoundCheck::indeterminate: return "indeterminate";
  }
  return "?";
}

// T_star >= delta * eps^{-4/3} - 1 per record. Censored runs pass when the
// horizon already clears the bound and are indeterminate otherwise.
inline std::vector<BoundCheck> check_lower_bound(const std::vector<LifespanRecord>& records,
                                                 double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("check_lower_bound: need delta > 0");
  std::vector<BoundCheck> out;
  for (const auto& r : records) {
    if (r.eps <= 0.0) {
      out.push_back(BoundCheck::indeterminate);
      continue;
    }
    const double bound = delta * std::pow(r.eps, -4.0 / 3.0) - 1.0;
    if (r.censored)
      out.push_back(r.T_star >= bound - 1e-9 ? BoundCheck::pass : BoundCheck::indeterminate);
    else
      out.push_back(r.T_star >= bound - 1e-9 ? BoundCheck::pass : BoundCheck::fail);
  }
  return out;
}

}  // namespace hgf
