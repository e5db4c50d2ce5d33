#pragma once

// Fitted-constant probe reports. A probe evaluates sup LHS/RHS of an
// inequality over a deterministic sample, tracks that constant on nested
// horizons (or nested samples), and passes when the trend stays bounded
// within the slack factor. All-zero trends pass vacuously.

#include <cmath>
#include <string>
#include <vector>

namespace hgf {

struct ProbeReport {
  std::string probe;          // inequality or operation under test
  std::string sample;         // deterministic sample description
  double c_est{0.0};          // fitted constant, sup over the full sample
  std::vector<double> trend;  // constant on nested prefixes/horizons
  double slack{2.0};
  bool pass{false};
  std::string note;
};

inline ProbeReport make_trend_report(std::string probe, std::string sample,
                                     std::vector<double> trend, double slack = 2.0) {
  ProbeReport r;
  r.probe = std::move(probe);
  r.sample = std::move(sample);
  r.trend = std::move(trend);
  r.slack = slack;
  r.c_est = r.trend.empty() ? 0.0 : r.trend.back();
  bool finite = true, all_zero = true;
  for (double c : r.trend) {
    if (!std::isfinite(c)) finite = false;
    if (c != 0.0) all_zero = false;
  }
  if (!finite) {
    r.pass = false;
    r.note = "non-finite constant";
  } else if (all_zero || r.trend.size() < 2) {
    r.pass = finite;
  } else {
    const double prev = r.trend[r.trend.size() - 2];
    const double last = r.trend.back();
    r.pass = (prev == 0.0) ? (last == 0.0) : (last <= slack * prev);
  }
  return r;
}

}  // namespace hgf
