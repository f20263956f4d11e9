// Straight-line reference recomputation used to cross-check the pooling
// engine. Deliberately self-contained: no metaparadox headers, a hard-coded
// normal quantile from reference tables, and no shared helpers, so agreement
// with the library is evidence rather than tautology.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

// z for a two-sided 95% interval (reference table value).
inline constexpr double kZ95 = 1.959963984540054;

struct Pooling {
  double est_fe = 0;
  double se_fe = 0;
  double fe_lo = 0, fe_hi = 0;
  double q = 0;
  double i2 = 0;
  double tau2 = 0;
  double est_re = 0;
  double se_re = 0;
  double re_lo = 0, re_hi = 0;
  std::vector<double> weights_fe;  // normalized
  std::vector<double> weights_re;  // normalized
};

// y and se back-calculated from a reported interval, optionally after a log
// transform (odds ratios).
inline void from_ci(double lo, double hi, bool log_scale, double& y,
                    double& v) {
  if (log_scale) {
    lo = std::log(lo);
    hi = std::log(hi);
  }
  y = (lo + hi) / 2.0;
  const double se = (hi - lo) / (2.0 * kZ95);
  v = se * se;
}

inline Pooling pool(const std::vector<double>& y,
                    const std::vector<double>& v) {
  Pooling r;
  const std::size_t k = y.size();

  double sum_w = 0, sum_w2 = 0, sum_wy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = 1.0 / v[i];
    sum_w += w;
    sum_w2 += w * w;
    sum_wy += w * y[i];
  }
  r.est_fe = sum_wy / sum_w;
  r.se_fe = 1.0 / std::sqrt(sum_w);
  r.fe_lo = r.est_fe - kZ95 * r.se_fe;
  r.fe_hi = r.est_fe + kZ95 * r.se_fe;
  for (std::size_t i = 0; i < k; ++i) {
    r.weights_fe.push_back((1.0 / v[i]) / sum_w);
  }

  r.q = 0;
  for (std::size_t i = 0; i < k; ++i) {
    r.q += (y[i] - r.est_fe) * (y[i] - r.est_fe) / v[i];
  }
  const double df = static_cast<double>(k - 1);
  r.i2 = r.q > 0 && r.q > df ? (r.q - df) / r.q * 100.0 : 0.0;
  r.tau2 = r.q > df ? (r.q - df) / (sum_w - sum_w2 / sum_w) : 0.0;

  double sum_ws = 0, sum_wsy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double ws = 1.0 / (v[i] + r.tau2);
    sum_ws += ws;
    sum_wsy += ws * y[i];
  }
  r.est_re = sum_wsy / sum_ws;
  r.se_re = 1.0 / std::sqrt(sum_ws);
  r.re_lo = r.est_re - kZ95 * r.se_re;
  r.re_hi = r.est_re + kZ95 * r.se_re;
  for (std::size_t i = 0; i < k; ++i) {
    r.weights_re.push_back((1.0 / (v[i] + r.tau2)) / sum_ws);
  }
  return r;
}

// The four reference datasets, as (lo, hi, log_scale) interval triples.
struct Interval {
  double lo;
  double hi;
  bool log_scale;
};

inline Pooling pool_intervals(const std::vector<Interval>& intervals) {
  std::vector<double> y(intervals.size()), v(intervals.size());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    from_ci(intervals[i].lo, intervals[i].hi, intervals[i].log_scale, y[i],
            v[i]);
  }
  return pool(y, v);
}

inline std::vector<Interval> hospital_stay() {
  return {{0.19, 0.71, false}, {1.17, 2.34, false}};
}

inline std::vector<Interval> dpp4_heart_failure() {
  return {{1.04, 1.41, true}, {1.16, 2.92, true}};
}

inline std::vector<Interval> violence_mental_illness() {
  return {{1.44, 4.04, true}, {1.46, 2.69, true}, {10.01, 13.92, true}};
}

inline std::vector<Interval> night_sweats() {
  return {{-0.79, -0.01, false}, {-4.5, -3.3, false}};
}

}  // namespace oracle
