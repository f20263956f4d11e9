#pragma once

#include <cstddef>

namespace metaparadox {

// A probability; construction rejects NaN and values outside [0,1].
class Probability {
 public:
  explicit Probability(double value);

  double value() const noexcept { return value_; }

  friend bool operator==(Probability a, Probability b) noexcept {
    return a.value_ == b.value_;
  }

 private:
  double value_;
};

// Standard normal CDF, Phi(x). Rejects non-finite input.
Probability norm_cdf(double x);

// Inverse of norm_cdf on (0,1); norm_quantile(0.5) == 0 exactly.
// Rational approximation (Wichura's PPND16), |abs error| well under 1e-9.
double norm_quantile(Probability p);

// Upper-tail probability P(chi^2_df > x) via the regularized incomplete
// gamma function Q(df/2, x/2). Requires x >= 0 and df >= 1.
Probability chisq_sf(double x, std::size_t df);

// z such that a central interval estimate +/- z*se has the given two-sided
// confidence level.
double two_sided_z(Probability level);

}  // namespace metaparadox
