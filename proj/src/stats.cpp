#include "metaparadox/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace metaparadox {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Regularized lower incomplete gamma P(a,x) by power series, for x < a+1.
double gamma_p_series(double a, double x) {
  constexpr int kMaxIter = 2000;
  const double eps = std::numeric_limits<double>::epsilon();
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * eps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("gamma_p_series: no convergence");
}

// Regularized upper incomplete gamma Q(a,x) by continued fraction (modified
// Lentz), for x >= a+1.
double gamma_q_cf(double a, double x) {
  constexpr int kMaxIter = 2000;
  const double eps = std::numeric_limits<double>::epsilon();
  const double fpmin = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) {
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("gamma_q_cf: no convergence");
}

double regularized_gamma_q(double a, double x) {
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

}  // namespace

Probability::Probability(double value) : value_(value) {
  if (std::isnan(value) || value < 0.0 || value > 1.0) {
    throw std::domain_error("probability must lie in [0,1], got " +
                            std::to_string(value));
  }
}

Probability norm_cdf(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("norm_cdf: input must be finite");
  }
  return Probability(0.5 * std::erfc(-x * kInvSqrt2));
}

double norm_quantile(Probability p) {
  const double prob = p.value();
  if (prob <= 0.0 || prob >= 1.0) {
    throw std::domain_error("norm_quantile: p must lie strictly in (0,1)");
  }

  // Wichura (1988), algorithm AS 241, PPND16.
  const double q = prob - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) *
                    r +
                4.5921953931549871457e4) *
                   r +
               1.3731693765509461125e4) *
                  r +
              1.9715909503065514427e3) *
                 r +
             1.3314166789178437745e2) *
                r +
            3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) *
                    r +
                2.1213794301586595867e4) *
                   r +
               5.3941960214247511077e3) *
                  r +
              6.8718700749205790830e2) *
                 r +
             4.2313330701600911252e1) *
                r +
            1.0);
  }

  double r = (q < 0.0) ? prob : 1.0 - prob;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) *
                 r +
             1.27045825245236838258e0) *
                r +
            3.64784832476320460504e0) *
               r +
           5.76949722146069140550e0) *
              r +
          4.63033784615654529590e0) *
             r +
         1.42343711074968357734e0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) *
                 r +
             1.48103976427480074590e-1) *
                r +
            6.89767334985100004550e-1) *
               r +
           1.67638483018380384940e0) *
              r +
          2.05319162663775882187e0) *
             r +
         1.0);
  } else {
    r -= 5.0;
    x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) *
                 r +
             2.65321895265761230930e-2) *
                r +
            2.96560571828504891230e-1) *
               r +
           1.78482653991729133580e0) *
              r +
          5.46378491116411436990e0) *
             r +
         6.65790464350110377720e0) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                  r +
              1.84631831751005468180e-5) *
                 r +
             7.86869131145613259100e-4) *
                r +
            1.48753612908506148525e-2) *
               r +
           1.36929880922735805310e-1) *
              r +
          5.99832206555887937690e-1) *
             r +
         1.0);
  }
  return (q < 0.0) ? -x : x;
}

Probability chisq_sf(double x, std::size_t df) {
  if (std::isnan(x) || x < 0.0) {
    throw std::domain_error("chisq_sf: x must be >= 0");
  }
  if (!std::isfinite(x)) {
    throw std::domain_error("chisq_sf: x must be finite");
  }
  if (df < 1) {
    throw std::domain_error("chisq_sf: df must be >= 1");
  }
  double q = regularized_gamma_q(static_cast<double>(df) / 2.0, x / 2.0);
  // Guard against sub-epsilon drift from the series branch.
  if (q < 0.0) q = 0.0;
  if (q > 1.0) q = 1.0;
  return Probability(q);
}

double two_sided_z(Probability level) {
  const double l = level.value();
  if (l <= 0.0 || l >= 1.0) {
    throw std::domain_error("confidence level must lie strictly in (0,1)");
  }
  return norm_quantile(Probability((1.0 + l) / 2.0));
}

}  // namespace metaparadox
