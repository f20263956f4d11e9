#include "metaparadox/effects.hpp"

#include <cmath>
#include <stdexcept>
#include <string_view>
#include <utility>

namespace metaparadox {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw std::domain_error(std::string(what) + " must be finite");
  }
}

}  // namespace

ConfidenceInterval::ConfidenceInterval(double lo_in, double hi_in,
                                       Probability level_in)
    : lo(lo_in), hi(hi_in), level(level_in) {
  require_finite(lo, "interval lower bound");
  require_finite(hi, "interval upper bound");
  if (!(lo < hi)) {
    throw std::domain_error("interval requires lo < hi");
  }
  const double l = level.value();
  if (l <= 0.0 || l >= 1.0) {
    throw std::domain_error("interval level must lie strictly in (0,1)");
  }
}

StudyEffect study_from_estimate_se(std::string label, double y, double se,
                                   EffectMeasure measure) {
  require_finite(y, "effect estimate");
  require_finite(se, "standard error");
  if (se <= 0.0) {
    throw std::domain_error("se must be > 0");
  }
  return StudyEffect{std::move(label), y, se * se, measure};
}

StudyEffect study_from_ci(std::string label, const ConfidenceInterval& ci,
                          EffectMeasure measure) {
  double lo = ci.lo;
  double hi = ci.hi;
  if (measure == EffectMeasure::OddsRatio) {
    if (lo <= 0.0) {
      throw std::domain_error(
          "odds-ratio interval endpoints must be > 0 on the display scale");
    }
    lo = std::log(lo);
    hi = std::log(hi);
  }
  const double y = (lo + hi) / 2.0;
  const double se = (hi - lo) / (2.0 * two_sided_z(ci.level));
  return study_from_estimate_se(std::move(label), y, se, measure);
}

StudyEffect study_from_two_arm_continuous(std::string label, std::uint64_t n1,
                                          double mean1, double sd1,
                                          std::uint64_t n2, double mean2,
                                          double sd2) {
  if (n1 < 2 || n2 < 2) {
    throw std::domain_error("each arm needs n >= 2");
  }
  require_finite(mean1, "mean1");
  require_finite(mean2, "mean2");
  require_finite(sd1, "sd1");
  require_finite(sd2, "sd2");
  if (sd1 <= 0.0 || sd2 <= 0.0) {
    throw std::domain_error("sd must be > 0");
  }
  const double y = mean1 - mean2;
  const double v = sd1 * sd1 / static_cast<double>(n1) +
                   sd2 * sd2 / static_cast<double>(n2);
  return StudyEffect{std::move(label), y, v, EffectMeasure::MeanDifference};
}

StudyEffect study_from_2x2(std::string label, std::uint64_t a, std::uint64_t b,
                           std::uint64_t c, std::uint64_t d) {
  if (a + b == 0 || c + d == 0) {
    throw std::domain_error("2x2 table requires a nonempty row for each arm");
  }
  double fa = static_cast<double>(a);
  double fb = static_cast<double>(b);
  double fc = static_cast<double>(c);
  double fd = static_cast<double>(d);
  if (a == 0 || b == 0 || c == 0 || d == 0) {
    fa += 0.5;
    fb += 0.5;
    fc += 0.5;
    fd += 0.5;
  }
  const double y = std::log((fa * fd) / (fb * fc));
  const double v = 1.0 / fa + 1.0 / fb + 1.0 / fc + 1.0 / fd;
  return StudyEffect{std::move(label), y, v, EffectMeasure::OddsRatio};
}

std::string_view measure_tag(EffectMeasure measure) {
  return measure == EffectMeasure::MeanDifference ? "MD" : "OR";
}

}  // namespace metaparadox
