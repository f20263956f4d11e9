#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "metaparadox/stats.hpp"

namespace metaparadox {

// The two supported effect measures. Mean differences are analyzed on the
// identity scale (null 0); odds ratios on the natural-log scale (null 0 on
// the analysis scale, 1 on the display scale).
enum class EffectMeasure { MeanDifference, OddsRatio };

struct ConfidenceInterval {
  ConfidenceInterval(double lo, double hi, Probability level);

  double lo;
  double hi;
  Probability level;
};

// One study's effect on the analysis scale: estimate y, within-study
// variance v, and the measure it was computed under.
struct StudyEffect {
  std::string label;
  double y;
  double v;
  EffectMeasure measure;
};

StudyEffect study_from_estimate_se(std::string label, double y, double se,
                                   EffectMeasure measure);

// Back-calculates y and se from a reported interval, assuming it is a
// symmetric Wald interval on the analysis scale (log scale for odds ratios,
// whose endpoints must then be positive).
StudyEffect study_from_ci(std::string label, const ConfidenceInterval& ci,
                          EffectMeasure measure);

StudyEffect study_from_two_arm_continuous(std::string label, std::uint64_t n1,
                                          double mean1, double sd1,
                                          std::uint64_t n2, double mean2,
                                          double sd2);

// Log odds ratio from a 2x2 table (a,b exposed arm; c,d control arm). If any
// cell is zero, 0.5 is added to all four cells.
StudyEffect study_from_2x2(std::string label, std::uint64_t a, std::uint64_t b,
                           std::uint64_t c, std::uint64_t d);

std::string_view measure_tag(EffectMeasure measure);  // "MD" / "OR"

}  // namespace metaparadox
