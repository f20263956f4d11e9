#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "metaparadox/effects.hpp"
#include "metaparadox/stats.hpp"

namespace metaparadox {

enum class Model { FixedEffect, RandomEffects };

// Cochran's Q, DerSimonian-Laird tau^2 (truncated at zero), I^2 in percent,
// and the chi-square heterogeneity-test p-value.
struct HeterogeneityStats {
  double q;
  std::size_t df;
  double tau2;
  double i2;
  Probability p_q;
};

struct PooledResult {
  Model model;
  double estimate;  // analysis scale
  double se;
  ConfidenceInterval ci;  // analysis scale
  Probability level;
  std::vector<double> weights;  // normalized, per input study
  HeterogeneityStats het;
};

// Inverse-variance pooling with weights 1/v_i. Requires k >= 2 studies of a
// single measure.
PooledResult fixed_effect_pool(std::span<const StudyEffect> studies,
                               Probability level);

HeterogeneityStats heterogeneity(std::span<const StudyEffect> studies);

// DerSimonian-Laird random effects: weights 1/(v_i + tau2_hat). Degenerates
// to the fixed-effect pool when tau2_hat = 0.
PooledResult random_effects_pool(std::span<const StudyEffect> studies,
                                 Probability level);

PooledResult meta_analyze(std::span<const StudyEffect> studies,
                          Probability level, Model model);

// Wald interval: estimate +/- z * se.
ConfidenceInterval ci_of(double estimate, double se, Probability level);

struct DisplayEffect {
  double estimate;
  ConfidenceInterval ci;
};

// Identity for mean differences; exponentiates estimate and interval for
// odds ratios.
DisplayEffect to_display_scale(const PooledResult& result,
                               EffectMeasure measure);

std::string_view model_tag(Model model);  // "fe" / "re"

}  // namespace metaparadox
