#include "metaparadox/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace metaparadox {

namespace {

void require_poolable(std::span<const StudyEffect> studies) {
  if (studies.size() < 2) {
    throw std::invalid_argument("needs at least two studies");
  }
  const EffectMeasure measure = studies.front().measure;
  for (const StudyEffect& s : studies) {
    if (s.measure != measure) {
      throw std::invalid_argument(
          "all studies must share one effect measure");
    }
    if (!std::isfinite(s.y) || !std::isfinite(s.v) || s.v <= 0.0) {
      throw std::invalid_argument("study '" + s.label +
                                  "' has invalid estimate or variance");
    }
  }
}

// Shared inverse-variance machinery: given per-study weights w_i, produce
// the weighted-mean pool and normalized weights.
PooledResult pool_with_weights(std::span<const StudyEffect> studies,
                               std::span<const double> w, Model model,
                               Probability level, HeterogeneityStats het) {
  double sum_w = 0.0;
  double sum_wy = 0.0;
  for (std::size_t i = 0; i < studies.size(); ++i) {
    sum_w += w[i];
    sum_wy += w[i] * studies[i].y;
  }
  const double estimate = sum_wy / sum_w;
  const double se = 1.0 / std::sqrt(sum_w);
  std::vector<double> normalized(studies.size());
  for (std::size_t i = 0; i < studies.size(); ++i) {
    normalized[i] = w[i] / sum_w;
  }
  return PooledResult{model,
                      estimate,
                      se,
                      ci_of(estimate, se, level),
                      level,
                      std::move(normalized),
                      het};
}

}  // namespace

HeterogeneityStats heterogeneity(std::span<const StudyEffect> studies) {
  require_poolable(studies);
  const std::size_t k = studies.size();
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  double sum_wy = 0.0;
  for (const StudyEffect& s : studies) {
    const double w = 1.0 / s.v;
    sum_w += w;
    sum_w2 += w * w;
    sum_wy += w * s.y;
  }
  const double fe_estimate = sum_wy / sum_w;
  double q = 0.0;
  for (const StudyEffect& s : studies) {
    const double d = s.y - fe_estimate;
    q += d * d / s.v;
  }
  const std::size_t df = k - 1;
  const double excess = q - static_cast<double>(df);
  const double i2 = q > 0.0 ? std::max(0.0, excess / q) * 100.0 : 0.0;
  const double tau2 = std::max(0.0, excess / (sum_w - sum_w2 / sum_w));
  return HeterogeneityStats{q, df, tau2, i2, chisq_sf(q, df)};
}

PooledResult fixed_effect_pool(std::span<const StudyEffect> studies,
                               Probability level) {
  HeterogeneityStats het = heterogeneity(studies);
  std::vector<double> w(studies.size());
  for (std::size_t i = 0; i < studies.size(); ++i) {
    w[i] = 1.0 / studies[i].v;
  }
  return pool_with_weights(studies, w, Model::FixedEffect, level, het);
}

PooledResult random_effects_pool(std::span<const StudyEffect> studies,
                                 Probability level) {
  HeterogeneityStats het = heterogeneity(studies);
  std::vector<double> w(studies.size());
  for (std::size_t i = 0; i < studies.size(); ++i) {
    w[i] = 1.0 / (studies[i].v + het.tau2);
  }
  return pool_with_weights(studies, w, Model::RandomEffects, level, het);
}

PooledResult meta_analyze(std::span<const StudyEffect> studies,
                          Probability level, Model model) {
  return model == Model::FixedEffect ? fixed_effect_pool(studies, level)
                                     : random_effects_pool(studies, level);
}

ConfidenceInterval ci_of(double estimate, double se, Probability level) {
  if (!std::isfinite(estimate)) {
    throw std::domain_error("ci_of: estimate must be finite");
  }
  if (!std::isfinite(se) || se <= 0.0) {
    throw std::domain_error("ci_of: se must be > 0");
  }
  const double half = two_sided_z(level) * se;
  return ConfidenceInterval(estimate - half, estimate + half, level);
}

DisplayEffect to_display_scale(const PooledResult& result,
                               EffectMeasure measure) {
  if (measure == EffectMeasure::MeanDifference) {
    return DisplayEffect{result.estimate, result.ci};
  }
  return DisplayEffect{
      std::exp(result.estimate),
      ConfidenceInterval(std::exp(result.ci.lo), std::exp(result.ci.hi),
                         result.ci.level)};
}

std::string_view model_tag(Model model) {
  return model == Model::FixedEffect ? "fe" : "re";
}

}  // namespace metaparadox
