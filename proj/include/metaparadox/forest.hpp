#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metaparadox/effects.hpp"
#include "metaparadox/pooling.hpp"

namespace metaparadox {

// One display-scale line of a forest plot. The pooled row carries the model
// tag and the heterogeneity stats used for the footer.
struct ForestRow {
  std::string label;
  double display_estimate;
  ConfidenceInterval display_ci;
  double weight_percent;  // (0,100] for study rows
  bool is_pooled = false;
  std::string model_tag;
  std::optional<HeterogeneityStats> het;
};

// Study rows in input order followed by the pooled row; weights come from
// the pooled model.
std::vector<ForestRow> make_forest_rows(std::span<const StudyEffect> studies,
                                        const PooledResult& pooled,
                                        EffectMeasure measure);

struct TextForestOptions {
  std::size_t width = 100;  // total line width, >= 60
  EffectMeasure measure = EffectMeasure::MeanDifference;
};

// Fixed-width table plus an interval track with a null-line marker; the
// pooled interval is drawn as a diamond. Output bytes are deterministic.
// Odds-ratio tracks are positioned on the log scale with the null at 1.
std::string render_forest_text(std::span<const ForestRow> rows,
                               const TextForestOptions& options);

struct SvgForestOptions {
  std::size_t width = 720;  // pixels, >= 400
  EffectMeasure measure = EffectMeasure::MeanDifference;
};

// Standalone SVG: squares sized by weight, diamond for the pooled effect,
// vertical null line, log-scaled axis for odds ratios.
std::string render_forest_svg(std::span<const ForestRow> rows,
                              const SvgForestOptions& options);

}  // namespace metaparadox
