#include "metaparadox/paradox.hpp"

#include <cmath>
#include <stdexcept>

namespace metaparadox {

Direction direction_of_interval(const ConfidenceInterval& ci,
                                double null_value) {
  if (ci.lo > null_value) return Direction::Positive;
  if (ci.hi < null_value) return Direction::Negative;
  return Direction::NotSignificant;
}

Direction study_direction(const StudyEffect& study, Probability alpha) {
  const double a = alpha.value();
  if (a <= 0.0 || a >= 1.0) {
    throw std::domain_error("alpha must lie strictly in (0,1)");
  }
  const ConfidenceInterval ci =
      ci_of(study.y, std::sqrt(study.v), Probability(1.0 - a));
  return direction_of_interval(ci, 0.0);
}

Classification classify_directions(std::span<const Direction> study_directions,
                                   Direction pooled_direction) {
  if (study_directions.empty()) {
    throw std::invalid_argument("needs at least one study direction");
  }
  const Direction first = study_directions.front();
  if (first == Direction::NotSignificant) {
    return Classification::NotUnanimous;
  }
  for (const Direction d : study_directions) {
    if (d != first) return Classification::NotUnanimous;
  }
  return pooled_direction == Direction::NotSignificant
             ? Classification::Paradox
             : Classification::NoParadox;
}

ParadoxVerdict detect_paradox(std::span<const StudyEffect> studies,
                              Probability alpha, Model model) {
  std::vector<Direction> directions;
  directions.reserve(studies.size());
  for (const StudyEffect& s : studies) {
    directions.push_back(study_direction(s, alpha));
  }
  const PooledResult pooled =
      meta_analyze(studies, Probability(1.0 - alpha.value()), model);
  const Direction pooled_direction = direction_of_interval(pooled.ci, 0.0);
  const Classification classification =
      classify_directions(directions, pooled_direction);
  return ParadoxVerdict{std::move(directions), pooled_direction,
                        classification, model, alpha};
}

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::Positive:
      return "Positive";
    case Direction::Negative:
      return "Negative";
    case Direction::NotSignificant:
      return "NotSignificant";
  }
  return "?";
}

std::string_view classification_name(Classification c) {
  switch (c) {
    case Classification::Paradox:
      return "Paradox";
    case Classification::NoParadox:
      return "NoParadox";
    case Classification::NotUnanimous:
      return "NotUnanimous";
  }
  return "?";
}

}  // namespace metaparadox
