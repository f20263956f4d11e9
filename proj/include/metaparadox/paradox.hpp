#pragma once

#include <span>
#include <vector>

#include "metaparadox/effects.hpp"
#include "metaparadox/pooling.hpp"

namespace metaparadox {

// Side of the null an effect's confidence interval falls on. The null is 0
// on the analysis scale for both measures.
enum class Direction { Positive, Negative, NotSignificant };

enum class Classification { Paradox, NoParadox, NotUnanimous };

struct ParadoxVerdict {
  std::vector<Direction> study_directions;
  Direction pooled_direction;
  Classification classification;
  Model model;
  Probability alpha;
};

// Classifies an interval against a null value: Positive iff lo > null,
// Negative iff hi < null.
Direction direction_of_interval(const ConfidenceInterval& ci,
                                double null_value);

// Wald test of one study at two-sided level alpha.
Direction study_direction(const StudyEffect& study, Probability alpha);

// The core rule: Paradox iff the study directions are unanimous and
// significant while the pooled direction is not significant; any broken
// unanimity is NotUnanimous.
Classification classify_directions(std::span<const Direction> study_directions,
                                   Direction pooled_direction);

// Per-study significance plus pooling under the requested model, both at the
// same alpha.
ParadoxVerdict detect_paradox(std::span<const StudyEffect> studies,
                              Probability alpha, Model model);

std::string_view direction_name(Direction d);
std::string_view classification_name(Classification c);

}  // namespace metaparadox
