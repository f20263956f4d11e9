#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "metaparadox/paradox.hpp"
#include "oracle.hpp"

using namespace metaparadox;

namespace {

std::vector<StudyEffect> hospital_stay_studies() {
  std::vector<StudyEffect> studies;
  for (const auto& iv : oracle::hospital_stay()) {
    studies.push_back(study_from_ci(
        "hs", ConfidenceInterval(iv.lo, iv.hi, Probability(0.95)),
        EffectMeasure::MeanDifference));
  }
  return studies;
}

// Random studies biased toward unanimous significance, for the
// impossibility property.
std::vector<StudyEffect> biased_random_studies(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> uk(2, 10);
  std::uniform_real_distribution<double> umu(-3.0, 3.0);
  std::uniform_real_distribution<double> uspread(0.0, 2.0);
  std::uniform_real_distribution<double> ulogv(-3.0, 1.0);
  std::normal_distribution<double> unit;
  const std::size_t k = uk(rng);
  const double mu = umu(rng);
  const double spread = uspread(rng);
  std::vector<StudyEffect> studies;
  for (std::size_t i = 0; i < k; ++i) {
    const double v = std::exp(ulogv(rng));
    const double y = mu + spread * unit(rng) + std::sqrt(v) * unit(rng);
    studies.push_back(StudyEffect{"b" + std::to_string(i), y, v,
                                  EffectMeasure::MeanDifference});
  }
  return studies;
}

bool unanimous(const std::vector<StudyEffect>& studies, Probability alpha) {
  const Direction first = study_direction(studies.front(), alpha);
  if (first == Direction::NotSignificant) return false;
  for (const StudyEffect& s : studies) {
    if (study_direction(s, alpha) != first) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("study_direction classifies against the analysis-scale null") {
  CHECK(study_direction(
            StudyEffect{"a", 0.45, 0.017596, EffectMeasure::MeanDifference},
            Probability(0.05)) == Direction::Positive);
  CHECK(study_direction(StudyEffect{"b", 0.0, 1.0,
                                    EffectMeasure::MeanDifference},
                        Probability(0.05)) == Direction::NotSignificant);
  CHECK(study_direction(
            StudyEffect{"c", -3.9, 0.093713, EffectMeasure::MeanDifference},
            Probability(0.05)) == Direction::Negative);
  CHECK_THROWS_AS(
      study_direction(StudyEffect{"d", 0.0, 1.0,
                                  EffectMeasure::MeanDifference},
                      Probability(0.0)),
      std::domain_error);
}

TEST_CASE("direction_of_interval") {
  CHECK(direction_of_interval(ConfidenceInterval(0.1, 0.5, Probability(0.95)),
                              0.0) == Direction::Positive);
  CHECK(direction_of_interval(
            ConfidenceInterval(-0.5, -0.1, Probability(0.95)), 0.0) ==
        Direction::Negative);
  CHECK(direction_of_interval(ConfidenceInterval(-0.1, 0.5, Probability(0.95)),
                              0.0) == Direction::NotSignificant);
  // odds-ratio display intervals classify against 1
  CHECK(direction_of_interval(ConfidenceInterval(1.04, 1.41, Probability(0.95)),
                              1.0) == Direction::Positive);
}

TEST_CASE("the reference two-study dataset flips with the model") {
  const auto studies = hospital_stay_studies();

  const ParadoxVerdict re =
      detect_paradox(studies, Probability(0.05), Model::RandomEffects);
  CHECK(re.classification == Classification::Paradox);
  CHECK(re.study_directions[0] == Direction::Positive);
  CHECK(re.study_directions[1] == Direction::Positive);
  CHECK(re.pooled_direction == Direction::NotSignificant);

  const ParadoxVerdict fe =
      detect_paradox(studies, Probability(0.05), Model::FixedEffect);
  CHECK(fe.classification == Classification::NoParadox);
  CHECK(fe.pooled_direction == Direction::Positive);
}

TEST_CASE("mixed or insignificant studies are NotUnanimous") {
  std::vector<StudyEffect> weak{
      {"a", 1.0, 1.0, EffectMeasure::MeanDifference},
      {"b", -1.0, 1.0, EffectMeasure::MeanDifference}};
  CHECK(detect_paradox(weak, Probability(0.05), Model::RandomEffects)
            .classification == Classification::NotUnanimous);

  std::vector<StudyEffect> opposed{
      {"a", 5.0, 0.01, EffectMeasure::MeanDifference},
      {"b", -5.0, 0.01, EffectMeasure::MeanDifference}};
  CHECK(detect_paradox(opposed, Probability(0.05), Model::RandomEffects)
            .classification == Classification::NotUnanimous);
}

TEST_CASE("classify_directions rule table") {
  using D = Direction;
  const std::vector<D> pos2{D::Positive, D::Positive};
  CHECK(classify_directions(pos2, D::NotSignificant) ==
        Classification::Paradox);
  CHECK(classify_directions(pos2, D::Positive) == Classification::NoParadox);
  const std::vector<D> neg3{D::Negative, D::Negative, D::Negative};
  CHECK(classify_directions(neg3, D::NotSignificant) ==
        Classification::Paradox);
  const std::vector<D> mixed{D::Positive, D::Negative};
  CHECK(classify_directions(mixed, D::NotSignificant) ==
        Classification::NotUnanimous);
  const std::vector<D> insig{D::Positive, D::NotSignificant};
  CHECK(classify_directions(insig, D::Positive) ==
        Classification::NotUnanimous);
}

TEST_CASE("fixed-effect model never yields a paradox") {
  std::mt19937_64 rng(987654);
  int unanimous_seen = 0;
  while (unanimous_seen < 20000) {
    const auto studies = biased_random_studies(rng);
    if (!unanimous(studies, Probability(0.05))) continue;
    ++unanimous_seen;
    const ParadoxVerdict fe =
        detect_paradox(studies, Probability(0.05), Model::FixedEffect);
    REQUIRE(fe.classification == Classification::NoParadox);
  }
}

TEST_CASE("negating every effect flips directions and keeps the class") {
  std::mt19937_64 rng(555);
  for (int rep = 0; rep < 500; ++rep) {
    const auto studies = biased_random_studies(rng);
    auto negated = studies;
    for (StudyEffect& s : negated) s.y = -s.y;
    for (const Model model : {Model::FixedEffect, Model::RandomEffects}) {
      const ParadoxVerdict a =
          detect_paradox(studies, Probability(0.05), model);
      const ParadoxVerdict b =
          detect_paradox(negated, Probability(0.05), model);
      CHECK(a.classification == b.classification);
      for (std::size_t i = 0; i < a.study_directions.size(); ++i) {
        switch (a.study_directions[i]) {
          case Direction::Positive:
            CHECK(b.study_directions[i] == Direction::Negative);
            break;
          case Direction::Negative:
            CHECK(b.study_directions[i] == Direction::Positive);
            break;
          case Direction::NotSignificant:
            CHECK(b.study_directions[i] == Direction::NotSignificant);
            break;
        }
      }
    }
  }
}

TEST_CASE("per-study significance is monotone in alpha") {
  std::mt19937_64 rng(321);
  const double alphas[] = {0.001, 0.005, 0.01, 0.05, 0.1, 0.2, 0.4};
  for (int rep = 0; rep < 300; ++rep) {
    const auto studies = biased_random_studies(rng);
    for (const StudyEffect& s : studies) {
      bool significant_before = false;
      for (const double a : alphas) {
        const bool significant =
            study_direction(s, Probability(a)) != Direction::NotSignificant;
        // once significant at a smaller alpha, stays significant at larger
        if (significant_before) CHECK(significant);
        significant_before = significant;
      }
    }
    // classification stays within the reachable set along the grid
    for (const double a : alphas) {
      const Classification c =
          detect_paradox(studies, Probability(a), Model::RandomEffects)
              .classification;
      CHECK((c == Classification::Paradox || c == Classification::NoParadox ||
             c == Classification::NotUnanimous));
    }
  }
}

TEST_CASE("odds-ratio detection equals detection on the log values") {
  std::mt19937_64 rng(42424242);
  for (int rep = 0; rep < 300; ++rep) {
    auto md = biased_random_studies(rng);
    auto orr = md;
    for (StudyEffect& s : orr) s.measure = EffectMeasure::OddsRatio;
    for (const Model model : {Model::FixedEffect, Model::RandomEffects}) {
      const ParadoxVerdict a = detect_paradox(md, Probability(0.05), model);
      const ParadoxVerdict b = detect_paradox(orr, Probability(0.05), model);
      CHECK(a.classification == b.classification);
      CHECK(a.pooled_direction == b.pooled_direction);
    }
  }
}

TEST_CASE("name helpers") {
  CHECK(direction_name(Direction::Positive) == "Positive");
  CHECK(classification_name(Classification::NotUnanimous) == "NotUnanimous");
}
