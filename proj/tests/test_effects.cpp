#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "metaparadox/effects.hpp"
#include "metaparadox/pooling.hpp"

using namespace metaparadox;

TEST_CASE("study_from_estimate_se squares the se") {
  const StudyEffect a = study_from_estimate_se("A", 0.45, 0.13265,
                                               EffectMeasure::MeanDifference);
  CHECK(a.y == 0.45);
  CHECK(a.v == doctest::Approx(0.017596).epsilon(1e-4));

  const StudyEffect b =
      study_from_estimate_se("B", 0.0, 1.0, EffectMeasure::MeanDifference);
  CHECK(b.y == 0.0);
  CHECK(b.v == 1.0);

  const StudyEffect c =
      study_from_estimate_se("C", 0.61, 0.2355, EffectMeasure::OddsRatio);
  CHECK(c.v == doctest::Approx(0.055460).epsilon(1e-4));

  CHECK_THROWS_AS(
      study_from_estimate_se("D", 1.0, 0.0, EffectMeasure::MeanDifference),
      std::domain_error);
  CHECK_THROWS_AS(
      study_from_estimate_se("D", 1.0, -0.5, EffectMeasure::MeanDifference),
      std::domain_error);
}

TEST_CASE("study_from_ci back-calculates Wald inputs") {
  const StudyEffect md =
      study_from_ci("hs1", ConfidenceInterval(0.19, 0.71, Probability(0.95)),
                    EffectMeasure::MeanDifference);
  CHECK(md.y == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(std::sqrt(md.v) == doctest::Approx(0.13265).epsilon(1e-4));

  const StudyEffect orr =
      study_from_ci("hf1", ConfidenceInterval(1.04, 1.41, Probability(0.95)),
                    EffectMeasure::OddsRatio);
  CHECK(orr.y == doctest::Approx(0.19141).epsilon(1e-4));
  CHECK(std::sqrt(orr.v) == doctest::Approx(0.07765).epsilon(1e-3));

  const StudyEffect sym =
      study_from_ci("z", ConfidenceInterval(-1.0, 1.0, Probability(0.95)),
                    EffectMeasure::MeanDifference);
  CHECK(sym.y == 0.0);
  CHECK(std::sqrt(sym.v) == doctest::Approx(0.51021).epsilon(1e-4));
}

TEST_CASE("study_from_ci rejects bad intervals") {
  CHECK_THROWS_AS(ConfidenceInterval(1.0, 1.0, Probability(0.95)),
                  std::domain_error);
  CHECK_THROWS_AS(ConfidenceInterval(2.0, 1.0, Probability(0.95)),
                  std::domain_error);
  // odds-ratio intervals must be positive on the display scale
  CHECK_THROWS_AS(
      study_from_ci("x", ConfidenceInterval(-0.5, 2.0, Probability(0.95)),
                    EffectMeasure::OddsRatio),
      std::domain_error);
}

TEST_CASE("study_from_two_arm_continuous") {
  const StudyEffect a =
      study_from_two_arm_continuous("a", 100, 5.0, 2.0, 100, 4.0, 2.0);
  CHECK(a.y == 1.0);
  CHECK(a.v == doctest::Approx(0.08).epsilon(1e-14));
  CHECK(a.measure == EffectMeasure::MeanDifference);

  const StudyEffect b =
      study_from_two_arm_continuous("b", 10, 3.0, 1.0, 10, 3.0, 1.0);
  CHECK(b.y == 0.0);
  CHECK(b.v == doctest::Approx(0.2).epsilon(1e-14));

  const StudyEffect c =
      study_from_two_arm_continuous("c", 4, 2.0, 2.0, 16, 0.0, 4.0);
  CHECK(c.y == 2.0);
  CHECK(c.v == doctest::Approx(2.0).epsilon(1e-14));

  CHECK_THROWS_AS(study_from_two_arm_continuous("d", 1, 0, 1, 10, 0, 1),
                  std::domain_error);
  CHECK_THROWS_AS(study_from_two_arm_continuous("d", 5, 0, 0.0, 10, 0, 1),
                  std::domain_error);
}

TEST_CASE("study_from_2x2 with and without continuity correction") {
  const StudyEffect balanced = study_from_2x2("t", 10, 10, 10, 10);
  CHECK(balanced.y == 0.0);
  CHECK(balanced.v == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(balanced.measure == EffectMeasure::OddsRatio);

  const StudyEffect skewed = study_from_2x2("u", 20, 80, 10, 90);
  CHECK(skewed.y == doctest::Approx(std::log(2.25)).epsilon(1e-14));
  CHECK(skewed.v ==
        doctest::Approx(1.0 / 20 + 1.0 / 80 + 1.0 / 10 + 1.0 / 90)
            .epsilon(1e-14));

  // one zero cell corrects all four cells by 0.5
  const StudyEffect corrected = study_from_2x2("v", 5, 0, 5, 10);
  CHECK(corrected.y == doctest::Approx(std::log(21.0)).epsilon(1e-12));
  CHECK(corrected.v ==
        doctest::Approx(1 / 5.5 + 1 / 0.5 + 1 / 5.5 + 1 / 10.5)
            .epsilon(1e-14));

  CHECK_THROWS_AS(study_from_2x2("w", 0, 0, 5, 5), std::domain_error);
  CHECK_THROWS_AS(study_from_2x2("w", 5, 5, 0, 0), std::domain_error);
}

TEST_CASE("2x2 transposition flips the sign and keeps the variance") {
  std::mt19937_64 rng(20240811);
  std::uniform_int_distribution<std::uint64_t> cell(0, 40);
  for (int rep = 0; rep < 300; ++rep) {
    const std::uint64_t a = cell(rng), b = cell(rng), c = cell(rng),
                        d = cell(rng);
    if (a + b == 0 || c + d == 0) continue;
    const StudyEffect fwd = study_from_2x2("f", a, b, c, d);
    const StudyEffect rev = study_from_2x2("r", c, d, a, b);
    CHECK(fwd.y == doctest::Approx(-rev.y).epsilon(1e-12));
    CHECK(fwd.v == doctest::Approx(rev.v).epsilon(1e-12));
  }
}

TEST_CASE("ci_of then study_from_ci round-trips y and v") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uy(-5.0, 5.0);
  std::uniform_real_distribution<double> use(0.05, 3.0);
  std::uniform_real_distribution<double> ulevel(0.5, 0.99);
  for (int rep = 0; rep < 500; ++rep) {
    const double y = uy(rng);
    const double se = use(rng);
    const Probability level{ulevel(rng)};
    const ConfidenceInterval ci = ci_of(y, se, level);
    const StudyEffect back =
        study_from_ci("rt", ci, EffectMeasure::MeanDifference);
    CHECK(back.y == doctest::Approx(y).epsilon(1e-12));
    CHECK(back.v == doctest::Approx(se * se).epsilon(1e-12));
  }
  // and through the log transform
  for (int rep = 0; rep < 500; ++rep) {
    const double y = uy(rng) / 3.0;
    const double se = use(rng) / 4.0;
    const Probability level{ulevel(rng)};
    const ConfidenceInterval ci = ci_of(y, se, level);
    const ConfidenceInterval display(std::exp(ci.lo), std::exp(ci.hi),
                                     level);
    const StudyEffect back =
        study_from_ci("rt", display, EffectMeasure::OddsRatio);
    CHECK(back.y == doctest::Approx(y).epsilon(1e-10));
    CHECK(back.v == doctest::Approx(se * se).epsilon(1e-10));
  }
}

TEST_CASE("measure_tag names") {
  CHECK(measure_tag(EffectMeasure::MeanDifference) == "MD");
  CHECK(measure_tag(EffectMeasure::OddsRatio) == "OR");
}
