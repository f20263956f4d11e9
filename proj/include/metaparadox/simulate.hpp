#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "metaparadox/paradox.hpp"
#include "metaparadox/pooling.hpp"

namespace metaparadox {

// Monte Carlo configuration for the normal-normal hierarchy
// theta_i ~ N(mu, tau2), y_i ~ N(theta_i, v_i).
struct SimulationScenario {
  std::size_t k = 0;             // must equal variances.size()
  double mu = 0.0;               // true overall effect
  double tau2 = 0.0;             // true between-study variance
  std::vector<double> variances; // within-study variances
  Probability alpha{0.05};
  Model model = Model::RandomEffects;
  std::size_t n_target = 10000;  // accepted replicates wanted
  std::size_t max_draws = 10000000;
  std::uint64_t seed = 0;
};

void validate_scenario(const SimulationScenario& scenario);

// Estimate of the paradox probability conditional on unanimous same-direction
// significance, with a 95% Wilson interval.
struct SimulationResult {
  std::size_t accepted;
  std::size_t paradoxes;
  std::size_t draws_used;
  double p_hat;
  ConfidenceInterval wilson_ci;
};

class NoAcceptedReplicates : public std::runtime_error {
 public:
  explicit NoAcceptedReplicates(std::size_t draws);
  std::size_t draws_used;
};

// Draws one replicate dataset and runs detection. Returns the verdict only
// when the replicate is accepted (unanimous same-direction significance).
// Deterministic in (scenario.seed, replicate_index).
std::optional<ParadoxVerdict> simulate_replicate(
    const SimulationScenario& scenario, std::uint64_t replicate_index);

// Consumes replicate indices 0,1,2,... until n_target acceptances or
// max_draws. The result is a pure function of the scenario: thread count
// changes neither counts nor p_hat. threads = 0 picks the hardware count.
SimulationResult simulate_scenario(const SimulationScenario& scenario,
                                   unsigned threads = 1);

struct GridCell {
  std::size_t k;
  double tau2;
  std::optional<SimulationResult> result;  // empty on per-cell error
  std::string error;
};

// One simulate_scenario per (k, tau2) combination. Within-study variances
// cycle through the base scenario's list when k differs. Per-cell failures
// are recorded in the cell, not thrown.
std::vector<GridCell> sweep_grid(const SimulationScenario& base,
                                 std::span<const std::size_t> k_values,
                                 std::span<const double> tau2_values,
                                 unsigned threads = 1);

// Wilson score interval for a binomial proportion; contained in [0,1].
ConfidenceInterval wilson_ci(std::size_t successes, std::size_t trials,
                             Probability level);

}  // namespace metaparadox
