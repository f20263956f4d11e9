#include "metaparadox/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "metaparadox/rng.hpp"

namespace metaparadox {

namespace {

constexpr std::size_t kBlockSize = 32768;

enum class Outcome : std::uint8_t { NotAccepted = 0, NoParadox = 1, Paradox = 2 };

// Draw order per study is (theta_i, noise_i); part of the reproducibility
// contract for a given (seed, replicate_index).
void draw_studies(const SimulationScenario& scenario,
                  std::uint64_t replicate_index,
                  std::vector<StudyEffect>& out) {
  ReplicateRng rng(scenario.seed, replicate_index);
  const double tau = std::sqrt(scenario.tau2);
  out.clear();
  for (double v : scenario.variances) {
    const double theta = scenario.mu + tau * rng.next_normal();
    const double y = theta + std::sqrt(v) * rng.next_normal();
    out.push_back(StudyEffect{{}, y, v, EffectMeasure::MeanDifference});
  }
}

Outcome run_replicate(const SimulationScenario& scenario,
                      std::uint64_t replicate_index,
                      std::vector<StudyEffect>& scratch) {
  draw_studies(scenario, replicate_index, scratch);
  const ParadoxVerdict verdict =
      detect_paradox(scratch, scenario.alpha, scenario.model);
  switch (verdict.classification) {
    case Classification::NotUnanimous:
      return Outcome::NotAccepted;
    case Classification::Paradox:
      return Outcome::Paradox;
    case Classification::NoParadox:
      return Outcome::NoParadox;
  }
  return Outcome::NotAccepted;
}

void fill_block(const SimulationScenario& scenario, std::uint64_t first_index,
                std::span<Outcome> outcomes, unsigned threads) {
  if (threads <= 1 || outcomes.size() < 2 * threads) {
    std::vector<StudyEffect> scratch;
    scratch.reserve(scenario.k);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      outcomes[i] = run_replicate(scenario, first_index + i, scratch);
    }
    return;
  }
  const std::size_t per_thread = (outcomes.size() + threads - 1) / threads;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin =
        std::min<std::size_t>(t * per_thread, outcomes.size());
    const std::size_t end =
        std::min<std::size_t>(begin + per_thread, outcomes.size());
    if (begin == end) break;
    workers.emplace_back([&scenario, first_index, outcomes, begin, end] {
      std::vector<StudyEffect> scratch;
      scratch.reserve(scenario.k);
      for (std::size_t i = begin; i < end; ++i) {
        outcomes[i] = run_replicate(scenario, first_index + i, scratch);
      }
    });
  }
  for (std::thread& w : workers) w.join();
}

}  // namespace

NoAcceptedReplicates::NoAcceptedReplicates(std::size_t draws)
    : std::runtime_error("no accepted replicates in " + std::to_string(draws) +
                         " draws"),
      draws_used(draws) {}

void validate_scenario(const SimulationScenario& scenario) {
  if (scenario.k < 2) {
    throw std::invalid_argument("scenario needs k >= 2 studies");
  }
  if (scenario.k != scenario.variances.size()) {
    throw std::invalid_argument("scenario k must match variances length");
  }
  if (!std::isfinite(scenario.mu)) {
    throw std::invalid_argument("scenario mu must be finite");
  }
  if (!std::isfinite(scenario.tau2) || scenario.tau2 < 0.0) {
    throw std::invalid_argument("scenario tau2 must be >= 0");
  }
  for (double v : scenario.variances) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw std::invalid_argument("within-study variances must be > 0");
    }
  }
  const double a = scenario.alpha.value();
  if (a <= 0.0 || a >= 1.0) {
    throw std::invalid_argument("scenario alpha must lie strictly in (0,1)");
  }
  if (scenario.n_target < 1) {
    throw std::invalid_argument("scenario n_target must be >= 1");
  }
  if (scenario.max_draws < scenario.n_target) {
    throw std::invalid_argument("scenario max_draws must be >= n_target");
  }
}

std::optional<ParadoxVerdict> simulate_replicate(
    const SimulationScenario& scenario, std::uint64_t replicate_index) {
  validate_scenario(scenario);
  std::vector<StudyEffect> studies;
  studies.reserve(scenario.k);
  draw_studies(scenario, replicate_index, studies);
  for (std::size_t i = 0; i < studies.size(); ++i) {
    studies[i].label = "sim" + std::to_string(i);
  }
  ParadoxVerdict verdict =
      detect_paradox(studies, scenario.alpha, scenario.model);
  if (verdict.classification == Classification::NotUnanimous) {
    return std::nullopt;
  }
  return verdict;
}

SimulationResult simulate_scenario(const SimulationScenario& scenario,
                                   unsigned threads) {
  validate_scenario(scenario);
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }

  std::size_t accepted = 0;
  std::size_t paradoxes = 0;
  std::size_t draws_used = 0;
  std::vector<Outcome> outcomes;

  while (draws_used < scenario.max_draws && accepted < scenario.n_target) {
    const std::size_t block =
        std::min(kBlockSize, scenario.max_draws - draws_used);
    outcomes.assign(block, Outcome::NotAccepted);
    fill_block(scenario, draws_used, outcomes, threads);
    // Serial scan in index order keeps the stopping point well defined
    // regardless of how the block was filled.
    for (std::size_t i = 0; i < block; ++i) {
      ++draws_used;
      if (outcomes[i] != Outcome::NotAccepted) {
        ++accepted;
        if (outcomes[i] == Outcome::Paradox) ++paradoxes;
        if (accepted == scenario.n_target) break;
      }
    }
  }

  if (accepted == 0) {
    throw NoAcceptedReplicates(draws_used);
  }
  const double p_hat =
      static_cast<double>(paradoxes) / static_cast<double>(accepted);
  return SimulationResult{accepted, paradoxes, draws_used, p_hat,
                          wilson_ci(paradoxes, accepted, Probability(0.95))};
}

std::vector<GridCell> sweep_grid(const SimulationScenario& base,
                                 std::span<const std::size_t> k_values,
                                 std::span<const double> tau2_values,
                                 unsigned threads) {
  if (k_values.empty() || tau2_values.empty()) {
    throw std::invalid_argument("sweep_grid needs nonempty k and tau2 grids");
  }
  validate_scenario(base);
  std::vector<GridCell> cells;
  cells.reserve(k_values.size() * tau2_values.size());
  for (const std::size_t k : k_values) {
    for (const double tau2 : tau2_values) {
      SimulationScenario cell = base;
      cell.k = k;
      cell.tau2 = tau2;
      cell.variances.resize(k);
      for (std::size_t i = 0; i < k; ++i) {
        cell.variances[i] = base.variances[i % base.variances.size()];
      }
      GridCell out{k, tau2, std::nullopt, {}};
      try {
        out.result = simulate_scenario(cell, threads);
      } catch (const std::exception& e) {
        out.error = e.what();
      }
      cells.push_back(std::move(out));
    }
  }
  return cells;
}

ConfidenceInterval wilson_ci(std::size_t successes, std::size_t trials,
                             Probability level) {
  if (trials == 0) {
    throw std::domain_error("wilson_ci: trials must be >= 1");
  }
  if (successes > trials) {
    throw std::domain_error("wilson_ci: successes must be <= trials");
  }
  const double z = two_sided_z(level);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  double lo = center - half;
  double hi = center + half;
  // The score interval lies in [0,1] analytically; clamp rounding residue so
  // degenerate p_hat = 0 or 1 pins the matching endpoint exactly.
  lo = std::clamp(lo, 0.0, 1.0);
  hi = std::clamp(hi, 0.0, 1.0);
  if (successes == 0) lo = 0.0;
  if (successes == trials) hi = 1.0;
  return ConfidenceInterval(lo, hi, level);
}

}  // namespace metaparadox
