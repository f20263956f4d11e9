#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "metaparadox/paradox.hpp"
#include "metaparadox/pooling.hpp"
#include "metaparadox/simulate.hpp"

namespace metaparadox {

inline constexpr std::string_view kSchemaTag = "metaparadox/v1";

nlohmann::json pooled_result_to_json(const PooledResult& result,
                                     EffectMeasure measure,
                                     std::span<const std::string> labels);

nlohmann::json verdict_to_json(const ParadoxVerdict& verdict,
                               std::span<const std::string> labels);

nlohmann::json grid_to_json(std::span<const GridCell> cells,
                            const SimulationScenario& base);

// One row per cell: k,tau2,accepted,paradoxes,p_hat,wilson_lo,wilson_hi,
// draws_used. Errored cells leave the estimate columns empty.
std::string grid_to_csv(std::span<const GridCell> cells);

SimulationScenario scenario_from_json(const nlohmann::json& doc);
SimulationScenario load_scenario(const std::filesystem::path& path);

}  // namespace metaparadox
