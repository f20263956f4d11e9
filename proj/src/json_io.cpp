#include "metaparadox/json_io.hpp"

#include <charconv>

#include "metaparadox/ingest.hpp"

namespace metaparadox {

namespace {

using nlohmann::json;

// Shortest round-trip decimal form; locale independent.
std::string dtoa(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

json interval_to_json(const ConfidenceInterval& ci) {
  return json{{"lo", ci.lo}, {"hi", ci.hi}, {"level", ci.level.value()}};
}

Model model_from_string(const std::string& tag) {
  if (tag == "fe" || tag == "FixedEffect") return Model::FixedEffect;
  if (tag == "re" || tag == "RandomEffects") return Model::RandomEffects;
  throw ParseError("unknown model '" + tag +
                   "' (expected fe, re, FixedEffect, or RandomEffects)");
}

std::string model_name(Model model) {
  return model == Model::FixedEffect ? "FixedEffect" : "RandomEffects";
}

json result_to_json(const SimulationResult& r) {
  return json{{"accepted", r.accepted},
              {"paradoxes", r.paradoxes},
              {"draws_used", r.draws_used},
              {"p_hat", r.p_hat},
              {"wilson_lo", r.wilson_ci.lo},
              {"wilson_hi", r.wilson_ci.hi}};
}

}  // namespace

json pooled_result_to_json(const PooledResult& result, EffectMeasure measure,
                           std::span<const std::string> labels) {
  const DisplayEffect display = to_display_scale(result, measure);
  json weights = json::array();
  for (double w : result.weights) weights.push_back(w);
  json out{
      {"schema", kSchemaTag},
      {"model", model_name(result.model)},
      {"measure", measure_tag(measure)},
      {"level", result.level.value()},
      {"estimate", result.estimate},
      {"se", result.se},
      {"ci", interval_to_json(result.ci)},
      {"display", json{{"estimate", display.estimate},
                       {"ci", interval_to_json(display.ci)}}},
      {"weights", std::move(weights)},
      {"heterogeneity", json{{"q", result.het.q},
                             {"df", result.het.df},
                             {"tau2", result.het.tau2},
                             {"i2", result.het.i2},
                             {"p_q", result.het.p_q.value()}}},
  };
  if (!labels.empty()) {
    out["labels"] = json(std::vector<std::string>(labels.begin(), labels.end()));
  }
  return out;
}

json verdict_to_json(const ParadoxVerdict& verdict,
                     std::span<const std::string> labels) {
  json directions = json::array();
  for (Direction d : verdict.study_directions) {
    directions.push_back(std::string(direction_name(d)));
  }
  json out{
      {"schema", kSchemaTag},
      {"classification", std::string(classification_name(verdict.classification))},
      {"model", model_name(verdict.model)},
      {"alpha", verdict.alpha.value()},
      {"study_directions", std::move(directions)},
      {"pooled_direction", std::string(direction_name(verdict.pooled_direction))},
  };
  if (!labels.empty()) {
    out["labels"] = json(std::vector<std::string>(labels.begin(), labels.end()));
  }
  return out;
}

json grid_to_json(std::span<const GridCell> cells,
                  const SimulationScenario& base) {
  json cell_array = json::array();
  for (const GridCell& cell : cells) {
    json c{{"k", cell.k}, {"tau2", cell.tau2}};
    if (cell.result) {
      c.update(result_to_json(*cell.result));
    } else {
      c["error"] = cell.error;
    }
    cell_array.push_back(std::move(c));
  }
  return json{
      {"schema", kSchemaTag},
      {"scenario", json{{"mu", base.mu},
                        {"alpha", base.alpha.value()},
                        {"model", model_name(base.model)},
                        {"n_target", base.n_target},
                        {"max_draws", base.max_draws},
                        {"seed", base.seed},
                        {"base_variances", base.variances},
                        {"variance_policy", "cycle"}}},
      {"cells", std::move(cell_array)},
  };
}

std::string grid_to_csv(std::span<const GridCell> cells) {
  std::string out =
      "k,tau2,accepted,paradoxes,p_hat,wilson_lo,wilson_hi,draws_used\n";
  for (const GridCell& cell : cells) {
    out += std::to_string(cell.k);
    out += ',';
    out += dtoa(cell.tau2);
    out += ',';
    if (cell.result) {
      const SimulationResult& r = *cell.result;
      out += std::to_string(r.accepted);
      out += ',';
      out += std::to_string(r.paradoxes);
      out += ',';
      out += dtoa(r.p_hat);
      out += ',';
      out += dtoa(r.wilson_ci.lo);
      out += ',';
      out += dtoa(r.wilson_ci.hi);
      out += ',';
      out += std::to_string(r.draws_used);
    } else {
      out += "0,0,,,,0";
    }
    out += '\n';
  }
  return out;
}

SimulationScenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw ParseError("scenario must be a JSON object");
  }
  SimulationScenario s;
  try {
    if (!doc.contains("variances") || !doc.at("variances").is_array() ||
        doc.at("variances").empty()) {
      throw ParseError("scenario requires a nonempty 'variances' array");
    }
    s.variances = doc.at("variances").get<std::vector<double>>();
    s.k = doc.value("k", s.variances.size());
    if (!doc.contains("mu") || !doc.at("mu").is_number()) {
      throw ParseError("scenario requires numeric 'mu'");
    }
    s.mu = doc.at("mu").get<double>();
    if (!doc.contains("tau2") || !doc.at("tau2").is_number()) {
      throw ParseError("scenario requires numeric 'tau2'");
    }
    s.tau2 = doc.at("tau2").get<double>();
    s.alpha = Probability(doc.value("alpha", 0.05));
    s.model = model_from_string(doc.value("model", std::string("re")));
    s.n_target = doc.value("n_target", std::size_t{10000});
    s.max_draws = doc.value("max_draws", std::size_t{10000000});
    s.seed = doc.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad scenario: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ParseError(std::string("bad scenario: ") + e.what());
  }
  try {
    validate_scenario(s);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad scenario: ") + e.what());
  }
  return s;
}

SimulationScenario load_scenario(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid scenario JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace metaparadox
