// metaparadox: pools study effects under fixed- and random-effects models,
// audits datasets for the unanimous-significance reversal, renders forest
// plots, and estimates the reversal probability by simulation.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metaparadox/forest.hpp"
#include "metaparadox/ingest.hpp"
#include "metaparadox/json_io.hpp"
#include "metaparadox/paradox.hpp"
#include "metaparadox/pooling.hpp"
#include "metaparadox/simulate.hpp"
#include "metaparadox/version.hpp"

namespace {

using namespace metaparadox;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitParadox = 3;

Model model_from_flag(const std::string& flag) {
  if (flag == "fe") return Model::FixedEffect;
  if (flag == "re") return Model::RandomEffects;
  throw std::invalid_argument("unknown model '" + flag + "' (use fe or re)");
}

std::vector<std::string> labels_of(const std::vector<StudyEffect>& studies) {
  std::vector<std::string> labels;
  labels.reserve(studies.size());
  for (const StudyEffect& s : studies) labels.push_back(s.label);
  return labels;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + out_path + "' for writing");
  }
  out << text;
  if (!out) {
    throw IoError("failed writing '" + out_path + "'");
  }
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("METAPARADOX_SEED");
  if (env == nullptr) return fallback;
  std::uint64_t seed = 0;
  const char* end = env + std::string_view(env).size();
  const auto [ptr, ec] = std::from_chars(env, end, seed);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument(
        "METAPARADOX_SEED must be an unsigned integer");
  }
  return seed;
}

int run(int argc, char** argv) {
  CLI::App app{"meta-analysis pooling and significance-reversal auditor"};
  app.set_version_flag("--version",
                       std::string("metaparadox ") + kVersion);
  app.require_subcommand(1);

  std::string file;
  std::string model_flag = "re";
  double level = 0.95;
  double alpha = 0.05;
  double input_level = 0.95;
  std::string format;
  std::string out_path;
  unsigned threads = 1;
  std::size_t text_width = 100;
  std::size_t svg_width = 720;
  std::vector<std::size_t> grid_k;
  std::vector<double> grid_tau2;

  CLI::App* pool = app.add_subcommand("pool", "pool a study file, print JSON");
  pool->add_option("file", file, "study file (.csv or .json)")->required();
  pool->add_option("--model", model_flag, "fe or re")->default_val("re");
  pool->add_option("--level", level, "pooled CI level")->default_val(0.95);
  pool->add_option("--input-level", input_level,
                   "level assumed for ci rows without one")
      ->default_val(0.95);

  CLI::App* detect = app.add_subcommand(
      "detect", "audit a study file; exit 3 when the reversal is present");
  detect->add_option("file", file, "study file (.csv or .json)")->required();
  detect->add_option("--alpha", alpha, "two-sided significance level")
      ->default_val(0.05);
  detect->add_option("--model", model_flag, "fe or re")->default_val("re");
  detect->add_option("--input-level", input_level,
                     "level assumed for ci rows without one")
      ->default_val(0.95);

  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo reversal probability");
  simulate->add_option("scenario", file, "scenario JSON file")->required();
  simulate->add_option("--grid-k", grid_k, "sweep these study counts");
  simulate->add_option("--grid-tau2", grid_tau2,
                       "sweep these between-study variances");
  simulate->add_option("--format", format, "json or csv")->default_val("json");
  simulate->add_option("--out", out_path, "write to file instead of stdout");
  simulate->add_option("--threads", threads, "worker threads (0 = hardware)")
      ->default_val(1);

  CLI::App* forest = app.add_subcommand("forest", "render a forest plot");
  forest->add_option("file", file, "study file (.csv or .json)")->required();
  forest->add_option("--format", format, "text or svg")->default_val("text");
  forest->add_option("--model", model_flag, "fe or re")->default_val("re");
  forest->add_option("--level", level, "CI level")->default_val(0.95);
  forest->add_option("--input-level", input_level,
                     "level assumed for ci rows without one")
      ->default_val(0.95);
  forest->add_option("--width", text_width, "text width in columns")
      ->default_val(100);
  forest->add_option("--svg-width", svg_width, "svg width in pixels")
      ->default_val(720);
  forest->add_option("--out", out_path, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (pool->parsed()) {
    const auto studies = load_studies(file, Probability(input_level));
    const PooledResult result = meta_analyze(
        studies, Probability(level), model_from_flag(model_flag));
    const auto labels = labels_of(studies);
    std::cout << pooled_result_to_json(result, studies.front().measure, labels)
                     .dump(2)
              << "\n";
    return kExitOk;
  }

  if (detect->parsed()) {
    const auto studies = load_studies(file, Probability(input_level));
    const ParadoxVerdict verdict = detect_paradox(
        studies, Probability(alpha), model_from_flag(model_flag));
    const auto labels = labels_of(studies);
    std::cout << verdict_to_json(verdict, labels).dump(2) << "\n";
    return verdict.classification == Classification::Paradox ? kExitParadox
                                                             : kExitOk;
  }

  if (simulate->parsed()) {
    if (format != "json" && format != "csv") {
      throw std::invalid_argument("--format must be json or csv");
    }
    SimulationScenario scenario = load_scenario(file);
    scenario.seed = seed_from_env(scenario.seed);
    std::vector<std::size_t> ks = grid_k;
    std::vector<double> tau2s = grid_tau2;
    if (ks.empty()) ks.push_back(scenario.k);
    if (tau2s.empty()) tau2s.push_back(scenario.tau2);
    const std::vector<GridCell> cells =
        sweep_grid(scenario, ks, tau2s, threads);
    const std::string text = format == "csv"
                                 ? grid_to_csv(cells)
                                 : grid_to_json(cells, scenario).dump(2) + "\n";
    write_output(text, out_path);
    return kExitOk;
  }

  // forest
  if (format != "text" && format != "svg") {
    throw std::invalid_argument("--format must be text or svg");
  }
  const auto studies = load_studies(file, Probability(input_level));
  const PooledResult result =
      meta_analyze(studies, Probability(level), model_from_flag(model_flag));
  const EffectMeasure measure = studies.front().measure;
  const std::vector<ForestRow> rows =
      make_forest_rows(studies, result, measure);
  std::string text;
  if (format == "svg") {
    text = render_forest_svg(rows, SvgForestOptions{svg_width, measure});
  } else {
    text = render_forest_text(rows, TextForestOptions{text_width, measure});
  }
  write_output(text, out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const IoError& e) {
    std::cerr << "metaparadox: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "metaparadox: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "metaparadox: " << e.what() << "\n";
    return kExitUsage;
  }
}
