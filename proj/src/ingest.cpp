#include "metaparadox/ingest.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace metaparadox {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail(std::size_t row, const std::string& message) {
  throw ParseError("row " + std::to_string(row) + ": " + message);
}

double parse_number(const std::string& field, std::size_t row,
                    std::string_view name) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    fail(row, std::string(name) + " must be numeric, got '" + field + "'");
  }
  return value;
}

std::uint64_t parse_count(const std::string& field, std::size_t row,
                          std::string_view name) {
  std::uint64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    fail(row, std::string(name) + " must be a nonnegative integer, got '" +
                  field + "'");
  }
  return value;
}

EffectMeasure parse_measure(const std::string& tag, std::size_t row) {
  if (tag == "MD") return EffectMeasure::MeanDifference;
  if (tag == "OR") return EffectMeasure::OddsRatio;
  fail(row, "unknown measure '" + tag + "' (expected MD or OR)");
}

// Wraps constructor domain errors so diagnostics keep the row number.
template <typename Fn>
StudyEffect guarded(std::size_t row, Fn&& fn) {
  try {
    return fn();
  } catch (const std::domain_error& e) {
    fail(row, e.what());
  }
}

StudyEffect study_from_csv_row(const std::vector<std::string>& fields,
                               std::size_t row, Probability default_level) {
  const std::string& label = fields[0];
  const EffectMeasure measure = parse_measure(fields[1], row);
  const std::string& kind = fields[2];
  const std::size_t extra = fields.size() - 3;

  if (kind == "point") {
    if (extra != 2) fail(row, "input_kind 'point' expects fields y,se");
    const double y = parse_number(fields[3], row, "y");
    const double se = parse_number(fields[4], row, "se");
    return guarded(row,
                   [&] { return study_from_estimate_se(label, y, se, measure); });
  }
  if (kind == "ci") {
    if (extra != 2 && extra != 3) {
      fail(row, "input_kind 'ci' expects fields lo,hi[,level]");
    }
    const double lo = parse_number(fields[3], row, "lo");
    const double hi = parse_number(fields[4], row, "hi");
    const double level = extra == 3
                             ? parse_number(fields[5], row, "level")
                             : default_level.value();
    return guarded(row, [&] {
      return study_from_ci(label,
                           ConfidenceInterval(lo, hi, Probability(level)),
                           measure);
    });
  }
  if (kind == "arms") {
    if (measure != EffectMeasure::MeanDifference) {
      fail(row, "input_kind 'arms' requires measure MD");
    }
    if (extra != 6) {
      fail(row, "input_kind 'arms' expects fields n1,mean1,sd1,n2,mean2,sd2");
    }
    const std::uint64_t n1 = parse_count(fields[3], row, "n1");
    const double mean1 = parse_number(fields[4], row, "mean1");
    const double sd1 = parse_number(fields[5], row, "sd1");
    const std::uint64_t n2 = parse_count(fields[6], row, "n2");
    const double mean2 = parse_number(fields[7], row, "mean2");
    const double sd2 = parse_number(fields[8], row, "sd2");
    return guarded(row, [&] {
      return study_from_two_arm_continuous(label, n1, mean1, sd1, n2, mean2,
                                           sd2);
    });
  }
  if (kind == "counts") {
    if (measure != EffectMeasure::OddsRatio) {
      fail(row, "input_kind 'counts' requires measure OR");
    }
    if (extra != 4) fail(row, "input_kind 'counts' expects fields a,b,c,d");
    const std::uint64_t a = parse_count(fields[3], row, "a");
    const std::uint64_t b = parse_count(fields[4], row, "b");
    const std::uint64_t c = parse_count(fields[5], row, "c");
    const std::uint64_t d = parse_count(fields[6], row, "d");
    return guarded(row, [&] { return study_from_2x2(label, a, b, c, d); });
  }
  fail(row, "unknown input_kind '" + kind +
                "' (expected point, ci, arms, or counts)");
}

std::vector<StudyEffect> parse_csv(std::string_view text,
                                   Probability default_level) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<StudyEffect> studies;
  std::istringstream stream{std::string(text)};
  std::string line;
  std::size_t row = 0;
  bool saw_header = false;
  while (std::getline(stream, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (!saw_header) {
      if (fields.size() < 3 || fields[0] != "label" || fields[1] != "measure" ||
          fields[2] != "input_kind") {
        fail(row, "header must start with label,measure,input_kind");
      }
      saw_header = true;
      continue;
    }
    if (fields.size() < 3) {
      fail(row, "expected at least label,measure,input_kind");
    }
    studies.push_back(study_from_csv_row(fields, row, default_level));
  }
  if (!saw_header) {
    throw ParseError("missing header row (label,measure,input_kind,...)");
  }
  return studies;
}

double json_number(const json& obj, const char* key, std::size_t row) {
  const json& v = obj.at(key);
  if (!v.is_number()) {
    fail(row, std::string(key) + " must be numeric");
  }
  return v.get<double>();
}

std::uint64_t json_count(const json& obj, const char* key, std::size_t row) {
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    fail(row, std::string(key) + " must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

const std::vector<std::string>& kind_fields(const std::string& kind,
                                            std::size_t row) {
  static const std::vector<std::string> point{"y", "se"};
  static const std::vector<std::string> ci{"lo", "hi", "level"};
  static const std::vector<std::string> arms{"n1", "mean1", "sd1",
                                             "n2", "mean2", "sd2"};
  static const std::vector<std::string> counts{"a", "b", "c", "d"};
  if (kind == "point") return point;
  if (kind == "ci") return ci;
  if (kind == "arms") return arms;
  if (kind == "counts") return counts;
  fail(row, "unknown input_kind '" + kind +
                "' (expected point, ci, arms, or counts)");
}

StudyEffect study_from_json_object(const json& obj, std::size_t row,
                                   Probability default_level) {
  if (!obj.is_object()) fail(row, "expected a JSON object");
  if (!obj.contains("label") || !obj.at("label").is_string()) {
    fail(row, "label must be a string");
  }
  if (!obj.contains("measure") || !obj.at("measure").is_string()) {
    fail(row, "measure must be a string");
  }
  if (!obj.contains("input_kind") || !obj.at("input_kind").is_string()) {
    fail(row, "input_kind must be a string");
  }
  const std::string label = obj.at("label").get<std::string>();
  const EffectMeasure measure =
      parse_measure(obj.at("measure").get<std::string>(), row);
  const std::string kind = obj.at("input_kind").get<std::string>();
  const std::vector<std::string>& allowed = kind_fields(kind, row);

  for (const auto& [key, value] : obj.items()) {
    if (key == "label" || key == "measure" || key == "input_kind") continue;
    bool known = false;
    for (const std::string& f : allowed) known = known || key == f;
    if (!known) {
      fail(row, "field '" + key + "' conflicts with input_kind '" + kind + "'");
    }
  }
  for (const std::string& f : allowed) {
    if (f == "level") continue;  // optional for ci
    if (!obj.contains(f)) {
      fail(row, "input_kind '" + kind + "' requires field '" + f + "'");
    }
  }

  if (kind == "point") {
    const double y = json_number(obj, "y", row);
    const double se = json_number(obj, "se", row);
    return guarded(row,
                   [&] { return study_from_estimate_se(label, y, se, measure); });
  }
  if (kind == "ci") {
    const double lo = json_number(obj, "lo", row);
    const double hi = json_number(obj, "hi", row);
    const double level = obj.contains("level")
                             ? json_number(obj, "level", row)
                             : default_level.value();
    return guarded(row, [&] {
      return study_from_ci(label,
                           ConfidenceInterval(lo, hi, Probability(level)),
                           measure);
    });
  }
  if (kind == "arms") {
    if (measure != EffectMeasure::MeanDifference) {
      fail(row, "input_kind 'arms' requires measure MD");
    }
    return guarded(row, [&] {
      return study_from_two_arm_continuous(
          label, json_count(obj, "n1", row), json_number(obj, "mean1", row),
          json_number(obj, "sd1", row), json_count(obj, "n2", row),
          json_number(obj, "mean2", row), json_number(obj, "sd2", row));
    });
  }
  if (measure != EffectMeasure::OddsRatio) {
    fail(row, "input_kind 'counts' requires measure OR");
  }
  return guarded(row, [&] {
    return study_from_2x2(label, json_count(obj, "a", row),
                          json_count(obj, "b", row), json_count(obj, "c", row),
                          json_count(obj, "d", row));
  });
}

std::vector<StudyEffect> parse_json(std::string_view text,
                                    Probability default_level) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw ParseError("study JSON must be an array of objects");
  }
  std::vector<StudyEffect> studies;
  studies.reserve(doc.size());
  std::size_t row = 0;
  for (const json& obj : doc) {
    ++row;
    studies.push_back(study_from_json_object(obj, row, default_level));
  }
  return studies;
}

}  // namespace

std::vector<StudyEffect> parse_studies(std::string_view text,
                                       StudyFileFormat format,
                                       Probability default_level) {
  return format == StudyFileFormat::Csv ? parse_csv(text, default_level)
                                        : parse_json(text, default_level);
}

std::vector<StudyEffect> load_studies(const std::filesystem::path& path,
                                      Probability default_level) {
  const StudyFileFormat format = path.extension() == ".json"
                                     ? StudyFileFormat::Json
                                     : StudyFileFormat::Csv;
  return parse_studies(read_file(path), format, default_level);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("failed reading '" + path.string() + "'");
  }
  return std::move(buffer).str();
}

}  // namespace metaparadox
