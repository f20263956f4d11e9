#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "metaparadox/effects.hpp"

namespace metaparadox {

// Malformed input; the message names the offending row and field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StudyFileFormat { Csv, Json };

// CSV schema, header required:
//   label,measure,input_kind,...
// with measure MD|OR and per-kind trailing fields
//   point:  y,se
//   ci:     lo,hi[,level]
//   arms:   n1,mean1,sd1,n2,mean2,sd2
//   counts: a,b,c,d
// JSON: array of objects carrying the same field names. default_level
// applies to ci rows that omit an explicit level.
std::vector<StudyEffect> parse_studies(std::string_view text,
                                       StudyFileFormat format,
                                       Probability default_level =
                                           Probability(0.95));

// Reads a study file; .json selects the JSON parser, anything else CSV.
std::vector<StudyEffect> load_studies(const std::filesystem::path& path,
                                      Probability default_level =
                                          Probability(0.95));

std::string read_file(const std::filesystem::path& path);  // throws IoError

}  // namespace metaparadox
