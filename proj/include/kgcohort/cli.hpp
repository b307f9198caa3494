#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kgcohort/rational.hpp"

namespace kgcohort::cli {

/// Effective configuration of one run. Precedence: built-in defaults, then
/// the JSON config file, then command-line flags.
struct RunConfig {
  // paths
  std::string dictionary;
  std::string corpus;
  std::string exclusions;
  std::string annotations;
  std::string out = "out";
  std::string matches;  // default <out>/matches.jsonl
  std::string graph;    // default <out>/graph.csv
  std::string backbone; // default <out>/backbone.csv
  std::string cohort;   // default <out>/cohort.csv
  std::string profile;
  std::string synth_out;  // default <out>/synth_corpus.jsonl

  // thresholds and filters
  std::uint64_t min_cooccur = 3;
  std::uint64_t min_support = 10;
  std::string lenient = "0.25";
  std::string aggressive = "0.75";
  std::uint64_t min_unique_terms = 2;

  std::vector<std::string> seed_terms;
  std::uint64_t window = 1;
  bool strict = false;
  std::string min_time;
  std::string max_time;
  std::vector<std::string> formats;  // extra graph exports: graphml, json
  std::string run_name = "run";
  bool float_weights = false;

  // ego
  std::string term;
  bool backbone_only = false;

  // execution only; never affects output bytes and is left out of manifests
  unsigned workers = 1;

  nlohmann::ordered_json to_json() const;
};

/// Runs the command line; returns the process exit status. Module errors
/// print one JSON line `{"error": <category>, "message": ...}` to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

/// "a/b", an integer, or a decimal such as "0.25", as an exact rational.
Rational parse_fraction(std::string_view text);

}  // namespace kgcohort::cli
