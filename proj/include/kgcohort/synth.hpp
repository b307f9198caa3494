#pragma once

#include <cstdint>
#include <iosfwd>

#include <json.hpp>

#include "kgcohort/corpus.hpp"
#include "kgcohort/dictionary.hpp"
#include "kgcohort/rational.hpp"

namespace kgcohort::synth {

/// Negative binomial count parameters. `dispersion` <= 0 means Poisson.
struct CountDistribution {
  double mean = 1.0;
  double dispersion = 0.0;
};

struct SynthProfile {
  std::uint64_t n_users = 200;
  /// Posts per user are 1 + a draw with mean (mean - 1).
  CountDistribution posts_per_user{3.0, 1.5};
  /// Probability that a post draws its terms from the author's home topic
  /// cluster rather than uniformly from the whole dictionary.
  Rational focus{1, 2};
  std::uint64_t n_topic_clusters = 5;
  /// Size of the dictionary subset partitioned into clusters.
  std::uint64_t cluster_terms = 40;
  CountDistribution terms_per_post{1.5, 0.0};
  std::uint64_t rng_seed = 1;
  std::string platform = "synthetic";
  std::string start_date = "2020-01-01";

  /// Throws InvalidProfile on missing or out-of-range fields.
  static SynthProfile from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
};

/// Deterministic corpus for a fixed profile and dictionary. Term mentions
/// are embedded in filler text using randomly chosen surface forms with
/// random capitalization and '#' prefixes. Throws InvalidProfile.
Corpus generate(const SynthProfile& profile, const Dictionary& dict);

/// Bundled demo dictionary: 100 synthetic terms over the four categories,
/// drugs carrying one brand-style synonym each.
Dictionary demo_dictionary();

}  // namespace kgcohort::synth
