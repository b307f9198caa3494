#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kgcohort/backbone.hpp"
#include "kgcohort/corpus.hpp"
#include "kgcohort/graph.hpp"
#include "kgcohort/matcher.hpp"
#include "kgcohort/rational.hpp"

namespace kgcohort {

struct EngagementStats {
  std::string user_id;
  std::int64_t days_active = 0;  // whole days between first and last post
  std::uint64_t post_count = 0;
  std::uint64_t word_count = 0;  // whitespace tokens of the raw text
  std::uint64_t unique_matches = 0;

  friend bool operator==(const EngagementStats&, const EngagementStats&) = default;
};

/// One record per user, sorted by user_id.
std::vector<EngagementStats> engagement_stats(const Corpus& corpus,
                                              const MatchTable& table);

struct FilterSpec {
  Rational percentile{1, 4};
  std::uint64_t min_unique_terms = 2;

  static FilterSpec lenient() { return {Rational(1, 4), 2}; }
  static FilterSpec aggressive() { return {Rational(3, 4), 2}; }
};

/// Nearest-rank percentile: the value at rank ceil(q * n) of the sorted
/// sample, with rank clamped to [1, n]. `values` must be non-empty.
std::uint64_t nearest_rank(std::vector<std::uint64_t> values, const Rational& q);

/// Users strictly above the percentile on days active, posts and words, and
/// with at least `min_unique_terms` distinct matches. Throws EmptyStats.
std::set<std::string> engagement_filter(const std::vector<EngagementStats>& stats,
                                        const FilterSpec& spec);

/// Users with a counting unit that contains both endpoints of at least one
/// of `edges` (given as node labels of `g`).
template <class Edge>
std::set<std::string> edge_contributors(const MatchTable& table,
                                        const LabeledGraph<Edge>& g,
                                        const std::vector<std::size_t>& edges);

std::set<std::string> backbone_contributors(const MatchTable& table,
                                            const DistanceGraph& g,
                                            const BackboneResult& bb);

std::set<std::string> full_cohort(const MatchTable& table, const ProximityGraph& g);

struct CohortMember {
  EngagementStats stats;
  bool drug_mention = false;
  bool full_cohort = false;
  bool backbone_contributor = false;
  bool lenient = false;
  bool aggressive = false;

  friend bool operator==(const CohortMember&, const CohortMember&) = default;
};

enum class CohortFilter { Raw, DrugMention, FullCohort, Backbone, Lenient, Aggressive };

std::string_view to_string(CohortFilter f);

struct CohortReport {
  std::vector<CohortMember> members;  // raw cohort, sorted by user_id
  std::uint64_t total_posts = 0;
  std::uint64_t full_cohort_posts = 0;
  std::uint64_t contributor_posts = 0;
  std::uint64_t lenient_posts = 0;
  std::uint64_t aggressive_posts = 0;

  std::set<std::string> users(CohortFilter f) const;
  std::size_t count(CohortFilter f) const;

  /// |contributors| / |raw cohort|.
  std::optional<Rational> r_raw() const;
  /// |contributors| / |full cohort|.
  std::optional<Rational> r_full() const;

  friend bool operator==(const CohortReport&, const CohortReport&) = default;
};

struct CohortInputs {
  const Corpus& corpus;
  const MatchTable& table;
  const ProximityGraph& proximity;
  const DistanceGraph& distance;
  const BackboneResult& backbone;
  /// Drug Mention cohort, when seed selection ran.
  const std::set<std::string>* drug_mention = nullptr;
  FilterSpec lenient = FilterSpec::lenient();
  FilterSpec aggressive = FilterSpec::aggressive();
};

CohortReport build_cohort_report(const CohortInputs& in);

struct OverlapCell {
  CohortFilter a;
  CohortFilter b;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  std::size_t intersection = 0;
  std::optional<double> frac_of_a;  // |A ∩ B| / |A|
  std::optional<double> frac_of_b;  // |A ∩ B| / |B|
};

/// Every unordered pair of filters, in enum order.
std::vector<OverlapCell> overlap(const CohortReport& report);

/// Pairwise overlap of two explicit sets.
OverlapCell overlap_sets(const std::set<std::string>& a, const std::set<std::string>& b);

}  // namespace kgcohort
