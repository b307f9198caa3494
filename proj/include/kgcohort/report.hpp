#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgcohort/backbone.hpp"
#include "kgcohort/cohort.hpp"

namespace kgcohort {

/// Upper tail of the standard normal, P(Z > z).
double normal_survival(double z);

struct ValidationResult {
  std::uint64_t x1 = 0, n1 = 0;  // false positives / annotated, group 1
  std::uint64_t x2 = 0, n2 = 0;
  double rate1 = 0.0;
  double rate2 = 0.0;
  double z = 0.0;        // (rate2 - rate1) / pooled standard error
  double p_value = 1.0;  // two-sided
};

/// Pooled two-proportion z test. Throws DomainError unless n1, n2 > 0 and
/// 0 <= x <= n. A pooled rate of 0 or 1 gives z = 0, p = 1.
ValidationResult two_proportion_test(std::uint64_t x1, std::uint64_t n1,
                                     std::uint64_t x2, std::uint64_t n2);

enum class AnnotationLabel { TruePositive, FalsePositive };

struct AnnotationRecord {
  std::string user_id;
  AnnotationLabel label = AnnotationLabel::TruePositive;
};

/// CSV with header `user_id,label`; labels `true_positive` / `false_positive`.
/// Throws FatalParse on bad rows or a user annotated twice.
std::vector<AnnotationRecord> read_annotations(std::istream& in);

/// Retained-vs-not-retained false-positive comparison for one filter.
struct FilterValidation {
  CohortFilter filter = CohortFilter::Backbone;
  std::uint64_t retained_users = 0;
  std::uint64_t not_retained_users = 0;
  /// Group 1 = retained annotated users, group 2 = the rest.
  ValidationResult test;
};

/// One row per filter among backbone, lenient, aggressive. Annotated users
/// outside the raw cohort are ignored. Filters where either group has no
/// annotated users are omitted.
std::vector<FilterValidation> validate_filters(const CohortReport& report,
                                               const std::vector<AnnotationRecord>& labels);

struct SummaryRow {
  std::string run;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t backbone_edges = 0;
  std::optional<Rational> tau;
  std::size_t raw_cohort = 0;
  std::size_t drug_mention = 0;
  std::size_t full_cohort = 0;
  std::size_t contributors = 0;
  std::size_t lenient = 0;
  std::size_t aggressive = 0;
  std::optional<Rational> r_raw;
  std::optional<Rational> r_full;
  std::uint64_t total_posts = 0;
  std::uint64_t full_cohort_posts = 0;
  std::uint64_t contributor_posts = 0;
};

SummaryRow summarize(const std::string& run, const CohortReport& report,
                     std::size_t nodes, std::size_t edges, std::size_t backbone_edges);

inline SummaryRow summarize(const std::string& run, const CohortReport& report,
                            const DistanceGraph& g, const BackboneResult& bb) {
  return summarize(run, report, g.node_count(), g.edge_count(), bb.backbone_edges.size());
}

/// "12.5%" with one decimal, or "n/a".
std::string percent(const std::optional<Rational>& value);

/// `nodes=… edges=… backbone_edges=… tau=…` (tau as num/den and percent).
std::string backbone_summary_line(std::size_t nodes, std::size_t edges,
                                  std::size_t backbone_edges,
                                  const std::optional<Rational>& tau);

/// Plain-text tables shaped like the published cohort tables.
void write_summary_text(std::ostream& out, const std::vector<SummaryRow>& rows,
                        const std::vector<OverlapCell>& overlaps,
                        const std::vector<FilterValidation>& validation);

nlohmann::ordered_json summary_json(const std::vector<SummaryRow>& rows,
                                    const std::vector<OverlapCell>& overlaps,
                                    const std::vector<FilterValidation>& validation);

}  // namespace kgcohort
