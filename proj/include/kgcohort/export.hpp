#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "kgcohort/backbone.hpp"
#include "kgcohort/cohort.hpp"
#include "kgcohort/graph.hpp"

namespace kgcohort {

enum class ExportFormat { Csv, GraphMl, Json };

/// "csv", "graphml" or "json"; throws UnsupportedFormat otherwise.
ExportFormat parse_format(std::string_view name);

/// Edge list. CSV columns: term_i, term_j, n_i, n_j, n_ij, p_num, p_den,
/// d_num, d_den, then is_backbone, d_closure_num, d_closure_den when a
/// backbone is given. Count columns are empty for edges without counts.
/// Rows follow the graph's (i, j) order, so output is stable.
void export_graph(std::ostream& out, const DistanceGraph& g, const BackboneResult* bb,
                  ExportFormat format);

/// What an edge-list file carries besides the graph itself.
struct EdgeListFile {
  DistanceGraph graph;
  std::optional<std::vector<bool>> is_backbone;
  std::optional<std::vector<Rational>> closure;  // d^C on each edge
};

/// Reads CSV or JSON written by export_graph. Throws FatalParse.
EdgeListFile import_graph(std::istream& in, ExportFormat format);

/// Backbone flags without a closure, enough for cohort selection and ego
/// extraction on a reloaded graph.
BackboneResult backbone_from_flags(const std::vector<bool>& is_metric);

/// CSV columns: user_id, days_active, post_count, word_count,
/// unique_matches, drug_mention, full_cohort, backbone_contributor,
/// lenient, aggressive. JSON mirrors the CSV fields.
void export_cohort(std::ostream& out, const CohortReport& report, ExportFormat format);

/// Post totals are recomputed from the member rows.
CohortReport import_cohort(std::istream& in, ExportFormat format);

/// Writes a whole string to a file, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace kgcohort
