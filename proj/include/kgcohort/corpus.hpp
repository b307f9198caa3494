#pragma once

#include <chrono>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kgcohort/dictionary.hpp"

namespace kgcohort {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Accepts `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM[:SS[.fff]]` with an optional `Z`
/// or `+HH:MM` / `-HH:MM` offset (a space may replace the `T`). Naive times
/// are taken as UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text);
/// UTC, `YYYY-MM-DDTHH:MM:SSZ` or `...SS.fffZ` when milliseconds are set.
std::string format_timestamp(Timestamp ts);

struct Post {
  std::string post_id;
  std::string user_id;
  Timestamp timestamp{};
  std::string platform;
  std::string text;

  friend bool operator==(const Post&, const Post&) = default;
};

/// Posts in canonical order (timestamp, then post_id) with per-user
/// timelines. Immutable once built.
class Corpus {
 public:
  Corpus() = default;

  /// Throws FatalParse on duplicate post ids.
  static Corpus from_posts(std::vector<Post> posts,
                           std::set<std::string> exclusions = {});

  const std::vector<Post>& posts() const { return posts_; }
  /// user_id -> indices into posts(), chronological.
  const std::map<std::string, std::vector<std::size_t>>& timelines() const {
    return timelines_;
  }
  /// Users removed by apply_exclusions so far.
  const std::set<std::string>& exclusions() const { return exclusions_; }

  std::vector<std::string> users() const;
  std::size_t user_count() const { return timelines_.size(); }
  bool empty() const { return posts_.empty(); }

  /// JSON Lines, one post per line, canonical order.
  void write_jsonl(std::ostream& out) const;

 private:
  std::vector<Post> posts_;
  std::map<std::string, std::vector<std::size_t>> timelines_;
  std::set<std::string> exclusions_;
};

struct IngestOptions {
  bool strict = false;
  std::optional<Timestamp> min_time;
  std::optional<Timestamp> max_time;
};

struct IngestReport {
  std::size_t lines_read = 0;
  std::size_t skipped = 0;
  std::size_t outside_window = 0;
  /// "line N: reason", capped at the first 100 problems.
  std::vector<std::string> problems;
};

struct IngestResult {
  Corpus corpus;
  IngestReport report;
};

/// Reads a JSON Lines post stream. Blank lines are ignored. Malformed lines
/// are skipped and reported unless `strict`, where the first one throws
/// FatalParse. Throws EmptyCorpus when no post survives.
IngestResult ingest(std::istream& in, const IngestOptions& options = {});

Corpus apply_exclusions(const Corpus& corpus,
                        const std::set<std::string>& excluded);

/// Keeps only the listed users' timelines.
Corpus restrict_to_users(const Corpus& corpus,
                         const std::set<std::string>& users);

/// One user_id per line; blank lines and '#' comments ignored.
std::set<std::string> read_exclusions(std::istream& in);

struct SeedSpec {
  std::set<TermId> seed_terms;

  /// Resolves surface forms (canonical or synonym) through `dict`. Throws
  /// UnresolvedSeedTerm for unknown surfaces or an empty list.
  static SeedSpec resolve(const std::vector<std::string>& surfaces,
                          const Dictionary& dict);
};

/// Users with at least one post whose matched terms intersect the seed set.
std::set<std::string> seed_select(const Corpus& corpus, const Dictionary& dict,
                                  const SeedSpec& seed);

}  // namespace kgcohort
