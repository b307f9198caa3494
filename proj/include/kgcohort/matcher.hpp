#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgcohort/corpus.hpp"
#include "kgcohort/dictionary.hpp"

namespace kgcohort {

/// Token trie over every dictionary surface form. Matching is greedy
/// leftmost-longest: at each token position the longest surface form
/// starting there wins, and scanning resumes after it.
class TermMatcher {
 public:
  explicit TermMatcher(const Dictionary& dict);

  struct Span {
    std::size_t begin = 0;  // token index, inclusive
    std::size_t end = 0;    // exclusive
    TermId term;
  };

  std::vector<Span> match_spans(std::span<const std::string> tokens) const;
  /// Sorted, deduplicated parent terms found in `text`.
  std::vector<TermId> match_text(std::string_view text) const;

 private:
  static constexpr std::uint32_t kNoTerm = UINT32_MAX;
  struct Node {
    std::unordered_map<std::uint32_t, std::uint32_t> children;
    std::uint32_t term = kNoTerm;
  };

  std::unordered_map<std::string, std::uint32_t> token_ids_;
  std::vector<Node> nodes_;
};

struct MatchRecord {
  std::string post_id;
  std::string user_id;
  std::vector<TermId> terms;  // sorted, unique

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

MatchRecord match_post(const Post& post, const Dictionary& dict);

/// Co-occurrence unit: a single post, or with a window of k > 1 a run of
/// k consecutive posts from one user's timeline (terms are the union).
struct CountingUnit {
  std::string user_id;
  std::vector<TermId> terms;
};

struct PairCount {
  TermId a;  // a < b
  TermId b;
  std::uint64_t count = 0;
};

/// Per-post matches plus per-unit presence counts n_i and n_ij.
class MatchTable {
 public:
  MatchTable() = default;

  /// `records` must be in corpus order so that windows follow timelines.
  static MatchTable from_records(std::vector<std::string> term_labels,
                                 std::vector<MatchRecord> records,
                                 std::size_t window = 1);

  const std::vector<std::string>& term_labels() const { return labels_; }
  const std::vector<MatchRecord>& records() const { return records_; }
  const std::vector<CountingUnit>& units() const { return units_; }
  std::size_t window() const { return window_; }

  /// n_i: number of units containing `t`.
  std::uint64_t count(TermId t) const { return term_counts_.at(t.value); }
  /// n_ij for an unordered pair; 0 when the pair never co-occurs.
  std::uint64_t count(TermId a, TermId b) const;
  /// Every co-occurring pair, sorted by (a, b).
  const std::vector<PairCount>& pair_counts() const { return pairs_; }

  /// JSON Lines: {"post_id","user_id","terms":[canonical...]}.
  void write_jsonl(std::ostream& out) const;
  /// Audit CSV with one (post_id, user_id, term) row per match.
  void write_audit_csv(std::ostream& out) const;
  /// Inverse of write_jsonl. Term labels are collected from the file.
  static MatchTable read_jsonl(std::istream& in, std::size_t window = 1);

 private:
  std::vector<std::string> labels_;
  std::vector<MatchRecord> records_;
  std::vector<CountingUnit> units_;
  std::vector<std::uint64_t> term_counts_;
  std::vector<PairCount> pairs_;
  std::size_t window_ = 1;
};

struct MatchOptions {
  std::size_t window = 1;
  unsigned workers = 1;
};

MatchTable match_corpus(const Corpus& corpus, const Dictionary& dict,
                        const MatchOptions& options = {});

}  // namespace kgcohort
