#include "kgcohort/matcher.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "kgcohort/csv.hpp"
#include "kgcohort/error.hpp"
#include "kgcohort/text.hpp"

namespace kgcohort {

TermMatcher::TermMatcher(const Dictionary& dict) {
  nodes_.emplace_back();
  for (const auto& entry : dict.entries()) {
    for (const auto& surface : entry.surfaces) {
      std::uint32_t node = 0;
      for (auto& token : text::word_tokens(surface)) {
        auto [tok, _] = token_ids_.try_emplace(
            std::move(token), static_cast<std::uint32_t>(token_ids_.size()));
        auto& children = nodes_[node].children;
        auto it = children.find(tok->second);
        if (it == children.end()) {
          auto next = static_cast<std::uint32_t>(nodes_.size());
          nodes_[node].children.emplace(tok->second, next);
          nodes_.emplace_back();
          node = next;
        } else {
          node = it->second;
        }
      }
      nodes_[node].term = entry.id.value;
    }
  }
}

std::vector<TermMatcher::Span> TermMatcher::match_spans(
    std::span<const std::string> tokens) const {
  constexpr std::uint32_t kUnknown = UINT32_MAX;
  std::vector<std::uint32_t> ids(tokens.size(), kUnknown);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = token_ids_.find(tokens[i]);
    if (it != token_ids_.end()) ids[i] = it->second;
  }

  std::vector<Span> spans;
  std::size_t i = 0;
  while (i < ids.size()) {
    std::uint32_t node = 0;
    std::size_t best_end = i;
    std::uint32_t best_term = kNoTerm;
    for (std::size_t j = i; j < ids.size() && ids[j] != kUnknown; ++j) {
      const auto& children = nodes_[node].children;
      auto it = children.find(ids[j]);
      if (it == children.end()) break;
      node = it->second;
      if (nodes_[node].term != kNoTerm) {
        best_end = j + 1;
        best_term = nodes_[node].term;
      }
    }
    if (best_term != kNoTerm) {
      spans.push_back({i, best_end, TermId{best_term}});
      i = best_end;
    } else {
      ++i;
    }
  }
  return spans;
}

std::vector<TermId> TermMatcher::match_text(std::string_view text) const {
  auto tokens = text::word_tokens(text);
  std::vector<TermId> terms;
  for (const auto& span : match_spans(tokens)) terms.push_back(span.term);
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return terms;
}

MatchRecord match_post(const Post& post, const Dictionary& dict) {
  TermMatcher matcher(dict);
  return {post.post_id, post.user_id, matcher.match_text(post.text)};
}

namespace {

std::uint64_t pair_key(TermId a, TermId b) {
  if (b < a) std::swap(a, b);
  return (std::uint64_t(a.value) << 32) | b.value;
}

std::vector<TermId> merge_terms(const std::vector<TermId>& a,
                                const std::vector<TermId>& b) {
  std::vector<TermId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

MatchTable MatchTable::from_records(std::vector<std::string> term_labels,
                                    std::vector<MatchRecord> records,
                                    std::size_t window) {
  if (window == 0) throw Error(Errc::InvalidConfig, "window must be at least 1");
  MatchTable t;
  t.labels_ = std::move(term_labels);
  t.records_ = std::move(records);
  t.window_ = window;

  if (window == 1) {
    t.units_.reserve(t.records_.size());
    for (const auto& r : t.records_) t.units_.push_back({r.user_id, r.terms});
  } else {
    // Windows are consecutive runs within each user's timeline; records are
    // already chronological, so a per-user running unit is enough.
    std::map<std::string_view, std::pair<std::size_t, std::size_t>> open;  // unit, filled
    for (const auto& r : t.records_) {
      auto it = open.find(r.user_id);
      if (it == open.end() || it->second.second == window) {
        t.units_.push_back({r.user_id, r.terms});
        open[r.user_id] = {t.units_.size() - 1, 1};
      } else {
        auto& unit = t.units_[it->second.first];
        unit.terms = merge_terms(unit.terms, r.terms);
        ++it->second.second;
      }
    }
  }

  t.term_counts_.assign(t.labels_.size(), 0);
  std::unordered_map<std::uint64_t, std::uint64_t> pairs;
  for (const auto& unit : t.units_) {
    for (std::size_t i = 0; i < unit.terms.size(); ++i) {
      if (unit.terms[i].value >= t.labels_.size())
        throw Error(Errc::DomainError, "term id outside label table");
      ++t.term_counts_[unit.terms[i].value];
      for (std::size_t j = i + 1; j < unit.terms.size(); ++j)
        ++pairs[pair_key(unit.terms[i], unit.terms[j])];
    }
  }
  t.pairs_.reserve(pairs.size());
  for (auto [key, n] : pairs)
    t.pairs_.push_back({TermId{std::uint32_t(key >> 32)},
                        TermId{std::uint32_t(key & 0xffffffffu)}, n});
  std::sort(t.pairs_.begin(), t.pairs_.end(), [](const auto& x, const auto& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return t;
}

std::uint64_t MatchTable::count(TermId a, TermId b) const {
  if (b < a) std::swap(a, b);
  auto it = std::lower_bound(
      pairs_.begin(), pairs_.end(), std::pair{a, b},
      [](const PairCount& p, const std::pair<TermId, TermId>& k) {
        return std::tie(p.a, p.b) < std::tie(k.first, k.second);
      });
  if (it != pairs_.end() && it->a == a && it->b == b) return it->count;
  return 0;
}

void MatchTable::write_jsonl(std::ostream& out) const {
  for (const auto& r : records_) {
    nlohmann::ordered_json j;
    j["post_id"] = r.post_id;
    j["user_id"] = r.user_id;
    auto& terms = j["terms"] = nlohmann::ordered_json::array();
    for (auto t : r.terms) terms.push_back(labels_[t.value]);
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace)
        << '\n';
  }
}

void MatchTable::write_audit_csv(std::ostream& out) const {
  csv::write_row(out, {"post_id", "user_id", "term_id"});
  for (const auto& r : records_)
    for (auto t : r.terms) csv::write_row(out, {r.post_id, r.user_id, labels_[t.value]});
}

MatchTable MatchTable::read_jsonl(std::istream& in, std::size_t window) {
  struct Raw {
    std::string post_id, user_id;
    std::vector<std::string> terms;
  };
  std::vector<Raw> raw;
  std::set<std::string> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      Raw r{j.at("post_id").get<std::string>(), j.at("user_id").get<std::string>(),
            j.at("terms").get<std::vector<std::string>>()};
      labels.insert(r.terms.begin(), r.terms.end());
      raw.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::FatalParse,
                  "matches line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::vector<std::string> label_vec(labels.begin(), labels.end());
  std::vector<MatchRecord> records;
  records.reserve(raw.size());
  for (auto& r : raw) {
    MatchRecord rec{std::move(r.post_id), std::move(r.user_id), {}};
    for (const auto& term : r.terms) {
      auto pos = std::lower_bound(label_vec.begin(), label_vec.end(), term);
      rec.terms.push_back(TermId{std::uint32_t(pos - label_vec.begin())});
    }
    std::sort(rec.terms.begin(), rec.terms.end());
    rec.terms.erase(std::unique(rec.terms.begin(), rec.terms.end()), rec.terms.end());
    records.push_back(std::move(rec));
  }
  return from_records(std::move(label_vec), std::move(records), window);
}

MatchTable match_corpus(const Corpus& corpus, const Dictionary& dict,
                        const MatchOptions& options) {
  const TermMatcher matcher(dict);
  const auto& posts = corpus.posts();
  std::vector<MatchRecord> records(posts.size());

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      records[i] = {posts[i].post_id, posts[i].user_id,
                    matcher.match_text(posts[i].text)};
  };

  unsigned workers = std::max(1u, options.workers);
  if (workers == 1 || posts.size() < 2 * workers) {
    work(0, posts.size());
  } else {
    std::vector<std::thread> threads;
    std::size_t chunk = (posts.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t begin = std::min(posts.size(), w * chunk);
      std::size_t end = std::min(posts.size(), begin + chunk);
      threads.emplace_back(work, begin, end);
    }
    for (auto& t : threads) t.join();
  }
  return MatchTable::from_records(dict.labels(), std::move(records), options.window);
}

}  // namespace kgcohort
