#include "kgcohort/cohort.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <unordered_set>

#include "kgcohort/error.hpp"
#include "kgcohort/text.hpp"

namespace kgcohort {

std::vector<EngagementStats> engagement_stats(const Corpus& corpus,
                                              const MatchTable& table) {
  std::map<std::string_view, std::set<TermId>> matched;
  for (const auto& r : table.records())
    matched[r.user_id].insert(r.terms.begin(), r.terms.end());

  std::vector<EngagementStats> out;
  out.reserve(corpus.user_count());
  for (const auto& [user, timeline] : corpus.timelines()) {
    EngagementStats s;
    s.user_id = user;
    s.post_count = timeline.size();
    const auto& posts = corpus.posts();
    auto span = posts[timeline.back()].timestamp - posts[timeline.front()].timestamp;
    s.days_active = std::chrono::floor<std::chrono::days>(span).count();
    for (auto idx : timeline) s.word_count += text::whitespace_word_count(posts[idx].text);
    if (auto it = matched.find(user); it != matched.end())
      s.unique_matches = it->second.size();
    out.push_back(std::move(s));
  }
  return out;
}

std::uint64_t nearest_rank(std::vector<std::uint64_t> values, const Rational& q) {
  if (values.empty()) throw Error(Errc::EmptyStats, "percentile of an empty sample");
  if (q.sign() < 0 || q > Rational(1))
    throw Error(Errc::DomainError, "percentile outside [0, 1]");
  std::sort(values.begin(), values.end());
  // ceil(q * n) in exact arithmetic.
  Rational pos = q * Rational(static_cast<std::int64_t>(values.size()));
  std::int64_t rank = pos.small_num() / pos.small_den();
  if (Rational(rank) < pos) ++rank;
  rank = std::clamp<std::int64_t>(rank, 1, static_cast<std::int64_t>(values.size()));
  return values[static_cast<std::size_t>(rank - 1)];
}

std::set<std::string> engagement_filter(const std::vector<EngagementStats>& stats,
                                        const FilterSpec& spec) {
  if (stats.empty()) throw Error(Errc::EmptyStats, "no users to filter");
  std::vector<std::uint64_t> days, posts, words;
  for (const auto& s : stats) {
    days.push_back(static_cast<std::uint64_t>(s.days_active));
    posts.push_back(s.post_count);
    words.push_back(s.word_count);
  }
  auto day_cut = nearest_rank(days, spec.percentile);
  auto post_cut = nearest_rank(posts, spec.percentile);
  auto word_cut = nearest_rank(words, spec.percentile);

  std::set<std::string> kept;
  for (const auto& s : stats)
    if (static_cast<std::uint64_t>(s.days_active) > day_cut && s.post_count > post_cut &&
        s.word_count > word_cut && s.unique_matches >= spec.min_unique_terms)
      kept.insert(s.user_id);
  return kept;
}

template <class Edge>
std::set<std::string> edge_contributors(const MatchTable& table,
                                        const LabeledGraph<Edge>& g,
                                        const std::vector<std::size_t>& edges) {
  std::map<std::string_view, std::uint32_t> ids;
  for (std::uint32_t t = 0; t < table.term_labels().size(); ++t)
    ids.emplace(table.term_labels()[t], t);

  std::unordered_set<std::uint64_t> wanted;
  for (auto k : edges) {
    auto a = ids.find(g.nodes[g.edges[k].i]);
    auto b = ids.find(g.nodes[g.edges[k].j]);
    if (a == ids.end() || b == ids.end()) continue;
    auto lo = std::min(a->second, b->second), hi = std::max(a->second, b->second);
    wanted.insert((std::uint64_t(lo) << 32) | hi);
  }

  std::set<std::string> users;
  if (wanted.empty()) return users;
  for (const auto& unit : table.units()) {
    const auto& terms = unit.terms;  // sorted
    bool hit = false;
    for (std::size_t x = 0; x < terms.size() && !hit; ++x)
      for (std::size_t y = x + 1; y < terms.size() && !hit; ++y)
        hit = wanted.contains((std::uint64_t(terms[x].value) << 32) | terms[y].value);
    if (hit) users.insert(unit.user_id);
  }
  return users;
}

template std::set<std::string> edge_contributors(const MatchTable&, const ProximityGraph&,
                                                 const std::vector<std::size_t>&);
template std::set<std::string> edge_contributors(const MatchTable&, const DistanceGraph&,
                                                 const std::vector<std::size_t>&);

std::set<std::string> backbone_contributors(const MatchTable& table,
                                            const DistanceGraph& g,
                                            const BackboneResult& bb) {
  return edge_contributors(table, g, bb.backbone_edges);
}

std::set<std::string> full_cohort(const MatchTable& table, const ProximityGraph& g) {
  std::vector<std::size_t> all(g.edges.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return edge_contributors(table, g, all);
}

std::string_view to_string(CohortFilter f) {
  switch (f) {
    case CohortFilter::Raw: return "raw";
    case CohortFilter::DrugMention: return "drug_mention";
    case CohortFilter::FullCohort: return "full_cohort";
    case CohortFilter::Backbone: return "backbone_contributor";
    case CohortFilter::Lenient: return "lenient";
    case CohortFilter::Aggressive: return "aggressive";
  }
  return "raw";
}

namespace {

bool has(const CohortMember& m, CohortFilter f) {
  switch (f) {
    case CohortFilter::Raw: return true;
    case CohortFilter::DrugMention: return m.drug_mention;
    case CohortFilter::FullCohort: return m.full_cohort;
    case CohortFilter::Backbone: return m.backbone_contributor;
    case CohortFilter::Lenient: return m.lenient;
    case CohortFilter::Aggressive: return m.aggressive;
  }
  return false;
}

std::optional<Rational> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

constexpr CohortFilter kFilters[] = {CohortFilter::Raw,      CohortFilter::DrugMention,
                                     CohortFilter::FullCohort, CohortFilter::Backbone,
                                     CohortFilter::Lenient,  CohortFilter::Aggressive};

}  // namespace

std::set<std::string> CohortReport::users(CohortFilter f) const {
  std::set<std::string> out;
  for (const auto& m : members)
    if (has(m, f)) out.insert(m.stats.user_id);
  return out;
}

std::size_t CohortReport::count(CohortFilter f) const {
  return static_cast<std::size_t>(
      std::count_if(members.begin(), members.end(), [f](const auto& m) { return has(m, f); }));
}

std::optional<Rational> CohortReport::r_raw() const {
  return ratio(count(CohortFilter::Backbone), count(CohortFilter::Raw));
}

std::optional<Rational> CohortReport::r_full() const {
  return ratio(count(CohortFilter::Backbone), count(CohortFilter::FullCohort));
}

CohortReport build_cohort_report(const CohortInputs& in) {
  auto stats = engagement_stats(in.corpus, in.table);
  std::set<std::string> lenient, aggressive;
  if (!stats.empty()) {
    lenient = engagement_filter(stats, in.lenient);
    aggressive = engagement_filter(stats, in.aggressive);
  }
  auto full = full_cohort(in.table, in.proximity);
  auto contributors = backbone_contributors(in.table, in.distance, in.backbone);

  CohortReport report;
  report.total_posts = in.corpus.posts().size();
  for (auto& s : stats) {
    CohortMember m;
    m.drug_mention = in.drug_mention && in.drug_mention->contains(s.user_id);
    m.full_cohort = full.contains(s.user_id);
    m.backbone_contributor = contributors.contains(s.user_id);
    m.lenient = lenient.contains(s.user_id);
    m.aggressive = aggressive.contains(s.user_id);
    if (m.full_cohort) report.full_cohort_posts += s.post_count;
    if (m.backbone_contributor) report.contributor_posts += s.post_count;
    if (m.lenient) report.lenient_posts += s.post_count;
    if (m.aggressive) report.aggressive_posts += s.post_count;
    m.stats = std::move(s);
    report.members.push_back(std::move(m));
  }
  return report;
}

OverlapCell overlap_sets(const std::set<std::string>& a, const std::set<std::string>& b) {
  OverlapCell cell{};
  cell.size_a = a.size();
  cell.size_b = b.size();
  for (const auto& u : a)
    if (b.contains(u)) ++cell.intersection;
  if (cell.size_a) cell.frac_of_a = double(cell.intersection) / double(cell.size_a);
  if (cell.size_b) cell.frac_of_b = double(cell.intersection) / double(cell.size_b);
  return cell;
}

std::vector<OverlapCell> overlap(const CohortReport& report) {
  std::vector<OverlapCell> cells;
  for (std::size_t x = 0; x < std::size(kFilters); ++x) {
    for (std::size_t y = x + 1; y < std::size(kFilters); ++y) {
      auto cell = overlap_sets(report.users(kFilters[x]), report.users(kFilters[y]));
      cell.a = kFilters[x];
      cell.b = kFilters[y];
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace kgcohort
