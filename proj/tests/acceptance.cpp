// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "kgcohort/backbone.hpp"
#include "kgcohort/cohort.hpp"
#include "kgcohort/export.hpp"
#include "kgcohort/graph.hpp"
#include "kgcohort/matcher.hpp"
#include "kgcohort/report.hpp"
#include "kgcohort/synth.hpp"
#include "kgcohort/text.hpp"

using namespace kgcohort;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

// 1 and 2 share the same graphs.
std::vector<DistanceGraph> oracle_graphs() {
  std::mt19937_64 rng(20240601);
  std::vector<DistanceGraph> graphs;
  for (int k = 0; k < 200; ++k) {
    std::size_t n = 2 + rng() % 99;  // 2..100
    std::size_t extra = rng() % (3 * n + 1);
    graphs.push_back(oracle::random_connected_graph(rng, n, extra, k % 2 == 1));
  }
  return graphs;
}

Outcome criterion1(const std::vector<DistanceGraph>& graphs) {
  Outcome o;
  auto t0 = Clock::now();
  std::size_t pairs = 0, removed = 0;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const auto& g = graphs[k];
    auto fw = oracle::floyd_warshall(g);
    auto bb = extract_backbone(g);
    auto sub_closure = metric_closure(backbone_subgraph(g, bb));
    for (std::uint32_t i = 0; i < g.node_count(); ++i)
      for (std::uint32_t j = i + 1; j < g.node_count(); ++j) {
        ++pairs;
        o.require(fw[i][j].has_value(), "graph " + std::to_string(k) + " not connected");
        o.require(bb.closure.distance(i, j) == fw[i][j], "closure differs from oracle in graph " + std::to_string(k));
        o.require(sub_closure.distance(i, j) == fw[i][j], "backbone closure differs in graph " + std::to_string(k));
      }
    for (auto e : bb.semi_metric_edges) {
      ++removed;
      const auto& edge = g.edges[e];
      o.require(edge.d > *fw[edge.i][edge.j], "removed edge not strictly semi-metric");
    }
    for (auto e : bb.backbone_edges) {
      const auto& edge = g.edges[e];
      o.require(edge.d == *fw[edge.i][edge.j], "kept edge is not metric");
    }
  }
  double secs = seconds_since(t0);
  o.require(secs < 60.0, "took " + std::to_string(secs) + " s");
  if (o.pass) {
    std::ostringstream s;
    s << graphs.size() << " graphs, " << pairs << " pairs equal, " << removed
      << " removed edges strictly semi-metric, " << secs << " s";
    o.detail = s.str();
  }
  return o;
}

Outcome criterion2(const std::vector<DistanceGraph>& graphs) {
  Outcome o;
  for (const auto& g : graphs) {
    auto sub = backbone_subgraph(g, extract_backbone(g));
    auto again = extract_backbone(sub);
    o.require(again.semi_metric_edges.empty(), "backbone of backbone removed an edge");
    o.require(!again.tau() || *again.tau() == Rational(1), "tau != 1");
  }
  if (o.pass) o.detail = "tau = 1 on all " + std::to_string(graphs.size()) + " backbone subgraphs";
  return o;
}

Outcome criterion3() {
  Outcome o;
  auto tri = [](Rational ab, Rational bc, Rational ac) {
    return DistanceGraph::make({"a", "b", "c"}, {{0, 1, ab, std::nullopt},
                                                 {1, 2, bc, std::nullopt},
                                                 {0, 2, ac, std::nullopt}});
  };
  auto strict = extract_backbone(tri(1, 1, 3));
  o.require(strict.backbone_edges.size() == 2, "(1,1,3) kept " + std::to_string(strict.backbone_edges.size()));
  o.require(strict.semi_metric_edges.size() == 1 && strict.semi_metric_edges[0] == 1,
            "(1,1,3) removed the wrong edge");
  o.require(strict.closure.distance(0, 2) == Rational(2), "d^C_ac != 2");
  auto tie = extract_backbone(tri(1, 1, 2));
  o.require(tie.backbone_edges.size() == 3, "tie (1,1,2) dropped an edge");
  o.require(tie.tau() == Rational(1), "tie tau != 1");
  if (o.pass) o.detail = "(1,1,3) -> 2 edges, tau 2/3; (1,1,2) -> 3 edges";
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::size_t edges = 0;
  for (int k = 0; k < 1000; ++k) {
    std::size_t n = 2 + rng() % 30;
    std::vector<std::string> nodes;
    for (std::size_t v = 0; v < n; ++v) nodes.push_back(oracle::node_name(v));
    std::vector<ProximityEdge> list;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) {
        if (rng() % 3) continue;
        std::int64_t den = 1 + std::int64_t(rng() % 5000);
        std::int64_t num = 1 + std::int64_t(rng() % std::uint64_t(den));
        if (rng() % 10 == 0) num = den;  // p = 1
        list.push_back({i, j, Rational(num, den), std::nullopt});
      }
    auto pg = ProximityGraph::make(nodes, list);
    edges += pg.edge_count();
    auto dg = to_distance(pg);
    auto back = to_proximity(dg);
    o.require(back == pg, "roundtrip changed graph " + std::to_string(k));
    for (std::size_t e = 0; e < pg.edge_count(); ++e)
      o.require((pg.edges[e].p == Rational(1)) == (dg.edges[e].d == Rational(0)), "p = 1 <-> d = 0 violated");
  }
  auto one = to_distance(ProximityGraph::make({"a", "b"}, {{0, 1, Rational(1), std::nullopt}}));
  o.require(one.edges[0].d == Rational(0), "p = 1 did not map to d = 0");
  auto zero = to_proximity(DistanceGraph::make({"a", "b"}, {{0, 1, Rational(0), std::nullopt}}));
  o.require(zero.edges[0].p == Rational(1), "d = 0 did not map to p = 1");
  if (o.pass) o.detail = "1000 graphs, " + std::to_string(edges) + " edges identical after roundtrip";
  return o;
}

MatchTable pair_table(std::uint64_t n_ab, std::uint64_t n_a, std::uint64_t n_b) {
  std::vector<MatchRecord> records;
  std::size_t k = 0;
  auto add = [&](std::vector<TermId> t) { records.push_back({"p" + std::to_string(k++), "u", std::move(t)}); };
  for (std::uint64_t i = 0; i < n_ab; ++i) add({TermId{0}, TermId{1}});
  for (std::uint64_t i = n_ab; i < n_a; ++i) add({TermId{0}});
  for (std::uint64_t i = n_ab; i < n_b; ++i) add({TermId{1}});
  return MatchTable::from_records({"a", "b"}, std::move(records));
}

Outcome criterion5() {
  Outcome o;
  o.require(build_proximity(pair_table(2, 40, 40)).edge_count() == 0, "n_ij = 2 kept");
  o.require(build_proximity(pair_table(3, 6, 7)).edge_count() == 0, "union = 10 kept");
  auto g = build_proximity(pair_table(3, 7, 7));
  o.require(g.edge_count() == 1, "n_ij = 3, union = 11 dropped");
  if (g.edge_count() == 1) o.require(g.edges[0].p == Rational(3, 11), "p != 3/11");
  if (o.pass) o.detail = "n_ij=2 excluded, union=10 excluded, n_ij=3/union=11 included with p=3/11";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const fs::path fixture = fs::path(KGCOHORT_FIXTURES) / "fig3";
  const fs::path out = fs::temp_directory_path() / "kgcohort_acceptance_fig3";
  fs::remove_all(out);
  std::string cmd = std::string("\"") + KGCOHORT_CLI + "\" pipeline --config \"" +
                    (fixture / "config.json").string() + "\" --dictionary \"" +
                    (fixture / "dictionary.tsv").string() + "\" --corpus \"" +
                    (fixture / "posts.jsonl").string() + "\" --out \"" + out.string() + "\" > \"" +
                    (fs::temp_directory_path() / "kgcohort_acceptance_fig3.log").string() + "\" 2>&1";
  int rc = std::system(cmd.c_str());
  o.require(rc == 0, "pipeline exited with " + std::to_string(rc));
  if (!o.pass) return o;
  std::istringstream in(read_file(out / "cohort.csv"));
  auto report = import_cohort(in, ExportFormat::Csv);
  auto contributors = report.users(CohortFilter::Backbone);
  o.require(contributors == std::set<std::string>{"A", "D", "E"}, "contributors differ from {A, D, E}");
  o.require(report.count(CohortFilter::Raw) == 5, "raw cohort is not 5 users");
  o.require(report.r_raw() == Rational(3, 5), "r_raw != 3/5");
  o.require(read_file(out / "summary.txt").find("3 (60.0%)") != std::string::npos, "summary lacks 60.0%");
  if (o.pass) o.detail = "contributors {A, D, E} = 3/5 = 60.0% via the CLI pipeline";
  return o;
}

Outcome criterion7() {
  Outcome o;
  auto d = Dictionary::from_rows({{"levetiracetam", "keppra", "drug"},
                                  {"levetiracetam", "levetiracetam", "drug"},
                                  {"seizure", "seizure", "medical_term"},
                                  {"seizure meds", "seizure meds", "drug"}});
  auto lev = d.resolve("levetiracetam");
  o.require(d.resolve("#Keppra") == lev && d.resolve("keppra") == lev, "#Keppra != keppra");
  TermMatcher tm(d);
  auto m = tm.match_text("new #Keppra script");
  o.require(m.size() == 1 && m[0] == *lev, "#Keppra did not match levetiracetam");
  o.require(tm.match_text("seizuremeds").empty(), "seizuremeds matched seizure meds");
  auto meds = tm.match_text("my seizure meds");
  o.require(meds.size() == 1 && d.entry(meds[0]).canonical == "seizure meds",
            "seizure meds did not match as one term");

  // Nested terms: brute-force segmentation oracle over 50 constructed posts.
  auto nested = Dictionary::from_rows({{"flu", "flu", "medical_term"},
                                       {"flu syndrome", "flu syndrome", "medical_term"},
                                       {"syndrome", "syndrome", "medical_term"},
                                       {"seizure", "seizure", "medical_term"},
                                       {"seizure meds", "seizure meds", "drug"},
                                       {"meds", "meds", "drug"},
                                       {"absence seizure", "absence seizure", "medical_term"},
                                       {"absence seizure meds", "absence seizure meds", "drug"}});
  std::set<std::string> phrases;
  for (const auto& [s, _] : nested.surface_index()) phrases.insert(s);
  TermMatcher nm(nested);
  const std::vector<std::string> words = {"flu", "syndrome", "seizure", "meds", "absence", "the", "my", "#Flu", "Seizure"};
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    std::string post;
    auto len = 3 + rng() % 8;
    for (std::size_t i = 0; i < len; ++i) post += words[rng() % words.size()] + " ";
    auto tokens = text::word_tokens(post);
    auto expect = oracle::segment(tokens, phrases);
    std::vector<std::string> got;
    for (const auto& s : nm.match_spans(tokens)) got.push_back(nested.entry(s.term).canonical);
    o.require(got == expect, "longest match disagrees with oracle on: " + post);
  }
  if (o.pass) o.detail = "#Keppra == keppra, seizuremeds != seizure meds, 50/50 posts match the oracle";
  return o;
}

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Outcome criterion8() {
  Outcome o;
  auto dict = synth::demo_dictionary();
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    synth::SynthProfile p;
    p.n_users = 200;
    p.rng_seed = seed;
    p.focus = Rational(std::int64_t(seed % 11), 10 + std::int64_t(seed % 11 == 10));
    auto corpus = synth::generate(p, dict);
    auto t = match_corpus(corpus, dict);
    auto prox = build_proximity(t, {2, 5});
    auto dist = to_distance(prox);
    auto bb = extract_backbone(dist);
    auto r = build_cohort_report({corpus, t, prox, dist, bb});
    auto s = std::to_string(seed);
    o.require(subset(r.users(CohortFilter::Backbone), r.users(CohortFilter::FullCohort)), "contributors not in full cohort, seed " + s);
    o.require(subset(r.users(CohortFilter::FullCohort), r.users(CohortFilter::Raw)), "full cohort not in raw, seed " + s);
    o.require(subset(r.users(CohortFilter::Aggressive), r.users(CohortFilter::Lenient)), "aggressive not in lenient, seed " + s);
    o.require(r.r_full() && r.r_raw() && *r.r_full() >= *r.r_raw(), "r_full < r_raw, seed " + s);
  }
  if (o.pass) o.detail = "inclusions and r_full >= r_raw hold on 50 corpora";
  return o;
}

Outcome criterion9() {
  Outcome o;
  auto r = two_proportion_test(130, 937, 23, 73);
  o.require(r.p_value >= 3e-5 && r.p_value <= 7e-5, "p = " + std::to_string(r.p_value));
  double worst = 0.0;
  for (int k = 0; k <= 800; ++k) {
    double z = k / 100.0;
    worst = std::max(worst, std::abs(normal_survival(z) - oracle::integrated_normal_tail(z)));
  }
  o.require(worst < 1e-9, "normal tail error " + std::to_string(worst));
  if (o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "z = %.4f, p = %.3e; max tail error on [0,8] = %.1e", r.z, r.p_value, worst);
    o.detail = buf;
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  auto t0 = Clock::now();
  auto dict = synth::demo_dictionary();
  auto fraction = [&](std::uint64_t seed, Rational focus) {
    synth::SynthProfile p;
    p.n_users = 2000;
    p.rng_seed = seed;
    p.focus = focus;
    auto corpus = synth::generate(p, dict);
    auto t = match_corpus(corpus, dict);
    auto prox = build_proximity(t);
    auto dist = to_distance(prox);
    auto bb = extract_backbone(dist);
    auto r = build_cohort_report({corpus, t, prox, dist, bb});
    return r.r_raw() ? r.r_raw()->to_double() : 0.0;
  };
  int wins = 0;
  double gap = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    double focused = fraction(seed, Rational(9, 10));
    double diffuse = fraction(seed, Rational(1, 5));
    wins += focused > diffuse;
    gap += focused - diffuse;
  }
  gap /= 20.0;
  double secs = seconds_since(t0);
  o.require(wins >= 18, std::to_string(wins) + "/20 focused wins");
  o.require(gap >= 0.10, "mean gap " + std::to_string(100 * gap) + " pp");
  o.require(secs < 300.0, "took " + std::to_string(secs) + " s");
  char buf[160];
  std::snprintf(buf, sizeof buf, "focused > diffuse in %d/20 pairs, mean gap %.1f pp, %.1f s", wins, 100 * gap, secs);
  if (o.pass) o.detail = buf;
  else o.detail += std::string(" (") + buf + ")";
  return o;
}

/// Random co-occurrence graph with heavy-tailed term frequencies, shaped
/// like a real knowledge graph.
DistanceGraph kg_scale_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> freq(n);
  std::exponential_distribution<double> tail(1.0);
  for (auto& f : freq) f = 11 + std::uint64_t(std::exp(tail(rng) * 1.6) * 4);
  std::vector<std::string> nodes;
  for (std::size_t v = 0; v < n; ++v) nodes.push_back(oracle::node_name(v));
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::vector<DistanceEdge> edges;
  std::uniform_int_distribution<std::uint32_t> pick(0, std::uint32_t(n - 1));
  auto add = [&](std::uint32_t a, std::uint32_t b) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) return;
    auto lo = std::min(freq[a], freq[b]);
    auto n_ij = 3 + rng() % (lo - 2);
    auto p = jaccard(n_ij, freq[a], freq[b]);
    edges.push_back({a, b, p.reciprocal() - Rational(1), CoCounts{freq[a], freq[b], n_ij}});
  };
  for (std::uint32_t v = 1; v < n; ++v) add(v, std::uniform_int_distribution<std::uint32_t>(0, v - 1)(rng));
  while (edges.size() < m) add(pick(rng), pick(rng));
  return DistanceGraph::make(std::move(nodes), std::move(edges));
}

Outcome criterion11() {
  Outcome o;
  auto g = kg_scale_graph(1686, 25235, 11);
  o.require(g.node_count() == 1686 && g.edge_count() == 25235, "wrong graph size");
  auto t0 = Clock::now();
  auto single = extract_backbone(g, {1});
  double secs = seconds_since(t0);
  o.require(secs < 60.0, "single worker took " + std::to_string(secs) + " s");
  auto t1 = Clock::now();
  auto eight = extract_backbone(g, {8});
  double secs8 = seconds_since(t1);
  std::ostringstream a, b;
  export_graph(a, g, &single, ExportFormat::Csv);
  export_graph(b, g, &eight, ExportFormat::Csv);
  o.require(a.str() == b.str(), "1-worker and 8-worker exports differ");
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu nodes, %zu edges, backbone %zu edges; 1 worker %.1f s, 8 workers %.1f s, outputs identical",
                g.node_count(), g.edge_count(), single.backbone_edges.size(), secs, secs8);
  if (o.pass) o.detail = buf;
  else o.detail += std::string(" (") + buf + ")";
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail << std::endl;
    failures += !o.pass;
  };
  auto graphs = oracle_graphs();
  report(1, [&] { return criterion1(graphs); });
  report(2, [&] { return criterion2(graphs); });
  report(3, criterion3);
  report(4, criterion4);
  report(5, criterion5);
  report(6, criterion6);
  report(7, criterion7);
  report(8, criterion8);
  report(9, criterion9);
  report(10, criterion10);
  report(11, criterion11);
  return failures == 0 ? 0 : 1;
}
