#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "kgcohort/backbone.hpp"
#include "kgcohort/error.hpp"

using namespace kgcohort;

namespace {

DistanceGraph triangle(Rational ab, Rational bc, Rational ac) {
  return DistanceGraph::make({"a", "b", "c"}, {{0, 1, ab, std::nullopt},
                                               {1, 2, bc, std::nullopt},
                                               {0, 2, ac, std::nullopt}});
}

std::vector<std::string> edge_names(const DistanceGraph& g, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto k : idx) out.push_back(g.nodes[g.edges[k].i] + g.nodes[g.edges[k].j]);
  return out;
}

}  // namespace

TEST_SUITE("backbone") {
  TEST_CASE("shortest paths from a source") {
    auto path = DistanceGraph::make({"a", "b", "c", "z"}, {{0, 1, Rational(1), std::nullopt},
                                                           {1, 2, Rational(1), std::nullopt}});
    auto sp = shortest_paths_from(path, "a");
    CHECK(sp == std::map<std::string, Rational>{{"a", 0}, {"b", 1}, {"c", 2}});
    CHECK_FALSE(sp.contains("z"));

    auto t = triangle(1, 1, 3);
    CHECK(shortest_paths_from(t, "a") == std::map<std::string, Rational>{{"a", 0}, {"b", 1}, {"c", 2}});
    try {
      shortest_paths_from(t, "nope");
      FAIL("expected UnknownNode");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::UnknownNode);
    }
  }

  TEST_CASE("closure examples") {
    auto single = DistanceGraph::make({"a", "b"}, {{0, 1, Rational(2), std::nullopt}});
    CHECK(metric_closure(single).distance(0, 1) == Rational(2));
    auto t = triangle(1, 1, 3);
    auto c = metric_closure(t);
    CHECK(c.distance(0, 2) == Rational(2));
    CHECK(c.distance(2, 0) == Rational(2));
    CHECK(c.distance(1, 1) == Rational(0));
    auto empty = metric_closure(DistanceGraph{});
    CHECK(empty.node_count() == 0);
    CHECK(empty.pair_count() == 0);
  }

  TEST_CASE("triangle with a semi-metric edge") {
    auto t = triangle(1, 1, 3);
    auto bb = extract_backbone(t);
    CHECK(edge_names(t, bb.backbone_edges) == std::vector<std::string>{"ab", "bc"});
    CHECK(edge_names(t, bb.semi_metric_edges) == std::vector<std::string>{"ac"});
    CHECK(bb.tau() == Rational(2, 3));
  }

  TEST_CASE("tie is metric") {
    auto bb = extract_backbone(triangle(1, 1, 2));
    CHECK(bb.backbone_edges.size() == 3);
    CHECK(bb.tau() == Rational(1));
  }

  TEST_CASE("tie through zero-distance edges") {
    auto bb = extract_backbone(triangle(0, 0, 0));
    CHECK(bb.tau() == Rational(1));
    auto bb2 = extract_backbone(triangle(0, 0, Rational(1, 1000)));
    CHECK(bb2.tau() == Rational(2, 3));
  }

  TEST_CASE("trees keep every edge") {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 50; ++k) {
      auto tree = oracle::random_connected_graph(rng, 2 + rng() % 30, 0);
      CHECK(extract_backbone(tree).tau() == Rational(1));
    }
  }

  TEST_CASE("empty graph has undefined tau") {
    auto bb = extract_backbone(DistanceGraph{});
    CHECK_FALSE(bb.tau().has_value());
  }

  TEST_CASE("closure matches brute-force path enumeration") {
    std::mt19937_64 rng(77);
    for (int k = 0; k < 60; ++k) {
      auto g = oracle::random_connected_graph(rng, 2 + rng() % 6, rng() % 10);
      auto expect = oracle::brute_force_paths(g);
      auto c = metric_closure(g);
      for (std::uint32_t i = 0; i < g.node_count(); ++i)
        for (std::uint32_t j = 0; j < g.node_count(); ++j) CHECK(c.distance(i, j) == expect[i][j]);
    }
  }

  TEST_CASE("closure and classification against Floyd-Warshall") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 40; ++k) {
      // Two components so unreachable pairs are exercised.
      auto a = oracle::random_connected_graph(rng, 2 + rng() % 20, rng() % 40, k % 2);
      auto b = oracle::random_connected_graph(rng, 2 + rng() % 10, rng() % 20, k % 2);
      std::vector<std::string> nodes = a.nodes;
      std::vector<DistanceEdge> edges = a.edges;
      const auto off = std::uint32_t(a.node_count());
      for (const auto& n : b.nodes) nodes.push_back("z" + n);
      for (auto e : b.edges) {
        e.i += off;
        e.j += off;
        edges.push_back(e);
      }
      auto g = DistanceGraph::make(nodes, edges);
      auto fw = oracle::floyd_warshall(g);
      auto bb = extract_backbone(g, {k % 2 ? 3u : 1u});
      for (std::uint32_t i = 0; i < g.node_count(); ++i)
        for (std::uint32_t j = 0; j < g.node_count(); ++j) CHECK(bb.closure.distance(i, j) == fw[i][j]);
      CHECK(bb.backbone_edges.size() + bb.semi_metric_edges.size() == g.edge_count());
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const auto& edge = g.edges[e];
        CHECK(bb.is_metric[e] == (edge.d == *fw[edge.i][edge.j]));
        if (!bb.is_metric[e]) CHECK(edge.d > *fw[edge.i][edge.j]);
      }
      auto sub = backbone_subgraph(g, bb);
      CHECK(metric_closure(sub) == bb.closure);
      CHECK(metric_closure(sub).components() == bb.closure.components());
      CHECK(extract_backbone(sub).tau() == Rational(1));
    }
  }

  TEST_CASE("worker count does not change results") {
    std::mt19937_64 rng(5);
    auto g = oracle::random_connected_graph(rng, 120, 900, true);
    auto one = extract_backbone(g, {1});
    for (unsigned w : {2u, 8u}) {
      auto many = extract_backbone(g, {w});
      CHECK(many.is_metric == one.is_metric);
      CHECK(many.closure == one.closure);
    }
  }

  TEST_CASE("generalized length seam") {
    // Path length as the maximum edge on the path gives the ultrametric closure.
    struct MaxLength {
      Rational operator()(const Rational& path, const Rational& edge) const {
        return path < edge ? edge : path;
      }
    };
    auto t = triangle(1, 2, 3);
    auto c = metric_closure_with(t, MaxLength{});
    CHECK(c.distance(0, 2) == Rational(2));
    CHECK(metric_closure_with(t, AdditiveLength{}) == metric_closure(t));
  }

  TEST_CASE("approximate mode agrees on well-separated weights") {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 20; ++k) {
      auto g = oracle::random_connected_graph(rng, 30, 120, true);
      auto exact = extract_backbone(g);
      auto approx = extract_backbone_approx(g);
      CHECK(approx.is_metric == exact.is_metric);
    }
    auto tie = extract_backbone_approx(triangle(Rational(1, 10), Rational(2, 10), Rational(3, 10)));
    CHECK(tie.backbone_edges.size() == 3);
  }

  TEST_CASE("ego networks") {
    auto star = DistanceGraph::make({"c", "l1", "l2", "l3", "l4"},
                                    {{0, 1, Rational(1), std::nullopt}, {0, 2, Rational(1), std::nullopt},
                                     {0, 3, Rational(1), std::nullopt}, {0, 4, Rational(1), std::nullopt}});
    CHECK(ego(star, "c") == star);

    auto t = triangle(1, 1, 3);
    auto bb = extract_backbone(t);
    auto e = ego(t, "a", &bb);
    CHECK(e.nodes == std::vector<std::string>{"a", "b"});
    REQUIRE(e.edge_count() == 1);
    CHECK(e.edges[0].d == Rational(1));
    CHECK(ego(t, "a").edge_count() == 3);

    auto iso = DistanceGraph::make({"a", "b", "z"}, {{0, 1, Rational(1), std::nullopt}});
    auto lone = ego(iso, "z");
    CHECK(lone.nodes == std::vector<std::string>{"z"});
    CHECK(lone.edge_count() == 0);
    CHECK_THROWS_AS(ego(iso, "missing"), Error);
  }
}
