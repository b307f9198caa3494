#include "kgcohort/graph.hpp"

#include <algorithm>
#include <numeric>

#include "kgcohort/error.hpp"

namespace kgcohort {

template <class Edge>
LabeledGraph<Edge> LabeledGraph<Edge>::make(std::vector<std::string> nodes,
                                            std::vector<Edge> edges) {
  std::vector<std::uint32_t> order(nodes.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return nodes[a] < nodes[b]; });

  LabeledGraph g;
  std::vector<std::uint32_t> remap(nodes.size());
  for (auto old : order) {
    if (g.nodes.empty() || g.nodes.back() != nodes[old])
      g.nodes.push_back(std::move(nodes[old]));
    remap[old] = static_cast<std::uint32_t>(g.nodes.size() - 1);
  }

  for (auto& e : edges) {
    if (e.i >= remap.size() || e.j >= remap.size())
      throw Error(Errc::DomainError, "edge endpoint out of range");
    e.i = remap[e.i];
    e.j = remap[e.j];
    if (e.i == e.j)
      throw Error(Errc::DomainError, "self-loop on '" + g.nodes[e.i] + "'");
    if (e.j < e.i) {
      std::swap(e.i, e.j);
      if (e.counts) std::swap(e.counts->n_i, e.counts->n_j);
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j)
      throw Error(Errc::DomainError, "duplicate edge ('" + g.nodes[edges[k].i] +
                                         "', '" + g.nodes[edges[k].j] + "')");
  g.edges = std::move(edges);
  return g;
}

template <class Edge>
std::optional<std::uint32_t> LabeledGraph<Edge>::find_node(
    std::string_view label) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), label);
  if (it == nodes.end() || *it != label) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes.begin());
}

template struct LabeledGraph<ProximityEdge>;
template struct LabeledGraph<DistanceEdge>;

namespace {

std::int64_t to_i64(std::uint64_t v) {
  if (v > std::uint64_t(INT64_MAX)) throw Error(Errc::DomainError, "count overflow");
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational jaccard(std::uint64_t n_ij, std::uint64_t n_i, std::uint64_t n_j) {
  if (n_ij > std::min(n_i, n_j))
    throw Error(Errc::DomainError, "co-occurrence exceeds a marginal count");
  std::uint64_t uni = n_i + n_j - n_ij;
  if (uni == 0) throw Error(Errc::DomainError, "jaccard of two empty supports");
  return Rational(to_i64(n_ij), to_i64(uni));
}

ProximityGraph build_proximity(const MatchTable& table,
                               const ProximityThresholds& thresholds) {
  const auto& labels = table.term_labels();
  std::vector<ProximityEdge> edges;
  std::vector<std::uint32_t> used;
  for (const auto& pc : table.pair_counts()) {
    CoCounts c{table.count(pc.a), table.count(pc.b), pc.count};
    std::uint64_t support = c.n_i + c.n_j - c.n_ij;
    if (c.n_ij == 0 || c.n_ij < thresholds.min_cooccur ||
        support <= thresholds.min_support)
      continue;
    edges.push_back({pc.a.value, pc.b.value, jaccard(c.n_ij, c.n_i, c.n_j), c});
    used.push_back(pc.a.value);
    used.push_back(pc.b.value);
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());

  // Compact to the endpoints of retained edges.
  std::vector<std::uint32_t> remap(labels.size(), UINT32_MAX);
  std::vector<std::string> nodes;
  for (auto id : used) {
    remap[id] = static_cast<std::uint32_t>(nodes.size());
    nodes.push_back(labels[id]);
  }
  for (auto& e : edges) {
    e.i = remap[e.i];
    e.j = remap[e.j];
  }
  return ProximityGraph::make(std::move(nodes), std::move(edges));
}

DistanceGraph to_distance(const ProximityGraph& g) {
  DistanceGraph out;
  out.nodes = g.nodes;
  out.edges.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    if (e.p.sign() <= 0)
      throw Error(Errc::ZeroProximityEdge,
                  "edge ('" + g.nodes[e.i] + "', '" + g.nodes[e.j] +
                      "') has non-positive proximity");
    if (e.p > Rational(1))
      throw Error(Errc::DomainError, "proximity above 1");
    out.edges.push_back({e.i, e.j, e.p.reciprocal() - Rational(1), e.counts});
  }
  return out;
}

ProximityGraph to_proximity(const DistanceGraph& g) {
  ProximityGraph out;
  out.nodes = g.nodes;
  out.edges.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    if (e.d.sign() < 0)
      throw Error(Errc::DomainError, "negative distance");
    out.edges.push_back({e.i, e.j, (e.d + Rational(1)).reciprocal(), e.counts});
  }
  return out;
}

}  // namespace kgcohort
