#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "kgcohort/error.hpp"
#include "kgcohort/graph.hpp"
#include "kgcohort/rational.hpp"

namespace kgcohort {

/// Path length as the sum of edge distances. Any replacement operator must
/// be monotone (len(a, w) >= a for w >= 0) for the single-source sweeps to
/// stay exact.
struct AdditiveLength {
  template <class W>
  W operator()(const W& path, const W& edge) const {
    return path + edge;
  }
};

/// All-pairs shortest distances d^C over connected pairs. Pairs in different
/// components have no entry.
template <class W>
class BasicClosure {
 public:
  BasicClosure() = default;
  BasicClosure(std::vector<std::uint32_t> component, std::vector<std::vector<W>> upper)
      : component_(std::move(component)), upper_(std::move(upper)) {}

  std::size_t node_count() const { return component_.size(); }

  bool connected(std::uint32_t i, std::uint32_t j) const {
    return component_.at(i) == component_.at(j);
  }

  /// d^C_ij; nullopt when unreachable. d^C_ii = 0.
  std::optional<W> distance(std::uint32_t i, std::uint32_t j) const {
    if (!connected(i, j)) return std::nullopt;
    if (i == j) return W{};
    if (j < i) std::swap(i, j);
    return upper_[i][j - i - 1];
  }

  /// Number of connected unordered pairs i < j.
  std::size_t pair_count() const {
    std::map<std::uint32_t, std::size_t> sizes;
    for (auto c : component_) ++sizes[c];
    std::size_t total = 0;
    for (auto [_, n] : sizes) total += n * (n - 1) / 2;
    return total;
  }

  const std::vector<std::uint32_t>& components() const { return component_; }

  friend bool operator==(const BasicClosure& a, const BasicClosure& b) {
    if (a.component_.size() != b.component_.size()) return false;
    for (std::uint32_t i = 0; i < a.node_count(); ++i)
      for (std::uint32_t j = i + 1; j < a.node_count(); ++j)
        if (a.distance(i, j) != b.distance(i, j)) return false;
    return true;
  }

 private:
  std::vector<std::uint32_t> component_;  // smallest node index in component
  std::vector<std::vector<W>> upper_;     // upper_[i][j - i - 1], j > i
};

using ClosureDistances = BasicClosure<Rational>;

struct ClosureOptions {
  unsigned workers = 1;
};

namespace detail {

/// Compressed adjacency of an undirected weighted graph.
template <class W>
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;
  std::vector<W> weights;

  template <class Convert>
  static Adjacency build(const DistanceGraph& g, Convert convert) {
    Adjacency a;
    const auto n = g.node_count();
    std::vector<std::size_t> degree(n + 1, 0);
    for (const auto& e : g.edges) {
      if (e.d.sign() < 0) throw Error(Errc::DomainError, "negative edge distance");
      ++degree[e.i];
      ++degree[e.j];
    }
    a.offsets.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) a.offsets[v + 1] = a.offsets[v] + degree[v];
    a.targets.resize(a.offsets[n]);
    a.weights.resize(a.offsets[n]);
    std::vector<std::size_t> fill(a.offsets.begin(), a.offsets.end() - 1);
    for (const auto& e : g.edges) {
      W w = convert(e.d);
      a.targets[fill[e.i]] = e.j;
      a.weights[fill[e.i]++] = w;
      a.targets[fill[e.j]] = e.i;
      a.weights[fill[e.j]++] = std::move(w);
    }
    return a;
  }
};

/// Single-source sweep with a binary heap and lazy deletion.
template <class W, class Length>
void dijkstra(const Adjacency<W>& adj, std::uint32_t source, const Length& length,
              std::vector<W>& dist, std::vector<char>& reached) {
  const std::size_t n = adj.offsets.size() - 1;
  dist.assign(n, W{});
  reached.assign(n, 0);
  std::vector<char> settled(n, 0);
  using Item = std::pair<W, std::uint32_t>;
  auto later = [](const Item& a, const Item& b) {
    if (a.first != b.first) return b.first < a.first;
    return b.second < a.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(later)> heap(later);
  reached[source] = 1;
  heap.emplace(W{}, source);
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    for (std::size_t k = adj.offsets[u]; k < adj.offsets[u + 1]; ++k) {
      std::uint32_t v = adj.targets[k];
      if (settled[v]) continue;
      // Any path through u is at least du long.
      if (reached[v] && !(du < dist[v])) continue;
      W candidate = length(du, adj.weights[k]);
      if (!reached[v] || candidate < dist[v]) {
        reached[v] = 1;
        dist[v] = candidate;
        heap.emplace(std::move(candidate), v);
      }
    }
  }
}

inline std::vector<std::uint32_t> components(const DistanceGraph& g) {
  std::vector<std::uint32_t> parent(g.node_count());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : g.edges) {
    auto a = find(e.i), b = find(e.j);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::uint32_t> comp(g.node_count());
  for (std::uint32_t v = 0; v < comp.size(); ++v) comp[v] = find(v);
  return comp;
}

template <class W, class Length, class Convert>
BasicClosure<W> closure(const DistanceGraph& g, const Length& length,
                        Convert convert, const ClosureOptions& options) {
  const auto n = static_cast<std::uint32_t>(g.node_count());
  auto adj = Adjacency<W>::build(g, convert);
  auto comp = components(g);
  std::vector<std::vector<W>> upper(n);

  std::atomic<std::uint32_t> next{0};
  auto worker = [&] {
    std::vector<W> dist;
    std::vector<char> reached;
    for (std::uint32_t s = next++; s < n; s = next++) {
      dijkstra(adj, s, length, dist, reached);
      auto& row = upper[s];
      row.resize(n - s - 1);
      for (std::uint32_t j = s + 1; j < n; ++j)
        if (reached[j]) row[j - s - 1] = std::move(dist[j]);
    }
  };
  unsigned workers = std::max(1u, options.workers);
  if (workers == 1 || n < 2) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return BasicClosure<W>(std::move(comp), std::move(upper));
}

}  // namespace detail

/// Exact single-source distances from `source`; unreachable nodes are
/// absent. Throws UnknownNode.
std::map<std::string, Rational> shortest_paths_from(const DistanceGraph& g,
                                                    std::string_view source);

ClosureDistances metric_closure(const DistanceGraph& g,
                                const ClosureOptions& options = {});

/// Closure under a caller-supplied path-length operator.
template <class Length>
ClosureDistances metric_closure_with(const DistanceGraph& g, const Length& length,
                                     const ClosureOptions& options = {}) {
  return detail::closure<Rational>(
      g, length, [](const Rational& d) { return d; }, options);
}

/// Metric/semi-metric split of a distance graph's edges.
template <class W>
struct BasicBackboneResult {
  /// Aligned with the input graph's edges.
  std::vector<bool> is_metric;
  /// Indices into the input graph's edges, ascending.
  std::vector<std::size_t> backbone_edges;
  std::vector<std::size_t> semi_metric_edges;
  BasicClosure<W> closure;

  /// |backbone| / |edges|; undefined for a graph without edges.
  std::optional<Rational> tau() const {
    if (is_metric.empty()) return std::nullopt;
    return Rational(static_cast<std::int64_t>(backbone_edges.size()),
                    static_cast<std::int64_t>(is_metric.size()));
  }
};

using BackboneResult = BasicBackboneResult<Rational>;
using ApproxBackboneResult = BasicBackboneResult<double>;

struct BackboneOptions {
  unsigned workers = 1;
};

/// An edge is metric iff d_ij equals d^C_ij exactly.
BackboneResult extract_backbone(const DistanceGraph& g,
                                const BackboneOptions& options = {});

/// Floating-point variant for very large graphs: metric iff
/// d_ij <= d^C_ij * (1 + rel_tol). Never used unless asked for.
ApproxBackboneResult extract_backbone_approx(const DistanceGraph& g,
                                             double rel_tol = 1e-9,
                                             const BackboneOptions& options = {});

/// Same nodes, metric edges only.
DistanceGraph backbone_subgraph(const DistanceGraph& g, const BackboneResult& bb);

/// Induced subgraph on `center` and its neighbours. With `bb`, only backbone
/// edges count, both for neighbourhood and for the induced edges.
DistanceGraph ego(const DistanceGraph& g, std::string_view center,
                  const BackboneResult* bb = nullptr);

}  // namespace kgcohort
