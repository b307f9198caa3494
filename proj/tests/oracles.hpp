#pragma once

// Independent reference implementations used as test oracles. None of this
// shares code with the library beyond the value types.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kgcohort/graph.hpp"
#include "kgcohort/rational.hpp"

namespace oracle {

using kgcohort::DistanceEdge;
using kgcohort::DistanceGraph;
using kgcohort::Rational;
using Matrix = std::vector<std::vector<std::optional<Rational>>>;

/// Floyd-Warshall over exact rationals. Unreachable pairs stay empty.
inline Matrix floyd_warshall(const DistanceGraph& g) {
  const std::size_t n = g.node_count();
  Matrix d(n, std::vector<std::optional<Rational>>(n));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = Rational(0);
  for (const auto& e : g.edges) {
    if (!d[e.i][e.j] || e.d < *d[e.i][e.j]) d[e.i][e.j] = d[e.j][e.i] = e.d;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!d[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!d[k][j]) continue;
        Rational via = *d[i][k] + *d[k][j];
        if (!d[i][j] || via < *d[i][j]) d[i][j] = via;
      }
    }
  return d;
}

/// Shortest simple-path length between every pair by exhaustive DFS.
/// Only for graphs with a handful of nodes.
inline Matrix brute_force_paths(const DistanceGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::pair<std::size_t, Rational>>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.i].push_back({e.j, e.d});
    adj[e.j].push_back({e.i, e.d});
  }
  Matrix best(n, std::vector<std::optional<Rational>>(n));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<char> on_path(n, 0);
    std::function<void(std::size_t, Rational)> walk = [&](std::size_t v, Rational len) {
      if (!best[s][v] || len < *best[s][v]) best[s][v] = len;
      on_path[v] = 1;
      for (const auto& [w, d] : adj[v])
        if (!on_path[w]) walk(w, len + d);
      on_path[v] = 0;
    };
    walk(s, Rational(0));
  }
  return best;
}

inline std::string node_name(std::size_t k) {
  std::string s = "t";
  s += std::to_string(1000 + k);
  return s;
}

/// Random weight: small numerators and denominators so that ties between
/// direct edges and indirect paths come up regularly. Includes d = 0.
inline Rational random_weight(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(0, 12), den(1, 6);
  return Rational(num(rng), den(rng));
}

/// Random graph from Jaccard-style counts, giving the denominators seen in
/// real co-occurrence data.
inline Rational count_weight(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> nij(1, 60), extra(0, 400);
  auto n = nij(rng);
  return Rational(extra(rng) + extra(rng), n);
}

/// Connected random graph: a random spanning tree plus extra edges.
inline DistanceGraph random_connected_graph(std::mt19937_64& rng, std::size_t n,
                                            std::size_t extra,
                                            bool count_weights = false) {
  std::vector<std::string> nodes;
  for (std::size_t k = 0; k < n; ++k) nodes.push_back(node_name(k));
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<DistanceEdge> edges;
  auto add = [&](std::uint32_t a, std::uint32_t b) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    if (!pairs.insert({a, b}).second) return;
    edges.push_back({a, b, count_weights ? count_weight(rng) : random_weight(rng), std::nullopt});
  };
  for (std::uint32_t v = 1; v < n; ++v)
    add(v, std::uniform_int_distribution<std::uint32_t>(0, v - 1)(rng));
  std::uniform_int_distribution<std::uint32_t> pick(0, std::uint32_t(n - 1));
  const std::size_t max_edges = n * (n - 1) / 2;
  for (std::size_t k = 0; k < extra && edges.size() < max_edges; ++k) add(pick(rng), pick(rng));
  return DistanceGraph::make(std::move(nodes), std::move(edges));
}

/// P(Z > z) by composite Simpson integration of the standard normal density
/// over [z, z + 40] in long double.
inline double integrated_normal_tail(double z) {
  const long double a = z, b = z + 40.0L;
  const int steps = 200000;
  const long double h = (b - a) / steps;
  const long double c = 1.0L / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
  auto f = [&](long double x) { return c * std::exp(-x * x / 2.0L); };
  long double sum = f(a) + f(b);
  for (int k = 1; k < steps; ++k) sum += f(a + k * h) * ((k % 2) ? 4.0L : 2.0L);
  return static_cast<double>(sum * h / 3.0L);
}

/// Longest-match reference: among all segmentations of `tokens` into pieces
/// that are either a dictionary phrase or a single token, pick the one whose
/// sequence of piece lengths is lexicographically largest. Returns the
/// phrases used, in order.
inline std::vector<std::string> segment(const std::vector<std::string>& tokens,
                                        const std::set<std::string>& phrases) {
  const std::size_t n = tokens.size();
  auto phrase = [&](std::size_t b, std::size_t e) {
    std::string s;
    for (std::size_t k = b; k < e; ++k) s += (k > b ? " " : "") + tokens[k];
    return s;
  };
  std::vector<std::size_t> best_lengths;
  std::vector<std::string> best_used;
  std::vector<std::size_t> lengths;
  std::vector<std::string> used;
  std::function<void(std::size_t)> go = [&](std::size_t pos) {
    if (pos == n) {
      if (lengths > best_lengths) {
        best_lengths = lengths;
        best_used = used;
      }
      return;
    }
    for (std::size_t e = pos + 1; e <= n; ++e) {
      auto p = phrase(pos, e);
      bool is_phrase = phrases.contains(p);
      if (!is_phrase && e != pos + 1) continue;
      lengths.push_back(e - pos);
      if (is_phrase) used.push_back(p);
      go(e);
      if (is_phrase) used.pop_back();
      lengths.pop_back();
    }
  };
  go(0);
  return best_used;
}

}  // namespace oracle
