#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgcohort/matcher.hpp"
#include "kgcohort/rational.hpp"

namespace kgcohort {

/// Presence counts behind an edge: n_i, n_j and the joint count n_ij.
struct CoCounts {
  std::uint64_t n_i = 0;
  std::uint64_t n_j = 0;
  std::uint64_t n_ij = 0;
  friend bool operator==(const CoCounts&, const CoCounts&) = default;
};

// Node indices refer to the graph's `nodes` vector; edges always have i < j.

struct ProximityEdge {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  Rational p;
  std::optional<CoCounts> counts;
  friend bool operator==(const ProximityEdge&, const ProximityEdge&) = default;
};

struct DistanceEdge {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  Rational d;
  std::optional<CoCounts> counts;
  friend bool operator==(const DistanceEdge&, const DistanceEdge&) = default;
};

/// Undirected simple graph with node labels sorted ascending and edges
/// sorted by (i, j). Built through `make`, which canonicalizes and checks.
template <class Edge>
struct LabeledGraph {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;

  /// Sorts and deduplicates labels, remaps and orients edges, sorts them.
  /// Throws DomainError on self-loops, unknown indices or duplicate pairs.
  static LabeledGraph make(std::vector<std::string> nodes, std::vector<Edge> edges);

  std::optional<std::uint32_t> find_node(std::string_view label) const;
  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;
};

using ProximityGraph = LabeledGraph<ProximityEdge>;
using DistanceGraph = LabeledGraph<DistanceEdge>;

/// n_ij / (n_i + n_j - n_ij). Throws DomainError unless
/// n_ij <= min(n_i, n_j) and the union is positive.
Rational jaccard(std::uint64_t n_ij, std::uint64_t n_i, std::uint64_t n_j);

struct ProximityThresholds {
  std::uint64_t min_cooccur = 3;   // keep when n_ij >= min_cooccur
  std::uint64_t min_support = 10;  // keep when n_i + n_j - n_ij > min_support
};

ProximityGraph build_proximity(const MatchTable& table,
                               const ProximityThresholds& thresholds = {});

/// d = 1/p - 1. Throws ZeroProximityEdge for p = 0.
DistanceGraph to_distance(const ProximityGraph& g);
/// p = 1/(d + 1).
ProximityGraph to_proximity(const DistanceGraph& g);

}  // namespace kgcohort
