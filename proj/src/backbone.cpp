#include "kgcohort/backbone.hpp"

namespace kgcohort {

namespace {

const Rational& identity(const Rational& d) { return d; }

}  // namespace

std::map<std::string, Rational> shortest_paths_from(const DistanceGraph& g,
                                                    std::string_view source) {
  auto s = g.find_node(source);
  if (!s) throw Error(Errc::UnknownNode, "unknown node '" + std::string(source) + "'");
  auto adj = detail::Adjacency<Rational>::build(g, identity);
  std::vector<Rational> dist;
  std::vector<char> reached;
  detail::dijkstra(adj, *s, AdditiveLength{}, dist, reached);
  std::map<std::string, Rational> out;
  for (std::size_t v = 0; v < dist.size(); ++v)
    if (reached[v]) out.emplace(g.nodes[v], std::move(dist[v]));
  return out;
}

ClosureDistances metric_closure(const DistanceGraph& g, const ClosureOptions& options) {
  return detail::closure<Rational>(g, AdditiveLength{}, identity, options);
}

BackboneResult extract_backbone(const DistanceGraph& g,
                                const BackboneOptions& options) {
  BackboneResult result;
  result.closure = metric_closure(g, {options.workers});
  result.is_metric.resize(g.edges.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    // d^C_ij <= d_ij always holds; equality (ties included) is metric.
    bool metric = *result.closure.distance(e.i, e.j) == e.d;
    result.is_metric[k] = metric;
    (metric ? result.backbone_edges : result.semi_metric_edges).push_back(k);
  }
  return result;
}

ApproxBackboneResult extract_backbone_approx(const DistanceGraph& g, double rel_tol,
                                             const BackboneOptions& options) {
  ApproxBackboneResult result;
  result.closure = detail::closure<double>(
      g, AdditiveLength{}, [](const Rational& d) { return d.to_double(); },
      {options.workers});
  result.is_metric.resize(g.edges.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    double closure = *result.closure.distance(e.i, e.j);
    bool metric = e.d.to_double() <= closure * (1.0 + rel_tol);
    result.is_metric[k] = metric;
    (metric ? result.backbone_edges : result.semi_metric_edges).push_back(k);
  }
  return result;
}

DistanceGraph backbone_subgraph(const DistanceGraph& g, const BackboneResult& bb) {
  DistanceGraph out;
  out.nodes = g.nodes;
  for (auto k : bb.backbone_edges) out.edges.push_back(g.edges[k]);
  return out;
}

DistanceGraph ego(const DistanceGraph& g, std::string_view center,
                  const BackboneResult* bb) {
  auto c = g.find_node(center);
  if (!c) throw Error(Errc::UnknownNode, "unknown node '" + std::string(center) + "'");
  if (bb && bb->is_metric.size() != g.edges.size())
    throw Error(Errc::DomainError, "backbone result does not belong to this graph");
  auto usable = [&](std::size_t k) { return !bb || bb->is_metric[k]; };

  std::vector<char> member(g.node_count(), 0);
  member[*c] = 1;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    if (!usable(k)) continue;
    if (e.i == *c) member[e.j] = 1;
    if (e.j == *c) member[e.i] = 1;
  }

  std::vector<std::uint32_t> remap(g.node_count(), UINT32_MAX);
  DistanceGraph out;
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    if (!member[v]) continue;
    remap[v] = static_cast<std::uint32_t>(out.nodes.size());
    out.nodes.push_back(g.nodes[v]);
  }
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    if (usable(k) && member[e.i] && member[e.j])
      out.edges.push_back({remap[e.i], remap[e.j], e.d, e.counts});
  }
  return out;
}

}  // namespace kgcohort
