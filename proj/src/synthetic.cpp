#include "bitune/synthetic.hpp"

#include <cmath>
#include <unordered_set>

#include "bitune/error.hpp"

namespace bitune {

namespace {

std::uint64_t edge_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

SwapBias parse_swap_bias(std::string_view name) {
  if (name == "none") return SwapBias::none;
  if (name == "assortative") return SwapBias::assortative;
  if (name == "disassortative") return SwapBias::disassortative;
  throw_invalid("unknown swap bias '" + std::string(name) +
                "' (expected none, assortative or disassortative)");
}

std::string_view swap_bias_name(SwapBias b) {
  switch (b) {
    case SwapBias::none:
      return "none";
    case SwapBias::assortative:
      return "assortative";
    case SwapBias::disassortative:
      return "disassortative";
  }
  return "?";
}

std::vector<Edge> erdos_renyi_edges(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) edges.emplace_back(u, v);
    }
  }
  return edges;
}

std::size_t double_edge_swaps(std::vector<Edge>& edges, std::size_t n,
                              const SwapSpec& spec, Rng& rng) {
  const std::size_t m = edges.size();
  const std::size_t attempts =
      spec.attempts + static_cast<std::size_t>(std::llround(spec.per_edge * static_cast<double>(m)));
  if (m < 2 || attempts == 0) return 0;

  std::vector<std::size_t> degree(n, 0);
  std::unordered_set<std::uint64_t> present;
  present.reserve(2 * m);
  for (const auto& [u, v] : edges) {
    ++degree[u];
    ++degree[v];
    present.insert(edge_key(u, v));
  }

  std::size_t accepted = 0;
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    const std::size_t i = rng.index(m);
    const std::size_t j = rng.index(m);
    if (i == j) continue;
    const auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (rng.index(2) == 1) std::swap(c, d);

    // (a,b),(c,d) -> (a,d),(c,b)
    if (a == d || c == b) continue;
    if (present.count(edge_key(a, d)) || present.count(edge_key(c, b))) continue;

    if (spec.bias != SwapBias::none) {
      // Change in the sum of endpoint-degree products over edges; with the
      // degree sequence fixed its sign is the sign of the change in the
      // degree correlation.
      const auto ka = static_cast<long long>(degree[a]);
      const auto kb = static_cast<long long>(degree[b]);
      const auto kc = static_cast<long long>(degree[c]);
      const auto kd = static_cast<long long>(degree[d]);
      const long long delta = ka * kd + kc * kb - ka * kb - kc * kd;
      if (spec.bias == SwapBias::assortative && delta <= 0) continue;
      if (spec.bias == SwapBias::disassortative && delta >= 0) continue;
    }

    present.erase(edge_key(a, b));
    present.erase(edge_key(c, d));
    present.insert(edge_key(a, d));
    present.insert(edge_key(c, b));
    edges[i] = {std::min(a, d), std::max(a, d)};
    edges[j] = {std::min(c, b), std::max(c, b)};
    ++accepted;
  }
  return accepted;
}

Graph generate_er_swapped(std::size_t n, double k, const SwapSpec& swaps,
                          std::uint64_t seed) {
  if (n < 10) throw_invalid("ER generation needs at least 10 nodes");
  if (!(k > 0.0 && k < static_cast<double>(n) - 1.0)) {
    throw_invalid("mean degree must lie in (0, N-1)");
  }
  Rng rng(seed);
  auto edges = erdos_renyi_edges(n, k / static_cast<double>(n - 1), rng);
  double_edge_swaps(edges, n, swaps, rng);

  std::vector<Arc> arcs;
  arcs.reserve(2 * edges.size());
  for (const auto& [u, v] : edges) {
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  const Graph full(n, std::move(arcs));
  return induced_subgraph(full, largest_component(full));
}

}  // namespace bitune
