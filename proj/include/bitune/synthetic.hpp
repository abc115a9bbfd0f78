#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "bitune/graph.hpp"
#include "bitune/rng.hpp"

namespace bitune {

enum class SwapBias { none, assortative, disassortative };

SwapBias parse_swap_bias(std::string_view name);
std::string_view swap_bias_name(SwapBias b);

struct SwapSpec {
  std::size_t attempts = 0;
  /// Extra attempts per edge of the graph being rewired.
  double per_edge = 0.0;
  SwapBias bias = SwapBias::none;
};

using Edge = std::pair<NodeId, NodeId>;

/// Undirected G(n, p) edge list, u < v.
std::vector<Edge> erdos_renyi_edges(std::size_t n, double p, Rng& rng);

/// Degree-preserving double-edge swaps in place: (a,b),(c,d) -> (a,d),(c,b),
/// rejected when a self-loop or duplicate edge would result. Biased modes
/// additionally reject swaps that do not move the degree correlation in the
/// requested direction. Returns the number of accepted swaps.
std::size_t double_edge_swaps(std::vector<Edge>& edges, std::size_t n,
                              const SwapSpec& spec, Rng& rng);

/// ER graph with mean degree k, then `swaps` double-edge swaps, reduced to
/// its largest connected component. Arcs are symmetric.
Graph generate_er_swapped(std::size_t n, double k, const SwapSpec& swaps,
                          std::uint64_t seed);

}  // namespace bitune
