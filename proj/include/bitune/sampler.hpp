#pragma once

#include <cstddef>
#include <cstdint>

#include "bitune/graph.hpp"

namespace bitune {

struct SampleSpec {
  std::size_t target_size = 0;
  std::uint64_t seed = 0;
  std::size_t max_steps_factor = 100;
};

inline constexpr int kMaxAbandonedWalks = 10;

/// Random-walk snapshot: a single walk on the undirected view from a uniform
/// start node, stepping to uniform neighbors until target_size distinct nodes
/// were visited. Returns the subgraph of `g` induced by the visited nodes.
/// A walk that exceeds max_steps_factor * target_size steps is discarded and
/// a fresh walk started; after kMaxAbandonedWalks discards the call fails.
Graph random_walk_sample(const Graph& g, const SampleSpec& spec);

}  // namespace bitune
