#include "bitune/sampler.hpp"

#include "bitune/error.hpp"
#include "bitune/rng.hpp"

namespace bitune {

Graph random_walk_sample(const Graph& g, const SampleSpec& spec) {
  if (g.empty()) throw_invalid("cannot sample an empty graph");
  if (spec.target_size < 2) throw_invalid("sample size must be at least 2");
  if (spec.target_size > g.node_count()) {
    throw_invalid("sample size " + std::to_string(spec.target_size) +
                  " exceeds node count " + std::to_string(g.node_count()));
  }
  if (spec.max_steps_factor == 0) throw_invalid("max_steps_factor must be positive");

  const Graph walkable = g.is_symmetric() ? Graph() : undirected_view(g);
  const Graph& view = g.is_symmetric() ? g : walkable;
  const std::size_t max_steps = spec.max_steps_factor * spec.target_size;

  for (int attempt = 0; attempt < kMaxAbandonedWalks; ++attempt) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
    NodeSet visited(g.node_count());
    NodeId at = static_cast<NodeId>(rng.index(g.node_count()));
    visited.insert(at);
    for (std::size_t step = 0;
         step < max_steps && visited.size() < spec.target_size; ++step) {
      const auto nbrs = view.out(at);
      if (nbrs.empty()) break;  // isolated start node
      at = nbrs[rng.index(nbrs.size())];
      visited.insert(at);
    }
    if (visited.size() == spec.target_size) return induced_subgraph(g, visited);
  }
  throw Error(ErrorCode::unreachable,
              "random walk failed to reach " + std::to_string(spec.target_size) +
                  " distinct nodes after " + std::to_string(kMaxAbandonedWalks) +
                  " walks");
}

}  // namespace bitune
