#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "bitune/graph.hpp"
#include "bitune/ltm.hpp"

namespace testkit {

using bitune::Arc;
using bitune::Graph;
using bitune::NodeId;

inline Graph undirected(std::size_t n, const std::vector<Arc>& edges) {
  std::vector<Arc> arcs;
  for (auto [u, v] : edges) {
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  return Graph(n, std::move(arcs));
}

// A=0, B=1, C=2 form a triangle; D=3 hangs off A.
inline Graph triangle_pendant() {
  return undirected(4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}});
}

inline Graph cycle(std::size_t n) {
  std::vector<Arc> e;
  for (std::size_t i = 0; i < n; ++i)
    e.emplace_back(NodeId(i), NodeId((i + 1) % n));
  return undirected(n, e);
}

inline Graph path(std::size_t n) {
  std::vector<Arc> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(NodeId(i), NodeId(i + 1));
  return undirected(n, e);
}

inline Graph star(std::size_t leaves) {
  std::vector<Arc> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, NodeId(i));
  return undirected(leaves + 1, e);
}

inline Graph complete(std::size_t n) {
  std::vector<Arc> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(NodeId(i), NodeId(j));
  return undirected(n, e);
}

// Random graph with arc probability p; directed graphs draw each ordered pair.
inline Graph random_graph(std::mt19937_64& rng, std::size_t n, double p, bool directed) {
  std::bernoulli_distribution coin(p);
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!directed && j < i) continue;
      if (!coin(rng)) continue;
      arcs.emplace_back(NodeId(i), NodeId(j));
      if (!directed) arcs.emplace_back(NodeId(j), NodeId(i));
    }
  return Graph(n, std::move(arcs));
}

inline std::vector<double> random_phi(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> phi(n);
  for (auto& x : phi) x = u(rng);
  return phi;
}

// Round-synchronous reference cascade written directly from the threshold
// rule with the fractional comparison, no queues and no residual counters.
inline std::vector<bool> synchronous_cascade(const Graph& g, const std::vector<double>& phi,
                                             const std::vector<NodeId>& seeds) {
  std::size_t n = g.node_count();
  std::vector<bool> active(n, false);
  for (NodeId s : seeds) active[s] = true;
  for (;;) {
    std::vector<bool> next = active;
    bool changed = false;
    for (NodeId v = 0; v < n; ++v) {
      if (active[v] || g.in_degree(v) == 0) continue;
      std::size_t count = 0;
      for (NodeId u : g.in(v))
        if (active[u]) ++count;
      if (double(count) >= phi[v] * double(g.in_degree(v)) - 1e-12) {
        next[v] = true;
        changed = true;
      }
    }
    active = next;
    if (!changed) return active;
  }
}

inline std::size_t count_true(const std::vector<bool>& v) {
  return std::size_t(std::count(v.begin(), v.end(), true));
}

// Smallest seed set size reaching `need` active nodes, by trying every subset.
inline std::size_t exhaustive_min_seeds(const Graph& g, const std::vector<double>& phi,
                                        std::size_t need) {
  std::size_t n = g.node_count();
  std::size_t best = n;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::size_t size = std::size_t(__builtin_popcount(mask));
    if (size >= best) continue;
    std::vector<NodeId> seeds;
    for (NodeId v = 0; v < n; ++v)
      if (mask & (1u << v)) seeds.push_back(v);
    if (count_true(synchronous_cascade(g, phi, seeds)) >= need) best = size;
  }
  return best;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  double n = double(x.size()), mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace testkit
