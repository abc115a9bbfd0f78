#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bitune {

using NodeId = std::uint32_t;
using Arc = std::pair<NodeId, NodeId>;

/// Membership set over dense node ids [0, N).
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t universe) : member_(universe, 0) {}
  NodeSet(std::size_t universe, std::span<const NodeId> nodes);

  std::size_t universe() const { return member_.size(); }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(NodeId v) const { return v < member_.size() && member_[v] != 0; }

  /// Returns false if v was already present. Throws on v >= universe.
  bool insert(NodeId v);

  /// Members in increasing id order.
  std::vector<NodeId> members() const;

  bool is_subset_of(const NodeSet& other) const;

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::vector<std::uint8_t> member_;
  std::size_t count_ = 0;
};

/// Immutable directed graph in compressed adjacency form. Node ids are
/// dense; the original external labels are kept in a side table.
///
/// Construction drops self-loops and duplicate arcs, so every instance
/// satisfies: for each arc u->v, v occurs once in out(u) and u occurs once
/// in in(v). Neighbor lists are sorted by id.
class Graph {
 public:
  Graph() = default;

  /// Builds from an arc list over ids [0, node_count). Labels default to the
  /// decimal id when `labels` is empty.
  Graph(std::size_t node_count, std::vector<Arc> arcs,
        std::vector<std::string> labels = {});

  std::size_t node_count() const { return labels_.size(); }
  std::size_t arc_count() const { return out_targets_.size(); }
  bool empty() const { return labels_.empty(); }

  std::span<const NodeId> out(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v],
            out_targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const NodeId> in(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v],
            in_sources_.data() + in_offsets_[v + 1]};
  }
  std::size_t out_degree(NodeId v) const {
    return out_offsets_[v + 1] - out_offsets_[v];
  }
  std::size_t in_degree(NodeId v) const {
    return in_offsets_[v + 1] - in_offsets_[v];
  }

  bool has_arc(NodeId u, NodeId v) const;

  /// Arcs in (source, target) lexicographic order.
  std::vector<Arc> arcs() const;

  /// True when u->v implies v->u for every arc.
  bool is_symmetric() const;

  const std::string& label(NodeId v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> in_sources_;
  std::vector<std::string> labels_;
};

/// Parses a whitespace-separated edge list. Lines starting with '#' and
/// blank lines are skipped. Labels are remapped to dense ids in first-seen
/// order. With directed == false every edge yields both arcs.
Graph load_edge_list(std::istream& in, bool directed);
Graph load_edge_list_file(const std::string& path, bool directed);

/// Writes one line per arc using original labels. For symmetric graphs
/// written with `undirected` set, each edge is written once (u < v).
void write_edge_list(std::ostream& out, const Graph& g, bool undirected);
void write_edge_list_file(const std::string& path, const Graph& g,
                          bool undirected);

/// Subgraph on `nodes` keeping every arc with both endpoints inside. New ids
/// follow increasing old id; labels carry over.
Graph induced_subgraph(const Graph& g, const NodeSet& nodes);

/// Symmetrized copy: u->v implies v->u.
Graph undirected_view(const Graph& g);

/// Connected components of the undirected view; returns the node set of
/// the largest one (lowest smallest-id on ties).
NodeSet largest_component(const Graph& g);

bool is_weakly_connected(const Graph& g);

}  // namespace bitune
