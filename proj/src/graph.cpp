#include "bitune/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "bitune/error.hpp"

namespace bitune {

NodeSet::NodeSet(std::size_t universe, std::span<const NodeId> nodes)
    : member_(universe, 0) {
  for (NodeId v : nodes) insert(v);
}

bool NodeSet::insert(NodeId v) {
  if (v >= member_.size()) {
    throw_invalid("node id " + std::to_string(v) + " outside node set of size " +
                  std::to_string(member_.size()));
  }
  if (member_[v]) return false;
  member_[v] = 1;
  ++count_;
  return true;
}

std::vector<NodeId> NodeSet::members() const {
  std::vector<NodeId> out;
  out.reserve(count_);
  for (std::size_t v = 0; v < member_.size(); ++v) {
    if (member_[v]) out.push_back(static_cast<NodeId>(v));
  }
  return out;
}

bool NodeSet::is_subset_of(const NodeSet& other) const {
  for (std::size_t v = 0; v < member_.size(); ++v) {
    if (member_[v] && !other.contains(static_cast<NodeId>(v))) return false;
  }
  return true;
}

Graph::Graph(std::size_t node_count, std::vector<Arc> arcs,
             std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) {
    labels_.reserve(node_count);
    for (std::size_t v = 0; v < node_count; ++v) labels_.push_back(std::to_string(v));
  } else if (labels_.size() != node_count) {
    throw_invalid("label count does not match node count");
  }

  for (const auto& [u, v] : arcs) {
    if (u >= node_count || v >= node_count) {
      throw_invalid("arc endpoint outside [0, " + std::to_string(node_count) + ")");
    }
  }
  std::erase_if(arcs, [](const Arc& a) { return a.first == a.second; });
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  out_offsets_.assign(node_count + 1, 0);
  in_offsets_.assign(node_count + 1, 0);
  for (const auto& [u, v] : arcs) {
    ++out_offsets_[u + 1];
    ++in_offsets_[v + 1];
  }
  for (std::size_t v = 0; v < node_count; ++v) {
    out_offsets_[v + 1] += out_offsets_[v];
    in_offsets_[v + 1] += in_offsets_[v];
  }

  out_targets_.resize(arcs.size());
  in_sources_.resize(arcs.size());
  std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  // Arcs are sorted by (u, v), so out lists come out sorted; in lists are
  // filled in increasing source order and are sorted as well.
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto& [u, v] = arcs[i];
    out_targets_[i] = v;
    in_sources_[in_fill[v]++] = u;
  }
}

bool Graph::has_arc(NodeId u, NodeId v) const {
  const auto o = out(u);
  return std::binary_search(o.begin(), o.end(), v);
}

std::vector<Arc> Graph::arcs() const {
  std::vector<Arc> out_arcs;
  out_arcs.reserve(arc_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : out(u)) out_arcs.emplace_back(u, v);
  }
  return out_arcs;
}

bool Graph::is_symmetric() const {
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : out(u)) {
      if (!has_arc(v, u)) return false;
    }
  }
  return true;
}

Graph load_edge_list(std::istream& in, bool directed) {
  std::unordered_map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  std::vector<Arc> arcs;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = ids.try_emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw_parse("line " + std::to_string(line_no) +
                  ": expected two whitespace-separated node labels");
    }
    const NodeId u = intern(a);
    const NodeId v = intern(b);
    arcs.emplace_back(u, v);
    if (!directed) arcs.emplace_back(v, u);
  }
  if (labels.empty()) throw_parse("edge list contains no edges");
  const std::size_t n = labels.size();
  return Graph(n, std::move(arcs), std::move(labels));
}

Graph load_edge_list_file(const std::string& path, bool directed) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open edge list '" + path + "'");
  try {
    return load_edge_list(in, directed);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void write_edge_list(std::ostream& out, const Graph& g, bool undirected) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.out(u)) {
      if (undirected && v < u) continue;
      out << g.label(u) << ' ' << g.label(v) << '\n';
    }
  }
}

void write_edge_list_file(const std::string& path, const Graph& g,
                          bool undirected) {
  std::ofstream out(path);
  if (!out) throw_io("cannot write '" + path + "'");
  write_edge_list(out, g, undirected);
  if (!out) throw_io("write failed for '" + path + "'");
}

Graph induced_subgraph(const Graph& g, const NodeSet& nodes) {
  if (nodes.empty()) throw_invalid("induced subgraph of an empty node set");
  if (nodes.universe() != g.node_count()) {
    throw_invalid("node set universe does not match graph size");
  }
  constexpr NodeId kAbsent = static_cast<NodeId>(-1);
  std::vector<NodeId> remap(g.node_count(), kAbsent);
  std::vector<std::string> labels;
  labels.reserve(nodes.size());
  for (NodeId v : nodes.members()) {
    remap[v] = static_cast<NodeId>(labels.size());
    labels.push_back(g.label(v));
  }
  std::vector<Arc> arcs;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (remap[u] == kAbsent) continue;
    for (NodeId v : g.out(u)) {
      if (remap[v] != kAbsent) arcs.emplace_back(remap[u], remap[v]);
    }
  }
  const std::size_t n = labels.size();
  return Graph(n, std::move(arcs), std::move(labels));
}

Graph undirected_view(const Graph& g) {
  std::vector<Arc> arcs;
  arcs.reserve(2 * g.arc_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.out(u)) {
      arcs.emplace_back(u, v);
      arcs.emplace_back(v, u);
    }
  }
  return Graph(g.node_count(), std::move(arcs), g.labels());
}

namespace {

// Component id per node over the undirected view, numbered by smallest member.
std::vector<std::uint32_t> components(const Graph& g, std::size_t& count) {
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> comp(g.node_count(), kUnset);
  std::vector<NodeId> stack;
  count = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (comp[s] != kUnset) continue;
    const auto id = static_cast<std::uint32_t>(count++);
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      auto visit = [&](NodeId v) {
        if (comp[v] == kUnset) {
          comp[v] = id;
          stack.push_back(v);
        }
      };
      for (NodeId v : g.out(u)) visit(v);
      for (NodeId v : g.in(u)) visit(v);
    }
  }
  return comp;
}

}  // namespace

NodeSet largest_component(const Graph& g) {
  std::size_t count = 0;
  const auto comp = components(g, count);
  std::vector<std::size_t> sizes(count, 0);
  for (auto c : comp) ++sizes[c];
  const auto best = static_cast<std::uint32_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  NodeSet out(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (comp[v] == best) out.insert(v);
  }
  return out;
}

bool is_weakly_connected(const Graph& g) {
  std::size_t count = 0;
  components(g, count);
  return count <= 1;
}

}  // namespace bitune
