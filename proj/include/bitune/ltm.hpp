#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "bitune/graph.hpp"

namespace bitune {

/// Resistance of a node with no in-neighbors: it can only become active by
/// being seeded.
inline constexpr std::uint32_t kUnreachable =
    std::numeric_limits<std::uint32_t>::max();

/// Distribution of fractional thresholds phi. Text form:
/// `fixed:PHI`, `uniform:LO:HI`, `normal:MEAN:STD` (normal is truncated to
/// (0, 1] by rejection).
struct ThresholdSpec {
  enum class Kind { fixed, uniform, truncated_normal };

  Kind kind = Kind::fixed;
  double p1 = 0.5;
  double p2 = 0.0;

  static ThresholdSpec fixed(double phi) { return {Kind::fixed, phi, 0.0}; }
  static ThresholdSpec uniform(double lo, double hi) {
    return {Kind::uniform, lo, hi};
  }
  static ThresholdSpec normal(double mean, double stddev) {
    return {Kind::truncated_normal, mean, stddev};
  }

  static ThresholdSpec parse(const std::string& text);
  std::string to_string() const;

  /// Throws when no value in (0, 1] can be produced.
  void validate() const;

  friend bool operator==(const ThresholdSpec&, const ThresholdSpec&) = default;
};

/// Integer resistance needed for a node with in-degree k_in and threshold
/// phi: max(1, ceil(phi * k_in)), or kUnreachable when k_in == 0.
std::uint32_t resistance_for(double phi, std::size_t k_in);

struct ThresholdAssignment {
  std::vector<double> phi;
  std::vector<std::uint32_t> resistance;

  std::size_t size() const { return phi.size(); }
};

ThresholdAssignment assign_thresholds(const Graph& g, const ThresholdSpec& spec,
                                      std::uint64_t seed);

/// Builds an assignment from explicit per-node phi values.
ThresholdAssignment thresholds_from_phi(const Graph& g, std::vector<double> phi);

struct CascadeResult {
  NodeSet active;
  /// Seeds first (in the given order), then nodes in activation order.
  std::vector<NodeId> activation_order;
  double coverage = 0.0;
};

/// Number of active nodes needed to reach coverage `cov` on n nodes.
std::size_t required_active(double cov, std::size_t n);

/// Mutable cascade state over a shared graph. Nodes are activated with
/// `seed`, which propagates the threshold rule to its fixed point before
/// returning. Used directly by greedy seed selection so that each pick only
/// pays for the incremental spread.
class Cascade {
 public:
  Cascade(const Graph& g, const ThresholdAssignment& t);

  /// Activates v (no-op if already active) and propagates. Returns the
  /// number of newly active nodes, including v.
  std::size_t seed(NodeId v);

  /// Marks every seed active, then propagates once. Seeds lead the
  /// activation order.
  std::size_t seed_all(std::span<const NodeId> seeds);

  bool is_active(NodeId v) const { return active_[v] != 0; }
  std::size_t active_count() const { return order_.size(); }
  /// Active in-neighbor count of v.
  std::uint32_t pressure(NodeId v) const { return pressure_[v]; }

  /// Remaining active in-neighbors v needs; 0 for active nodes and
  /// kUnreachable for nodes with no in-neighbors.
  std::uint32_t residual_resistance(NodeId v) const;

  /// Count of inactive out-neighbors of v.
  std::uint32_t residual_out_degree(NodeId v) const {
    return residual_out_[v];
  }

  const std::vector<NodeId>& activation_order() const { return order_; }
  CascadeResult result() const;

 private:
  void activate(NodeId v);
  void propagate();

  const Graph* g_;
  const ThresholdAssignment* t_;
  std::vector<std::uint8_t> active_;
  std::vector<std::uint32_t> pressure_;
  std::vector<std::uint32_t> residual_out_;
  std::vector<NodeId> order_;
  std::vector<NodeId> queue_;
};

CascadeResult run_cascade(const Graph& g, const ThresholdAssignment& t,
                          std::span<const NodeId> seeds);

}  // namespace bitune
