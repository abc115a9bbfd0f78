#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bitune/graph.hpp"
#include "bitune/ltm.hpp"

namespace bitune {

/// Weights on the probability simplex: a scales residual resistance, b the
/// residual out-degree, c the spread through out-neighbors one step away
/// from activation.
struct BIParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  /// Throws unless a, b, c >= 0 and |a + b + c - 1| <= 1e-9.
  static BIParams make(double a, double b, double c);
  /// c = 1 - a - b.
  static BIParams from_ab(double a, double b);
  /// Clamps negative entries to zero and rescales onto the simplex.
  static BIParams normalized(double a, double b, double c);

  friend bool operator==(const BIParams&, const BIParams&) = default;
};

enum class Preset { res, deg, rd, ci_tm };

inline constexpr Preset kAllPresets[] = {Preset::res, Preset::deg, Preset::rd,
                                         Preset::ci_tm};

BIParams preset(Preset p);
/// Accepts "res", "deg", "RD", "CI-TM" (case-insensitive).
Preset parse_preset(std::string_view name);
std::string_view preset_name(Preset p);

/// Score assigned to nodes that are already active.
inline constexpr double kInactiveScoreFloor =
    -std::numeric_limits<double>::infinity();

/// Balanced Index for every node against the residual cascade state.
/// Inactive nodes score a * r~ + b * k~out + c * sum over inactive
/// out-neighbors j with r~_j == 1 of (k~out_j - 1). Nodes without
/// in-neighbors take r~ = 0 in their own score. Active nodes score -inf.
std::vector<double> bi_scores(const Graph& g, const Cascade& state,
                              const BIParams& p);

struct SelectionResult {
  std::vector<NodeId> seeds;
  CascadeResult cascade;
};

/// Adaptive greedy selection: repeatedly seed the inactive node with the
/// highest score (lowest id among ties), propagate, and rescore, until the
/// active fraction reaches cov.
SelectionResult select_initiators(const Graph& g, const ThresholdAssignment& t,
                                  const BIParams& p, double cov);

/// Runs one greedy selection up to the largest coverage in `covs` and
/// returns, for each entry, the number of seeds at which that coverage was
/// first reached. The pick sequence does not depend on the target, so this
/// equals calling select_initiators once per coverage.
std::vector<std::size_t> initiators_for_coverages(const Graph& g,
                                                  const ThresholdAssignment& t,
                                                  const BIParams& p,
                                                  std::span<const double> covs);

}  // namespace bitune
