#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "bitune/bi.hpp"
#include "bitune/graph.hpp"
#include "bitune/ltm.hpp"

namespace bitune {

/// A simplex point on the triangle grid, held both as integer lattice units
/// (a_units + b_units + c_units == resolution) and as the derived weights.
struct GridPoint {
  int a_units = 0;
  int b_units = 0;
  int c_units = 0;
  int resolution = 1;
  BIParams params;
};

/// Lattice resolution 1/prec; throws unless 0 < prec <= 0.5 and 1/prec is
/// an integer (within 1e-9).
int grid_resolution(double prec);

/// Lattice point (a_units, b_units) at the given resolution. The weights
/// sum to exactly 1.0 in double arithmetic.
GridPoint grid_point(int a_units, int b_units, int resolution);

/// Feasible points with a in {0, 2 prec, 4 prec, ...}, b in {0, prec, ...},
/// a + b <= 1, c = 1 - a - b; lexicographic in (a, b).
std::vector<GridPoint> triangle_grid(double prec);

struct GridResult {
  std::vector<GridPoint> points;
  std::vector<std::size_t> initiators;  // parallel to points
  GridPoint best;
  std::size_t best_count = 0;
};

/// Evaluates select_initiators at every grid point. The best point is the
/// minimum count; ties go to the smallest a, then the smallest b.
GridResult grid_search(const Graph& g, const ThresholdAssignment& t, double cov,
                       double prec);

/// One greedy run per grid point serves all coverages. Result i belongs to
/// covs[i].
std::vector<GridResult> grid_search_multi(const Graph& g,
                                          const ThresholdAssignment& t,
                                          std::span<const double> covs,
                                          double prec);

/// CSV with header `a,b,c,initiators`.
void write_surface_csv(std::ostream& out, const GridResult& r);

/// Smallest seed set reaching cov, by enumerating subsets in order of size
/// (then lexicographically). Refuses graphs with more than max_n nodes.
std::vector<NodeId> brute_force_min_seeds(const Graph& g,
                                          const ThresholdAssignment& t,
                                          double cov, std::size_t max_n = 15);

}  // namespace bitune
