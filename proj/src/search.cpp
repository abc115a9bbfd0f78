#include "bitune/search.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "bitune/error.hpp"
#include "bitune/format.hpp"
#include "bitune/parallel.hpp"

namespace bitune {

int grid_resolution(double prec) {
  if (!(prec > 0.0 && prec <= 0.5)) throw_invalid("grid precision must lie in (0, 0.5]");
  const double inv = 1.0 / prec;
  const double rounded = std::round(inv);
  if (std::abs(rounded * prec - 1.0) > 1e-9) {
    throw_invalid("grid precision " + format_double(prec) + " does not divide 1");
  }
  return static_cast<int>(rounded);
}

GridPoint grid_point(int a_units, int b_units, int resolution) {
  if (resolution <= 0 || a_units < 0 || b_units < 0 || a_units + b_units > resolution) {
    throw_invalid("grid point outside the simplex");
  }
  const double dn = static_cast<double>(resolution);
  GridPoint p;
  p.a_units = a_units;
  p.b_units = b_units;
  p.c_units = resolution - a_units - b_units;
  p.resolution = resolution;
  // Chosen so that (a + b) + c == 1 holds exactly in double arithmetic and c
  // never dips below zero on the hypotenuse.
  p.params.a = a_units / dn;
  p.params.b = p.c_units == 0 ? 1.0 - p.params.a : b_units / dn;
  p.params.c = 1.0 - (p.params.a + p.params.b);
  if (p.params.a + p.params.b + p.params.c != 1.0 || p.params.c < 0.0) {
    throw Error(ErrorCode::internal, "grid point off the simplex");
  }
  return p;
}

std::vector<GridPoint> triangle_grid(double prec) {
  const int n = grid_resolution(prec);
  std::vector<GridPoint> points;
  for (int a_units = 0; a_units <= n; a_units += 2) {
    for (int b_units = 0; a_units + b_units <= n; ++b_units) {
      points.push_back(grid_point(a_units, b_units, n));
    }
  }
  return points;
}

namespace {

GridResult pick_best(const std::vector<GridPoint>& points,
                     std::vector<std::size_t> counts) {
  GridResult r;
  r.points = points;
  r.initiators = std::move(counts);
  // Points are in lexicographic (a, b) order, so the first minimum is the
  // smallest-a-then-smallest-b optimum.
  const auto it = std::min_element(r.initiators.begin(), r.initiators.end());
  const auto idx = static_cast<std::size_t>(it - r.initiators.begin());
  r.best = r.points[idx];
  r.best_count = *it;
  return r;
}

}  // namespace

std::vector<GridResult> grid_search_multi(const Graph& g,
                                          const ThresholdAssignment& t,
                                          std::span<const double> covs,
                                          double prec) {
  if (covs.empty()) throw_invalid("grid search needs at least one coverage");
  for (double cov : covs) required_active(cov, g.node_count());
  const auto points = triangle_grid(prec);

  std::vector<std::vector<std::size_t>> per_point(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    per_point[i] = initiators_for_coverages(g, t, points[i].params, covs);
  });

  std::vector<GridResult> results;
  results.reserve(covs.size());
  for (std::size_t c = 0; c < covs.size(); ++c) {
    std::vector<std::size_t> counts(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) counts[i] = per_point[i][c];
    results.push_back(pick_best(points, std::move(counts)));
  }
  return results;
}

GridResult grid_search(const Graph& g, const ThresholdAssignment& t, double cov,
                       double prec) {
  const double covs[] = {cov};
  return std::move(grid_search_multi(g, t, covs, prec).front());
}

void write_surface_csv(std::ostream& out, const GridResult& r) {
  out << "a,b,c,initiators\n";
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& p = r.points[i].params;
    out << format_double(p.a) << ',' << format_double(p.b) << ','
        << format_double(p.c) << ',' << r.initiators[i] << '\n';
  }
}

std::vector<NodeId> brute_force_min_seeds(const Graph& g,
                                          const ThresholdAssignment& t,
                                          double cov, std::size_t max_n) {
  const std::size_t n = g.node_count();
  if (n > max_n) {
    throw Error(ErrorCode::limit_exceeded,
                "brute-force search refuses graphs with more than " +
                    std::to_string(max_n) + " nodes");
  }
  const std::size_t need = required_active(cov, n);

  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<NodeId> subset(k);
    for (std::size_t i = 0; i < k; ++i) subset[i] = static_cast<NodeId>(i);
    for (;;) {
      Cascade c(g, t);
      c.seed_all(subset);
      if (c.active_count() >= need) return subset;

      // Next k-combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && subset[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++subset[i - 1];
      for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  throw Error(ErrorCode::internal, "no seed set reaches the coverage");
}

}  // namespace bitune
