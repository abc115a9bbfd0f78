#include "bitune/features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "bitune/error.hpp"
#include "bitune/format.hpp"

namespace bitune {

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) return {};
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

MeanStd clustering_stats(const Graph& g) {
  const Graph sym = undirected_view(g);
  std::vector<double> c(sym.node_count(), 0.0);
  std::vector<std::uint8_t> mark(sym.node_count(), 0);
  for (NodeId i = 0; i < sym.node_count(); ++i) {
    const auto nbrs = sym.out(i);
    const std::size_t k = nbrs.size();
    if (k < 2) continue;
    for (NodeId j : nbrs) mark[j] = 1;
    std::size_t links = 0;
    for (NodeId j : nbrs) {
      for (NodeId w : sym.out(j)) links += mark[w];
    }
    for (NodeId j : nbrs) mark[j] = 0;
    c[i] = static_cast<double>(links) / static_cast<double>(k * (k - 1));
  }
  return mean_std(c);
}

double assortativity(const Graph& g) {
  const std::size_t m = g.arc_count();
  if (m < 2) throw_invalid("assortativity needs at least two arcs");
  double sx = 0.0, sy = 0.0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.out(u)) {
      sx += static_cast<double>(g.out_degree(u));
      sy += static_cast<double>(g.out_degree(v));
    }
  }
  const double mx = sx / static_cast<double>(m);
  const double my = sy / static_cast<double>(m);
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const double dx = static_cast<double>(g.out_degree(u)) - mx;
    for (NodeId v : g.out(u)) {
      const double dy = static_cast<double>(g.out_degree(v)) - my;
      cov += dx * dy;
      vx += dx * dx;
      vy += dy * dy;
    }
  }
  // Regular graphs: the correlation is undefined; report neutral.
  constexpr double kDegenerate = 1e-12;
  if (vx <= kDegenerate * static_cast<double>(m) ||
      vy <= kDegenerate * static_cast<double>(m)) {
    return 0.0;
  }
  return std::clamp(cov / std::sqrt(vx * vy), -1.0, 1.0);
}

FeatureVector extract_features(const Graph& g, const ThresholdAssignment& t,
                               double cov) {
  if (g.empty()) throw_invalid("features of an empty graph");
  if (t.size() != g.node_count()) {
    throw_invalid("threshold assignment does not match graph");
  }
  if (!(cov > 0.0 && cov <= 1.0)) throw_invalid("coverage must lie in (0, 1]");

  const std::size_t n = g.node_count();
  FeatureVector f{};
  f[kFeatN] = static_cast<double>(n);

  const auto clustering = clustering_stats(g);
  f[kFeatCMean] = clustering.mean;
  f[kFeatCStd] = clustering.std;

  std::vector<double> kout(n), nout(n, 0.0);
  for (NodeId v = 0; v < n; ++v) kout[v] = static_cast<double>(g.out_degree(v));
  const auto kstats = mean_std(kout);
  f[kFeatKoutMean] = kstats.mean;
  f[kFeatKoutStd] = kstats.std;

  for (NodeId v = 0; v < n; ++v) {
    const auto nbrs = g.out(v);
    if (nbrs.empty()) continue;
    double s = 0.0;
    for (NodeId w : nbrs) s += kout[w];
    nout[v] = s / static_cast<double>(nbrs.size());
  }
  const auto nstats = mean_std(nout);
  f[kFeatNoutMean] = nstats.mean;
  f[kFeatNoutStd] = nstats.std;

  f[kFeatRho] = g.arc_count() >= 2 ? assortativity(g) : 0.0;

  std::size_t undirected_edges = 0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.out(u)) {
      if (u < v || !g.has_arc(v, u)) ++undirected_edges;
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  f[kFeatEd] = pairs > 0.0 ? static_cast<double>(undirected_edges) / pairs : 0.0;

  f[kFeatCov] = cov;
  const auto phi = mean_std(t.phi);
  f[kFeatPhiMean] = phi.mean;
  f[kFeatPhiStd] = phi.std;
  return f;
}

void write_feature_header(std::ostream& out) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (i) out << ',';
    out << kFeatureNames[i];
  }
}

void write_feature_values(std::ostream& out, const FeatureVector& f) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (i) out << ',';
    out << format_double(f[i]);
  }
}

}  // namespace bitune
