#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>

#include "bitune/graph.hpp"
#include "bitune/ltm.hpp"

namespace bitune {

inline constexpr std::size_t kFeatureCount = 12;

/// Column order used for CSV files and forest inputs.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "N",       "C_mean",    "C_std", "kout_mean", "kout_std", "Nout_mean",
    "Nout_std", "rho",      "E_d",   "cov",       "phi_mean", "phi_std"};

enum FeatureIndex : std::size_t {
  kFeatN,
  kFeatCMean,
  kFeatCStd,
  kFeatKoutMean,
  kFeatKoutStd,
  kFeatNoutMean,
  kFeatNoutStd,
  kFeatRho,
  kFeatEd,
  kFeatCov,
  kFeatPhiMean,
  kFeatPhiStd,
};

using FeatureVector = std::array<double, kFeatureCount>;

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Population mean and standard deviation.
MeanStd mean_std(std::span<const double> values);

/// Local clustering on the undirected view: C_i = (arcs among neighbors of
/// i) / (k_i (k_i - 1)), with C_i = 0 when k_i < 2.
MeanStd clustering_stats(const Graph& g);

/// Pearson correlation of (k_out(u), k_out(v)) over arcs u->v. Returns 0
/// when either side has zero variance. Throws with fewer than two arcs.
double assortativity(const Graph& g);

FeatureVector extract_features(const Graph& g, const ThresholdAssignment& t,
                               double cov);

void write_feature_header(std::ostream& out);
void write_feature_values(std::ostream& out, const FeatureVector& f);

}  // namespace bitune
