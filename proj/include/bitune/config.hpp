#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bitune/forest.hpp"
#include "bitune/ltm.hpp"
#include "bitune/synthetic.hpp"

namespace bitune {

/// Settings for training-set generation and the end-to-end pipeline. Read
/// from a flat `key = value` file; '#' starts a comment. List values are
/// comma-separated.
struct ExperimentConfig {
  // Edge-list inputs.
  std::vector<std::string> graph_files;
  bool directed = false;

  // Synthetic ER graphs: every (n, k) pair gets er_count graphs. Graph i of
  // a group uses swap factor swap_factors[i % F] (times its edge count) and
  // bias swap_biases[(i / F) % B].
  std::vector<std::size_t> er_n;
  std::vector<double> er_k;
  std::size_t er_count = 0;
  std::vector<double> swap_factors{0.0};
  std::vector<SwapBias> swap_biases{SwapBias::none};

  // Instance generation: instance j uses threshold spec phi[j % P].
  std::vector<ThresholdSpec> phi{ThresholdSpec::fixed(0.5)};
  std::vector<double> coverages{0.5, 0.7, 0.9};
  std::size_t samples_per_graph = 1;
  std::size_t sample_size = 0;  // 0 or >= N: use the whole graph

  double prec = 0.01;
  double bin_width = 0.1;
  double train_fraction = 2.0 / 3.0;
  ForestParams forest;

  std::uint64_t seed = 1;
  std::string output_dir = "out";

  /// Applies one setting; throws on unknown keys or bad values. Dashes in
  /// keys are read as underscores.
  void set(const std::string& key, const std::string& value);
  void validate() const;

  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig load_file(const std::string& path);

  /// Key/value form, one setting per line; parse(to_text()) round-trips.
  std::string to_text() const;
};

}  // namespace bitune
