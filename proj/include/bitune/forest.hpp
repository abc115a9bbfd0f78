#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bitune {

/// Class index of `value` in [0, 1] for bins of width `bin_width`:
/// round(value / bin_width). Throws for values outside [0, 1] or widths that
/// do not divide 1.
int discretize(double value, double bin_width);
double class_value(int label, double bin_width);
int class_count(double bin_width);

enum class Target { a, b };

/// Training rows: features plus the two discretized targets.
struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> x;
  std::vector<int> label_a;
  std::vector<int> label_b;
  double bin_width = 0.1;

  std::size_t size() const { return x.size(); }
  std::size_t feature_count() const { return feature_names.size(); }
  const std::vector<int>& labels(Target t) const {
    return t == Target::a ? label_a : label_b;
  }

  /// Throws if rows disagree with feature_names or labels are out of range.
  void validate() const;

  Dataset subset(std::span<const std::size_t> rows) const;
};

struct DatasetSplit {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_rows;  // indices into the original
  std::vector<std::size_t> test_rows;
};

/// Seeded shuffle, then the first round(train_fraction * D) rows train.
DatasetSplit split_dataset(const Dataset& d, double train_fraction,
                           std::uint64_t seed);

struct ForestParams {
  std::size_t tree_count = 100;
  std::size_t min_leaf = 2;
  std::size_t max_depth = 0;           // 0: unlimited
  std::size_t features_per_split = 0;  // 0: ceil(sqrt(n))
};

/// Flat node array; node 0 is the root. Leaves have feature == -1.
/// Samples with x[feature] <= threshold go left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<std::uint32_t> histogram;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  /// Leaf index reached by x.
  std::size_t leaf_for(std::span<const double> x) const;
  /// Majority class of the leaf reached by x (lowest class on ties).
  int predict(std::span<const double> x) const;
};

struct Prediction {
  int label = 0;
  double value = 0.0;
};

class TrainedForest {
 public:
  TrainedForest() = default;
  TrainedForest(ForestParams params, std::vector<std::string> feature_names,
                int class_count, double bin_width,
                std::vector<DecisionTree> trees,
                std::vector<double> importance);

  /// Majority vote over trees; ties go to the lower class.
  Prediction predict(std::span<const double> x) const;

  /// Normalized cumulative entropy reduction per feature, in feature order.
  const std::vector<double>& importance() const { return importance_; }

  const ForestParams& params() const { return params_; }
  const std::vector<std::string>& feature_names() const { return names_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }
  int class_count() const { return classes_; }
  double bin_width() const { return bin_width_; }

  void save(std::ostream& out) const;
  static TrainedForest load(std::istream& in);
  void save_file(const std::string& path) const;
  static TrainedForest load_file(const std::string& path);

 private:
  ForestParams params_;
  std::vector<std::string> names_;
  int classes_ = 0;
  double bin_width_ = 0.1;
  std::vector<DecisionTree> trees_;
  std::vector<double> importance_;
};

/// Each tree grows on a bootstrap resample of the training rows; every split
/// maximizes information gain over a random subset of features. Trees are
/// seeded from (seed, tree index) and may train in parallel.
TrainedForest train_forest(const Dataset& d, Target target,
                           const ForestParams& params, std::uint64_t seed);

}  // namespace bitune
