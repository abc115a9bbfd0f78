#include "bitune/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "bitune/error.hpp"
#include "bitune/parallel.hpp"
#include "bitune/rng.hpp"

namespace bitune {

namespace {

int bins_per_unit(double bin_width) {
  if (!(bin_width > 0.0 && bin_width <= 1.0)) {
    throw_invalid("bin width must lie in (0, 1]");
  }
  const double inv = std::round(1.0 / bin_width);
  if (std::abs(inv * bin_width - 1.0) > 1e-9) {
    throw_invalid("bin width must divide 1");
  }
  return static_cast<int>(inv);
}

double entropy(std::span<const std::uint32_t> hist, std::size_t total) {
  if (total == 0) return 0.0;
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (auto c : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

int majority(std::span<const std::uint32_t> hist) {
  return static_cast<int>(std::max_element(hist.begin(), hist.end()) - hist.begin());
}

// Minimum information gain for a split to count as an improvement.
constexpr double kMinGain = 1e-12;

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& d, const std::vector<int>& labels, int classes,
              const ForestParams& params, std::size_t mtry, Rng& rng,
              std::vector<double>& importance)
      : d_(d),
        labels_(labels),
        classes_(classes),
        params_(params),
        mtry_(mtry),
        rng_(rng),
        importance_(importance) {}

  DecisionTree build(std::vector<std::size_t> rows) {
    tree_.nodes.clear();
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
  };

  int grow(std::vector<std::size_t> rows, std::size_t depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    std::vector<std::uint32_t> hist(static_cast<std::size_t>(classes_), 0);
    for (auto r : rows) ++hist[static_cast<std::size_t>(labels_[r])];

    const bool pure = std::count_if(hist.begin(), hist.end(),
                                    [](auto c) { return c > 0; }) <= 1;
    const bool too_small = rows.size() < 2 * params_.min_leaf;
    const bool too_deep = params_.max_depth != 0 && depth >= params_.max_depth;
    Split best;
    if (!pure && !too_small && !too_deep) best = find_split(rows, hist);

    if (best.feature < 0) {
      tree_.nodes[id].histogram = std::move(hist);
      return id;
    }

    importance_[static_cast<std::size_t>(best.feature)] +=
        static_cast<double>(rows.size()) * best.gain;
    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (d_.x[r][static_cast<std::size_t>(best.feature)] <= best.threshold ? left : right)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(std::move(left), depth + 1);
    const int rt = grow(std::move(right), depth + 1);
    auto& node = tree_.nodes[id];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = rt;
    node.histogram = std::move(hist);
    return id;
  }

  // Features are visited in random order until mtry non-constant ones have
  // been scored.
  Split find_split(const std::vector<std::size_t>& rows,
                   const std::vector<std::uint32_t>& hist) {
    const std::size_t nf = d_.feature_count();
    std::vector<std::size_t> order(nf);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = nf; i > 1; --i) {
      std::swap(order[i - 1], order[rng_.index(i)]);
    }

    const std::size_t n = rows.size();
    const double parent = entropy(hist, n);
    Split best;
    std::size_t scored = 0;
    std::vector<std::pair<double, int>> column(n);
    std::vector<std::uint32_t> left(hist.size()), right(hist.size());

    for (std::size_t f : order) {
      if (scored >= mtry_) break;
      for (std::size_t i = 0; i < n; ++i) {
        column[i] = {d_.x[rows[i]][f], labels_[rows[i]]};
      }
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;
      ++scored;

      std::fill(left.begin(), left.end(), 0);
      right = hist;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto label = static_cast<std::size_t>(column[i].second);
        ++left[label];
        --right[label];
        const std::size_t nl = i + 1;
        if (column[i].first == column[i + 1].first) continue;
        if (nl < params_.min_leaf || n - nl < params_.min_leaf) continue;
        const double gain =
            parent - (static_cast<double>(nl) * entropy(left, nl) +
                      static_cast<double>(n - nl) * entropy(right, n - nl)) /
                         static_cast<double>(n);
        if (gain > best.gain + kMinGain) {
          best.feature = static_cast<int>(f);
          // The left value itself: the split then depends only on the order
          // of feature values, not their scale.
          best.threshold = column[i].first;
          best.gain = gain;
        }
      }
    }
    return best;
  }

  const Dataset& d_;
  const std::vector<int>& labels_;
  int classes_;
  const ForestParams& params_;
  std::size_t mtry_;
  Rng& rng_;
  std::vector<double>& importance_;
  DecisionTree tree_;
};

}  // namespace

int discretize(double value, double bin_width) {
  const int per_unit = bins_per_unit(bin_width);
  if (!(value >= -1e-12 && value <= 1.0 + 1e-12)) {
    throw_invalid("value to discretize must lie in [0, 1]");
  }
  const long label = std::lround(value * per_unit);
  return static_cast<int>(std::clamp<long>(label, 0, per_unit));
}

double class_value(int label, double bin_width) {
  return static_cast<double>(label) / bins_per_unit(bin_width);
}

int class_count(double bin_width) { return bins_per_unit(bin_width) + 1; }

void Dataset::validate() const {
  const int classes = class_count(bin_width);
  if (label_a.size() != x.size() || label_b.size() != x.size()) {
    throw_invalid("dataset label columns do not match row count");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != feature_names.size()) {
      throw_invalid("dataset row " + std::to_string(i) + " has " +
                    std::to_string(x[i].size()) + " features, expected " +
                    std::to_string(feature_names.size()));
    }
    for (double v : x[i]) {
      if (!std::isfinite(v)) throw_invalid("dataset row " + std::to_string(i) + " has a non-finite feature");
    }
    if (label_a[i] < 0 || label_a[i] >= classes || label_b[i] < 0 ||
        label_b[i] >= classes) {
      throw_invalid("dataset row " + std::to_string(i) + " has a label outside the bin range");
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.feature_names = feature_names;
  out.bin_width = bin_width;
  for (auto r : rows) {
    out.x.push_back(x.at(r));
    out.label_a.push_back(label_a.at(r));
    out.label_b.push_back(label_b.at(r));
  }
  return out;
}

DatasetSplit split_dataset(const Dataset& d, double train_fraction,
                           std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw_invalid("train fraction must lie in (0, 1)");
  }
  if (d.size() < 3) throw_invalid("need at least 3 rows to split");
  std::vector<std::size_t> perm(d.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[rng.index(i)]);
  }
  auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(d.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, d.size() - 1);

  DatasetSplit s;
  s.train_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test_rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  std::sort(s.train_rows.begin(), s.train_rows.end());
  std::sort(s.test_rows.begin(), s.test_rows.end());
  s.train = d.subset(s.train_rows);
  s.test = d.subset(s.test_rows);
  return s;
}

std::size_t DecisionTree::leaf_for(std::span<const double> x) const {
  std::size_t at = 0;
  while (nodes[at].feature >= 0) {
    const auto& node = nodes[at];
    at = static_cast<std::size_t>(
        x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                    : node.right);
  }
  return at;
}

int DecisionTree::predict(std::span<const double> x) const {
  return majority(nodes[leaf_for(x)].histogram);
}

TrainedForest::TrainedForest(ForestParams params,
                             std::vector<std::string> feature_names,
                             int class_count, double bin_width,
                             std::vector<DecisionTree> trees,
                             std::vector<double> importance)
    : params_(params),
      names_(std::move(feature_names)),
      classes_(class_count),
      bin_width_(bin_width),
      trees_(std::move(trees)),
      importance_(std::move(importance)) {}

Prediction TrainedForest::predict(std::span<const double> x) const {
  if (x.size() != names_.size()) {
    throw_invalid("feature vector has " + std::to_string(x.size()) +
                  " entries, forest expects " + std::to_string(names_.size()));
  }
  if (trees_.empty()) throw_invalid("forest has no trees");
  std::vector<std::uint32_t> votes(static_cast<std::size_t>(classes_), 0);
  for (const auto& t : trees_) ++votes[static_cast<std::size_t>(t.predict(x))];
  Prediction p;
  p.label = majority(votes);
  p.value = class_value(p.label, bin_width_);
  return p;
}

TrainedForest train_forest(const Dataset& d, Target target,
                           const ForestParams& params, std::uint64_t seed) {
  if (d.size() == 0) throw_invalid("cannot train on an empty dataset");
  if (d.feature_count() == 0) throw_invalid("dataset has no features");
  if (params.tree_count == 0) throw_invalid("forest needs at least one tree");
  if (params.min_leaf == 0) throw_invalid("min_leaf must be at least 1");
  d.validate();

  const auto& labels = d.labels(target);
  const int classes = class_count(d.bin_width);
  const std::size_t nf = d.feature_count();
  std::size_t mtry = params.features_per_split;
  if (mtry == 0) mtry = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(nf))));
  mtry = std::min(mtry, nf);

  std::vector<DecisionTree> trees(params.tree_count);
  std::vector<std::vector<double>> gains(params.tree_count, std::vector<double>(nf, 0.0));
  parallel_for(params.tree_count, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    std::vector<std::size_t> rows(d.size());
    for (auto& r : rows) r = rng.index(d.size());
    TreeBuilder builder(d, labels, classes, params, mtry, rng, gains[t]);
    trees[t] = builder.build(std::move(rows));
  });

  std::vector<double> importance(nf, 0.0);
  for (const auto& g : gains) {
    for (std::size_t f = 0; f < nf; ++f) importance[f] += g[f];
  }
  const double total = std::accumulate(importance.begin(), importance.end(), 0.0);
  for (auto& v : importance) {
    v = total > 0.0 ? v / total : 1.0 / static_cast<double>(nf);
  }
  return TrainedForest(params, d.feature_names, classes, d.bin_width,
                       std::move(trees), std::move(importance));
}

// Model file: JSON document. Nodes are stored as
// [feature, threshold, left, right, [histogram...]].
void TrainedForest::save(std::ostream& out) const {
  nlohmann::json j;
  j["format"] = "bitune-forest";
  j["version"] = 1;
  j["params"] = {{"tree_count", params_.tree_count},
                 {"min_leaf", params_.min_leaf},
                 {"max_depth", params_.max_depth},
                 {"features_per_split", params_.features_per_split}};
  j["feature_names"] = names_;
  j["class_count"] = classes_;
  j["bin_width"] = bin_width_;
  j["importance"] = importance_;
  auto& trees = j["trees"] = nlohmann::json::array();
  for (const auto& t : trees_) {
    auto nodes = nlohmann::json::array();
    for (const auto& n : t.nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.histogram});
    }
    trees.push_back(std::move(nodes));
  }
  out << j.dump() << '\n';
}

TrainedForest TrainedForest::load(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("format") != "bitune-forest" || j.at("version") != 1) {
      throw_parse("not a forest model (format/version mismatch)");
    }
    ForestParams params;
    const auto& p = j.at("params");
    params.tree_count = p.at("tree_count").get<std::size_t>();
    params.min_leaf = p.at("min_leaf").get<std::size_t>();
    params.max_depth = p.at("max_depth").get<std::size_t>();
    params.features_per_split = p.at("features_per_split").get<std::size_t>();
    auto names = j.at("feature_names").get<std::vector<std::string>>();
    const int classes = j.at("class_count").get<int>();
    const double width = j.at("bin_width").get<double>();
    auto importance = j.at("importance").get<std::vector<double>>();

    std::vector<DecisionTree> trees;
    for (const auto& jt : j.at("trees")) {
      DecisionTree t;
      for (const auto& jn : jt) {
        TreeNode n;
        n.feature = jn.at(0).get<int>();
        n.threshold = jn.at(1).get<double>();
        n.left = jn.at(2).get<int>();
        n.right = jn.at(3).get<int>();
        n.histogram = jn.at(4).get<std::vector<std::uint32_t>>();
        t.nodes.push_back(std::move(n));
      }
      const auto count = static_cast<int>(t.nodes.size());
      // Children always follow their parent, which rules out cycles.
      for (int id = 0; id < count; ++id) {
        const auto& n = t.nodes[static_cast<std::size_t>(id)];
        const bool leaf = n.feature < 0;
        const bool bad_children =
            !leaf && (n.left <= id || n.left >= count || n.right <= id || n.right >= count);
        if (bad_children || n.feature >= static_cast<int>(names.size()) ||
            n.histogram.size() != static_cast<std::size_t>(classes)) {
          throw_parse("malformed tree node in forest model");
        }
      }
      if (t.nodes.empty()) throw_parse("empty tree in forest model");
      trees.push_back(std::move(t));
    }
    if (importance.size() != names.size()) {
      throw_parse("importance length does not match feature count");
    }
    return TrainedForest(params, std::move(names), classes, width,
                         std::move(trees), std::move(importance));
  } catch (const nlohmann::json::exception& e) {
    throw_parse(std::string("forest model: ") + e.what());
  }
}

void TrainedForest::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw_io("cannot write '" + path + "'");
  save(out);
  if (!out) throw_io("write failed for '" + path + "'");
}

TrainedForest TrainedForest::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open model '" + path + "'");
  return load(in);
}

}  // namespace bitune
