#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"

#include "bitune/error.hpp"
#include "bitune/forest.hpp"

using namespace bitune;

namespace {

// Twelve noise features in [0, 1]; column 11 plays the role of phi_std.
Dataset noise_dataset(std::size_t rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset d;
  for (int f = 0; f < 12; ++f) d.feature_names.push_back("f" + std::to_string(f));
  d.bin_width = 0.1;
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<double> x(12);
    for (auto& v : x) v = u(rng);
    d.x.push_back(x);
    d.label_a.push_back(0);
    d.label_b.push_back(0);
  }
  return d;
}

Dataset separable(std::size_t rows, std::uint64_t seed) {
  Dataset d = noise_dataset(rows, seed);
  for (std::size_t i = 0; i < rows; ++i) {
    d.x[i][11] *= 0.4;
    d.label_a[i] = d.x[i][11] > 0.2 ? 1 : 0;
    d.label_b[i] = d.label_a[i] ? 7 : 3;
  }
  return d;
}

Dataset xor_data(std::size_t rows, std::uint64_t seed) {
  Dataset d = noise_dataset(rows, seed);
  d.feature_names.resize(2);
  for (auto& x : d.x) x.resize(2);
  for (std::size_t i = 0; i < rows; ++i) {
    bool p = d.x[i][0] > 0.5, q = d.x[i][1] > 0.5;
    d.label_a[i] = (p != q) ? 1 : 0;
  }
  return d;
}

double accuracy(const TrainedForest& f, const Dataset& d, Target t) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < d.size(); ++i) ok += f.predict(d.x[i]).label == d.labels(t)[i];
  return double(ok) / double(d.size());
}

std::size_t argmax(const std::vector<double>& v) {
  return std::size_t(std::max_element(v.begin(), v.end()) - v.begin());
}

double entropy(const std::vector<std::uint32_t>& h) {
  double n = std::accumulate(h.begin(), h.end(), 0.0), e = 0;
  for (auto c : h)
    if (c) e -= double(c) / n * std::log2(double(c) / n);
  return e;
}

double total(const std::vector<std::uint32_t>& h) { return std::accumulate(h.begin(), h.end(), 0.0); }

}  // namespace

TEST_CASE("discretization") {
  CHECK(discretize(0.36, 0.1) == 4);
  CHECK(class_value(4, 0.1) == doctest::Approx(0.4));
  CHECK(discretize(0.0, 0.1) == 0);
  CHECK(discretize(1.0, 0.1) == 10);
  CHECK(class_count(0.1) == 11);
  CHECK(class_count(0.25) == 5);
  CHECK_THROWS_AS(discretize(1.2, 0.1), Error);
  CHECK_THROWS_AS(discretize(-0.1, 0.1), Error);
  CHECK_THROWS_AS(class_count(0.3), Error);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double v = u(rng);
    CHECK(std::abs(v - class_value(discretize(v, 0.1), 0.1)) <= 0.05 + 1e-12);
  }
}

TEST_CASE("split sizes, determinism and partition") {
  Dataset d = noise_dataset(9, 2);
  auto s = split_dataset(d, 2.0 / 3.0, 5);
  CHECK(s.train.size() == 6);
  CHECK(s.test.size() == 3);
  auto again = split_dataset(d, 2.0 / 3.0, 5);
  CHECK(again.train_rows == s.train_rows);
  std::multiset<std::size_t> all(s.train_rows.begin(), s.train_rows.end());
  all.insert(s.test_rows.begin(), s.test_rows.end());
  CHECK(all == std::multiset<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8});
  for (std::size_t i = 0; i < s.train_rows.size(); ++i) CHECK(s.train.x[i] == d.x[s.train_rows[i]]);
  CHECK_THROWS_AS(split_dataset(noise_dataset(2, 1), 0.5, 1), Error);
  CHECK_THROWS_AS(split_dataset(d, 1.0, 1), Error);
}

TEST_CASE("constant labels") {
  Dataset d = noise_dataset(50, 3);
  for (auto& l : d.label_a) l = 6;
  auto f = train_forest(d, Target::a, {}, 1);
  for (auto& row : d.x) CHECK(f.predict(row).label == 6);
  for (double w : f.importance()) CHECK(w == doctest::Approx(1.0 / 12.0));
  CHECK(f.predict(d.x[0]).value == doctest::Approx(0.6));
}

TEST_CASE("single-leaf trees vote their label") {
  std::vector<DecisionTree> trees(5);
  for (auto& t : trees) {
    TreeNode leaf;
    leaf.histogram.assign(11, 0);
    leaf.histogram[3] = 4;
    t.nodes.push_back(leaf);
  }
  TrainedForest f({}, {"x"}, 11, 0.1, trees, {1.0});
  CHECK(f.predict(std::vector<double>{0.7}).label == 3);
  CHECK_THROWS_AS(f.predict(std::vector<double>{0.7, 0.1}), Error);
}

TEST_CASE("vote ties go to the lower class") {
  std::vector<DecisionTree> trees(2);
  for (int i = 0; i < 2; ++i) {
    TreeNode leaf;
    leaf.histogram.assign(11, 0);
    leaf.histogram[i == 0 ? 8 : 2] = 1;
    trees[std::size_t(i)].nodes.push_back(leaf);
  }
  TrainedForest f({}, {"x"}, 11, 0.1, trees, {1.0});
  CHECK(f.predict(std::vector<double>{0.0}).label == 2);
}

TEST_CASE("separable benchmark") {
  Dataset train = separable(200, 10), test = separable(200, 11);
  auto f = train_forest(train, Target::a, {}, 4);
  CHECK(accuracy(f, test, Target::a) >= 0.95);
  CHECK(accuracy(f, train, Target::a) >= 0.99);
  CHECK(argmax(f.importance()) == 11);
  CHECK(f.importance()[11] > 0.5);
  auto fb = train_forest(train, Target::b, {}, 4);
  CHECK(accuracy(fb, test, Target::b) >= 0.95);
}

TEST_CASE("xor benchmark") {
  Dataset train = xor_data(200, 20), test = xor_data(200, 21);
  auto f = train_forest(train, Target::a, {}, 6);
  CHECK(accuracy(f, test, Target::a) >= 0.9);
}

TEST_CASE("single feature carries all importance") {
  Dataset d;
  d.feature_names = {"only"};
  std::mt19937_64 rng(4);
  for (int i = 0; i < 60; ++i) {
    double x = double(rng() % 1000) / 1000.0;
    d.x.push_back({x});
    d.label_a.push_back(x > 0.5 ? 2 : 9);
    d.label_b.push_back(0);
  }
  auto f = train_forest(d, Target::a, {}, 2);
  CHECK(f.importance()[0] == doctest::Approx(1.0));
}

TEST_CASE("property: trees respect bootstrap size, min leaf and positive gain") {
  Dataset d = separable(120, 30);
  for (int i = 0; i < 120; i += 3) d.label_a[std::size_t(i)] = i % 11;  // add noise
  ForestParams p;
  p.tree_count = 20;
  p.min_leaf = 3;
  auto f = train_forest(d, Target::a, p, 8);
  double imp = std::accumulate(f.importance().begin(), f.importance().end(), 0.0);
  CHECK(imp == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& t : f.trees()) {
    CHECK(total(t.nodes[0].histogram) == 120);
    for (const auto& n : t.nodes) {
      if (n.feature < 0) continue;
      const auto& l = t.nodes[std::size_t(n.left)].histogram;
      const auto& r = t.nodes[std::size_t(n.right)].histogram;
      CHECK(total(l) >= 3);
      CHECK(total(r) >= 3);
      CHECK(total(l) + total(r) == total(n.histogram));
      double after = (total(l) * entropy(l) + total(r) * entropy(r)) / total(n.histogram);
      CHECK(after < entropy(n.histogram) - 1e-12);
    }
  }
}

TEST_CASE("property: monotone rescaling of a feature does not change predictions") {
  Dataset d = separable(150, 40);
  for (std::size_t i = 0; i < d.size(); ++i) d.label_b[i] = int(d.x[i][3] * 10.0 + d.x[i][11] * 5) % 11;
  Dataset scaled = d;
  auto warp = [](double v) { return std::exp(3.0 * v) + 100.0; };
  for (auto& row : scaled.x) {
    row[3] = warp(row[3]);
    row[11] = row[11] * row[11] * row[11];
  }
  for (Target t : {Target::a, Target::b}) {
    auto f1 = train_forest(d, t, {}, 12);
    auto f2 = train_forest(scaled, t, {}, 12);
    CHECK(f1.importance() == f2.importance());
    Dataset probe = noise_dataset(300, 41);
    for (auto& row : probe.x) {
      auto moved = row;
      moved[3] = warp(moved[3]);
      moved[11] = row[11] * row[11] * row[11];
      CHECK(f1.predict(row).label == f2.predict(moved).label);
    }
  }
}

TEST_CASE("determinism and round trip") {
  Dataset d = separable(100, 50);
  auto f1 = train_forest(d, Target::b, {}, 77);
  auto f2 = train_forest(d, Target::b, {}, 77);
  std::ostringstream s1, s2;
  f1.save(s1);
  f2.save(s2);
  CHECK(s1.str() == s2.str());
  auto f3 = train_forest(d, Target::b, {}, 78);
  std::ostringstream s3;
  f3.save(s3);
  CHECK(s1.str() != s3.str());

  std::istringstream in(s1.str());
  auto loaded = TrainedForest::load(in);
  std::ostringstream s4;
  loaded.save(s4);
  CHECK(s4.str() == s1.str());
  CHECK(loaded.importance() == f1.importance());
  Dataset probe = noise_dataset(200, 51);
  for (auto& row : probe.x) CHECK(loaded.predict(row).label == f1.predict(row).label);
}

TEST_CASE("corrupt model files are rejected") {
  for (std::string bad : {"", "{}", "[1,2]", R"({"format":"bitune-forest","version":9})"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(TrainedForest::load(in), Error);
  }
  Dataset d = separable(40, 60);
  std::ostringstream out;
  train_forest(d, Target::a, {}, 1).save(out);
  std::string text = out.str();
  auto pos = text.find("\"trees\":[[");
  REQUIRE(pos != std::string::npos);
  std::string looped = text;
  text.insert(pos + 10, "[99,0.5,7,8,[1]],");
  // A node whose child points back at the root.
  looped.insert(pos + 10, "[0,0.5,0,0,[0,0,0,0,0,0,0,0,0,0,0]],");
  std::istringstream in2(looped);
  CHECK_THROWS_AS(TrainedForest::load(in2), Error);
  std::istringstream in(text);
  CHECK_THROWS_AS(TrainedForest::load(in), Error);
}

TEST_CASE("dataset validation") {
  Dataset d = noise_dataset(5, 1);
  d.label_a[2] = 11;
  CHECK_THROWS_AS(d.validate(), Error);
  Dataset e = noise_dataset(5, 1);
  e.x[1].pop_back();
  CHECK_THROWS_AS(e.validate(), Error);
  CHECK_THROWS_AS(train_forest(Dataset{}, Target::a, {}, 1), Error);
}
