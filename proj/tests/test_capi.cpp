// Exercises the shared library through its C interface only.
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bitune/bitune.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* file) const { return (path / file).string(); }
};

const char* kTrianglePendant = "A B\nA C\nB C\nA D\n";

}  // namespace

TEST_CASE("status strings and version") {
  CHECK(std::strlen(bt_version()) > 0);
  CHECK(std::string(bt_status_string(BT_OK)) != std::string(bt_status_string(BT_ERR_PARSE)));
  CHECK(bt_heuristic_name(0) == std::string("tuned-BI"));
  CHECK(bt_heuristic_name(BT_HEURISTIC_COUNT) == nullptr);
  CHECK(bt_feature_name(BT_FEATURE_COUNT - 1) == std::string("phi_std"));
  CHECK(bt_feature_name(BT_FEATURE_COUNT) == nullptr);
}

TEST_CASE("graph handles and errors") {
  bt_graph* g = nullptr;
  REQUIRE(bt_graph_load_text(kTrianglePendant, 0, &g) == BT_OK);
  CHECK(bt_graph_node_count(g) == 4);
  CHECK(bt_graph_arc_count(g) == 8);
  CHECK(bt_graph_is_connected(g) == 1);
  CHECK(bt_graph_label(g, 3) == std::string("D"));
  CHECK(bt_graph_label(g, 4) == nullptr);

  uint32_t keep[] = {1, 2};
  bt_graph* sub = nullptr;
  REQUIRE(bt_graph_induced(g, keep, 2, &sub) == BT_OK);
  CHECK(bt_graph_arc_count(sub) == 2);
  bt_graph_free(sub);

  bt_graph* bad = nullptr;
  CHECK(bt_graph_load_text("x y z\n", 0, &bad) == BT_ERR_PARSE);
  CHECK(bad == nullptr);
  CHECK(std::string(bt_last_error()).find("line 1") != std::string::npos);
  CHECK(bt_graph_load("/nonexistent/graph.edges", 0, &bad) == BT_ERR_IO);
  CHECK(bt_graph_load_text(kTrianglePendant, 0, nullptr) == BT_ERR_INVALID_ARGUMENT);
  bt_graph_free(g);
  bt_graph_free(nullptr);
}

TEST_CASE("thresholds, cascade and selection") {
  bt_graph* g = nullptr;
  REQUIRE(bt_graph_load_text(kTrianglePendant, 0, &g) == BT_OK);
  bt_thresholds* t = nullptr;
  REQUIRE(bt_thresholds_assign(g, "fixed:0.5", 1, &t) == BT_OK);
  uint32_t r = 0;
  REQUIRE(bt_thresholds_resistance(t, 0, &r) == BT_OK);
  CHECK(r == 2);
  CHECK(bt_thresholds_resistance(t, 9, &r) == BT_ERR_INVALID_ARGUMENT);

  uint32_t seed = 0;
  size_t active = 0;
  REQUIRE(bt_cascade_run(g, t, &seed, 1, &active) == BT_OK);
  CHECK(active == 4);

  double p[3];
  REQUIRE(bt_preset("RD", p) == BT_OK);
  CHECK(p[0] == 0.5);
  CHECK(bt_preset("nope", p) == BT_ERR_INVALID_ARGUMENT);

  size_t count = 0;
  CHECK(bt_select_initiators(g, t, p[0], p[1], p[2], 1.0, nullptr, 0, &count) ==
        BT_ERR_BUFFER_TOO_SMALL);
  CHECK(count == 1);
  uint32_t seeds[4];
  REQUIRE(bt_select_initiators(g, t, p[0], p[1], p[2], 1.0, seeds, 4, &count) == BT_OK);
  CHECK(seeds[0] == 0);
  CHECK(bt_select_initiators(g, t, 0.5, 0.6, 0.1, 1.0, seeds, 4, &count) ==
        BT_ERR_INVALID_ARGUMENT);

  REQUIRE(bt_min_seeds_brute_force(g, t, 1.0, 15, seeds, 4, &count) == BT_OK);
  CHECK(count == 1);
  CHECK(bt_min_seeds_brute_force(g, t, 1.0, 3, seeds, 4, &count) == BT_ERR_LIMIT);

  CHECK(bt_thresholds_assign(g, "fixed:2", 1, &t) == BT_ERR_INVALID_ARGUMENT);
  bt_thresholds_free(t);
  bt_graph_free(g);
}

TEST_CASE("grid search and surface file") {
  TempDir dir("bitune_capi_grid");
  size_t points = 0;
  REQUIRE(bt_grid_point_count(0.01, &points) == BT_OK);
  CHECK(points == 2601);
  CHECK(bt_grid_point_count(0.3, &points) == BT_ERR_INVALID_ARGUMENT);

  bt_graph* g = nullptr;
  REQUIRE(bt_graph_generate_er_swap(60, 4, 1, "disassortative", 3, &g) == BT_OK);
  bt_thresholds* t = nullptr;
  REQUIRE(bt_thresholds_assign(g, "normal:0.5:0.2", 3, &t) == BT_OK);
  double best[3];
  size_t best_count = 0;
  std::string surface = dir / "surface.csv";
  REQUIRE(bt_grid_search(g, t, 0.9, 0.05, surface.c_str(), best, &best_count) == BT_OK);
  CHECK(best[0] + best[1] + best[2] == doctest::Approx(1.0));
  std::ifstream in(surface);
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 121);
  bt_thresholds_free(t);
  bt_graph_free(g);
}

TEST_CASE("features, training, prediction and save/load") {
  TempDir dir("bitune_capi_forest");
  bt_config* cfg = nullptr;
  REQUIRE(bt_config_new(&cfg) == BT_OK);
  const char* settings[][2] = {{"er_n", "40"},        {"er_k", "4"},
                               {"er_count", "4"},     {"phi", "fixed:0.5, normal:0.5:0.3"},
                               {"coverages", "0.5, 0.9"}, {"prec", "0.1"},
                               {"trees", "15"},       {"seed", "5"}};
  for (auto& kv : settings) REQUIRE(bt_config_set(cfg, kv[0], kv[1]) == BT_OK);
  std::string out = dir.path.string();
  REQUIRE(bt_config_set(cfg, "output_dir", out.c_str()) == BT_OK);
  CHECK(bt_config_set(cfg, "bogus", "1") == BT_ERR_INVALID_ARGUMENT);

  size_t need = 0;
  CHECK(bt_config_text(cfg, nullptr, 0, &need) == BT_ERR_BUFFER_TOO_SMALL);
  std::vector<char> text(need);
  REQUIRE(bt_config_text(cfg, text.data(), text.size(), &need) == BT_OK);
  CHECK(std::string(text.data()).find("er_count = 4") != std::string::npos);

  size_t rows = 0, skipped = 0;
  REQUIRE(bt_training_set_build(cfg, &rows, &skipped) == BT_OK);
  CHECK(rows + 2 * skipped == 8);

  bt_dataset* d = nullptr;
  REQUIRE(bt_dataset_load_training_csv((dir / "training.csv").c_str(), 0.1, &d) == BT_OK);
  CHECK(bt_dataset_rows(d) == rows);
  bt_forest_params fp;
  bt_forest_params_default(&fp);
  CHECK(fp.tree_count == 100);
  fp.tree_count = 15;
  bt_forest *fa = nullptr, *fb = nullptr;
  REQUIRE(bt_forest_train(d, 'a', &fp, 1, &fa) == BT_OK);
  REQUIRE(bt_forest_train(d, 'b', &fp, 2, &fb) == BT_OK);
  CHECK(bt_forest_train(d, 'c', &fp, 2, &fb) == BT_ERR_INVALID_ARGUMENT);
  CHECK(bt_forest_feature_count(fa) == BT_FEATURE_COUNT);

  double imp[BT_FEATURE_COUNT];
  REQUIRE(bt_forest_importance(fa, imp, BT_FEATURE_COUNT) == BT_OK);
  double sum = 0;
  for (double v : imp) sum += v;
  CHECK(sum == doctest::Approx(1.0));

  std::string model = dir / "a.json";
  REQUIRE(bt_forest_save(fa, model.c_str()) == BT_OK);
  bt_forest* loaded = nullptr;
  REQUIRE(bt_forest_load(model.c_str(), &loaded) == BT_OK);

  bt_graph* g = nullptr;
  REQUIRE(bt_graph_generate_er_swap(50, 4, 0, "none", 9, &g) == BT_OK);
  bt_thresholds* t = nullptr;
  REQUIRE(bt_thresholds_assign(g, "normal:0.5:0.1", 2, &t) == BT_OK);
  double f[BT_FEATURE_COUNT];
  REQUIRE(bt_features_extract(g, t, 0.7, f) == BT_OK);
  int l1 = 0, l2 = 0;
  double v1 = 0, v2 = 0;
  REQUIRE(bt_forest_predict(fa, f, BT_FEATURE_COUNT, &l1, &v1) == BT_OK);
  REQUIRE(bt_forest_predict(loaded, f, BT_FEATURE_COUNT, &l2, &v2) == BT_OK);
  CHECK(l1 == l2);
  CHECK(v1 == v2);
  CHECK(bt_forest_predict(fa, f, 3, &l1, &v1) == BT_ERR_INVALID_ARGUMENT);

  std::string feat_csv = dir / "features.csv";
  REQUIRE(bt_features_write_csv(f, feat_csv.c_str()) == BT_OK);
  size_t predicted = 0;
  REQUIRE(bt_predict_csv(fa, fb, feat_csv.c_str(), (dir / "pred.csv").c_str(), &predicted) ==
          BT_OK);
  CHECK(predicted == 1);

  double am = 0, bm = 0;
  REQUIRE(bt_predict_from_samples(g, fa, fb, "fixed:0.5", 0.9, 4, 20, 3, nullptr, &am, &bm) ==
          BT_OK);
  CHECK(am >= 0.0);
  CHECK(am <= 1.0);

  bt_eval_summary s;
  REQUIRE(bt_evaluate_graph(g, t, 0.7, 0.1, fa, fb, (dir / "eval.csv").c_str(), &s) == BT_OK);
  CHECK(s.test_rows == 1);
  for (size_t h = 0; h < BT_HEURISTIC_COUNT; ++h) CHECK(s.mean_initiators[1] <= s.mean_initiators[h]);

  bt_thresholds_free(t);
  bt_graph_free(g);
  bt_forest_free(loaded);
  bt_forest_free(fa);
  bt_forest_free(fb);
  bt_dataset_free(d);
  bt_config_free(cfg);
}

TEST_CASE("pipeline through the C interface") {
  TempDir dir("bitune_capi_pipeline");
  std::string cfg_path = dir / "exp.cfg";
  {
    std::ofstream c(cfg_path);
    c << "er_n = 40\ner_k = 4\ner_count = 6\nphi = fixed:0.5, normal:0.5:0.2\n"
      << "coverages = 0.5, 0.9\nprec = 0.1\ntrees = 10\nseed = 2\n"
      << "output_dir = " << dir.path.string() << "\n";
  }
  bt_config* cfg = nullptr;
  REQUIRE(bt_config_load(cfg_path.c_str(), &cfg) == BT_OK);
  bt_eval_summary s;
  REQUIRE(bt_pipeline_run(cfg, &s) == BT_OK);
  CHECK(s.test_rows + s.train_rows == 12 - 2 * s.skipped);
  CHECK(s.within_02 >= 0.0);
  CHECK(s.within_02 <= 1.0);
  for (auto name : {"training.csv", "model_a.json", "model_b.json", "predictions.csv",
                    "report.csv", "summary.txt"})
    CHECK(fs::exists(dir.path / name));
  bt_config_free(cfg);
  CHECK(bt_config_load("/nonexistent.cfg", &cfg) == BT_ERR_IO);
}
