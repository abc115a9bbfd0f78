// Command-line front end. Talks to the library only through bitune.h.

#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bitune/bitune.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct GraphDeleter {
  void operator()(bt_graph* g) const { bt_graph_free(g); }
};
struct ThresholdsDeleter {
  void operator()(bt_thresholds* t) const { bt_thresholds_free(t); }
};
struct ForestDeleter {
  void operator()(bt_forest* f) const { bt_forest_free(f); }
};
struct DatasetDeleter {
  void operator()(bt_dataset* d) const { bt_dataset_free(d); }
};
struct ConfigDeleter {
  void operator()(bt_config* c) const { bt_config_free(c); }
};
using GraphPtr = std::unique_ptr<bt_graph, GraphDeleter>;
using ThresholdsPtr = std::unique_ptr<bt_thresholds, ThresholdsDeleter>;
using ForestPtr = std::unique_ptr<bt_forest, ForestDeleter>;
using DatasetPtr = std::unique_ptr<bt_dataset, DatasetDeleter>;
using ConfigPtr = std::unique_ptr<bt_config, ConfigDeleter>;

// Thrown to unwind after a failed library call; the message is printed once
// in main.
struct Failure {
  std::string message;
};

void check(bt_status status) {
  if (status != BT_OK) {
    throw Failure{std::string(bt_status_string(status)) + ": " + bt_last_error()};
  }
}

GraphPtr load_graph(const std::string& path, bool directed) {
  bt_graph* g = nullptr;
  check(bt_graph_load(path.c_str(), directed ? 1 : 0, &g));
  return GraphPtr(g);
}

ThresholdsPtr assign(const bt_graph* g, const std::string& spec, uint64_t seed) {
  bt_thresholds* t = nullptr;
  check(bt_thresholds_assign(g, spec.c_str(), seed, &t));
  return ThresholdsPtr(t);
}

ForestPtr load_forest(const std::string& path) {
  bt_forest* f = nullptr;
  check(bt_forest_load(path.c_str(), &f));
  return ForestPtr(f);
}

void print_summary(const bt_eval_summary& s) {
  std::printf("test rows %zu, train rows %zu, skipped %zu, within 0.2: %.3f\n", s.test_rows,
              s.train_rows, s.skipped, s.within_02);
  for (size_t h = 0; h < BT_HEURISTIC_COUNT; ++h) {
    std::printf("  %-13s mean initiators %8.3f  fraction over best %.4f\n",
                bt_heuristic_name(h), s.mean_initiators[h], s.mean_fraction_over_best[h]);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced Index seed selection and parameter tuning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bt_version());

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic graph");
  std::string gen_model = "er-swap", gen_bias = "none", gen_out;
  std::size_t gen_n = 100;
  double gen_k = 5.0, gen_swaps = 0.0;
  uint64_t gen_seed = 1;
  gen->add_option("--model", gen_model, "Generator (er-swap)")->check(CLI::IsMember({"er-swap"}));
  gen->add_option("--n", gen_n, "Node count")->required();
  gen->add_option("--k", gen_k, "Mean degree")->required();
  gen->add_option("--swaps", gen_swaps, "Double-edge swap attempts per edge");
  gen->add_option("--bias", gen_bias, "Swap bias")
      ->check(CLI::IsMember({"none", "assortative", "disassortative"}));
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "Output edge list")->required();

  // sample
  auto* sample = app.add_subcommand("sample", "Random-walk subgraph sample");
  std::string sample_graph, sample_out;
  bool sample_directed = false;
  std::size_t sample_size = 0;
  uint64_t sample_seed = 1;
  sample->add_option("--graph", sample_graph, "Input edge list")->required();
  sample->add_flag("--directed", sample_directed, "Read edges as directed arcs");
  sample->add_option("--size", sample_size, "Distinct nodes to visit")->required();
  sample->add_option("--seed", sample_seed, "RNG seed");
  sample->add_option("--out", sample_out, "Output edge list")->required();

  // features
  auto* features = app.add_subcommand("features", "Compute the feature vector of a graph");
  std::string feat_graph, feat_phi = "fixed:0.5", feat_out;
  bool feat_directed = false;
  double feat_cov = 0.9;
  uint64_t feat_seed = 1;
  features->add_option("--graph", feat_graph, "Input edge list")->required();
  features->add_flag("--directed", feat_directed, "Read edges as directed arcs");
  features->add_option("--phi", feat_phi, "Threshold distribution");
  features->add_option("--cov", feat_cov, "Target coverage");
  features->add_option("--seed", feat_seed, "RNG seed for thresholds");
  features->add_option("--out", feat_out, "Output CSV")->required();

  // grid
  auto* grid = app.add_subcommand("grid", "Triangle-grid search for the best parameters");
  std::string grid_graph, grid_phi = "fixed:0.5", grid_out;
  bool grid_directed = false;
  double grid_cov = 0.9, grid_prec = 0.01;
  uint64_t grid_seed = 1;
  grid->add_option("--graph", grid_graph, "Input edge list")->required();
  grid->add_flag("--directed", grid_directed, "Read edges as directed arcs");
  grid->add_option("--phi", grid_phi, "Threshold distribution");
  grid->add_option("--cov", grid_cov, "Target coverage");
  grid->add_option("--prec", grid_prec, "Grid precision");
  grid->add_option("--seed", grid_seed, "RNG seed for thresholds");
  grid->add_option("--out", grid_out, "Surface CSV")->required();

  // train
  auto* train = app.add_subcommand("train", "Train parameter forests from a training CSV");
  std::string train_csv, train_dir = ".", train_target = "both";
  double train_bin = 0.1;
  bt_forest_params fp;
  bt_forest_params_default(&fp);
  uint64_t train_seed = 1;
  train->add_option("--training", train_csv, "training.csv")->required();
  train->add_option("--target", train_target, "a, b or both")->check(CLI::IsMember({"a", "b", "both"}));
  train->add_option("--bin-width", train_bin, "Class bin width");
  train->add_option("--trees", fp.tree_count, "Trees per forest");
  train->add_option("--min-leaf", fp.min_leaf, "Minimum samples per leaf");
  train->add_option("--max-depth", fp.max_depth, "Depth limit (0: none)");
  train->add_option("--features-per-split", fp.features_per_split, "Features tried per split (0: sqrt)");
  train->add_option("--seed", train_seed, "RNG seed");
  train->add_option("--out-dir", train_dir, "Directory for model_a.json / model_b.json");

  // predict
  auto* predict = app.add_subcommand("predict", "Predict BI parameters");
  std::string pred_a, pred_b, pred_features, pred_graph, pred_phi = "fixed:0.5", pred_out;
  bool pred_directed = false;
  double pred_cov = 0.9;
  std::size_t pred_samples = 50, pred_size = 100;
  uint64_t pred_seed = 1;
  predict->add_option("--model-a", pred_a, "Forest for a")->required();
  predict->add_option("--model-b", pred_b, "Forest for b")->required();
  auto* pf = predict->add_option("--features", pred_features, "Feature CSV to predict row by row");
  auto* pg = predict->add_option("--graph", pred_graph, "Large graph to sample and average over");
  pf->excludes(pg);
  predict->add_flag("--directed", pred_directed, "Read edges as directed arcs");
  predict->add_option("--phi", pred_phi, "Threshold distribution for samples");
  predict->add_option("--cov", pred_cov, "Target coverage");
  predict->add_option("--samples", pred_samples, "Number of samples");
  predict->add_option("--size", pred_size, "Nodes per sample");
  predict->add_option("--seed", pred_seed, "RNG seed");
  predict->add_option("--out", pred_out, "Predictions CSV")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Compare tuned BI with grid-best and presets");
  std::string eval_graph, eval_phi = "fixed:0.5", eval_a, eval_b, eval_out;
  bool eval_directed = false;
  double eval_cov = 0.9, eval_prec = 0.01;
  uint64_t eval_seed = 1;
  evaluate->add_option("--graph", eval_graph, "Input edge list")->required();
  evaluate->add_flag("--directed", eval_directed, "Read edges as directed arcs");
  evaluate->add_option("--phi", eval_phi, "Threshold distribution");
  evaluate->add_option("--cov", eval_cov, "Target coverage");
  evaluate->add_option("--prec", eval_prec, "Grid precision");
  evaluate->add_option("--model-a", eval_a, "Forest for a")->required();
  evaluate->add_option("--model-b", eval_b, "Forest for b")->required();
  evaluate->add_option("--seed", eval_seed, "RNG seed for thresholds");
  evaluate->add_option("--out", eval_out, "Report CSV")->required();

  // pipeline
  auto* pipeline = app.add_subcommand(
      "pipeline", "Sample, label, train, predict and evaluate from a config file");
  std::string pipe_config;
  bool pipe_training_only = false;
  pipeline->add_option("--config", pipe_config, "Config file (key = value)");
  pipeline->add_flag("--training-only", pipe_training_only, "Stop after writing training.csv");
  pipeline->allow_extras();
  pipeline->footer("Any config key may be given as --key value or --key=value.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "bitune: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*gen) {
      bt_graph* raw = nullptr;
      check(bt_graph_generate_er_swap(gen_n, gen_k, gen_swaps, gen_bias.c_str(), gen_seed, &raw));
      GraphPtr g(raw);
      check(bt_graph_save(g.get(), gen_out.c_str(), 1));
      std::printf("wrote %s: %zu nodes, %zu edges\n", gen_out.c_str(), bt_graph_node_count(g.get()),
                  bt_graph_arc_count(g.get()) / 2);
    } else if (*sample) {
      auto g = load_graph(sample_graph, sample_directed);
      bt_graph* raw = nullptr;
      check(bt_graph_sample(g.get(), sample_size, sample_seed, &raw));
      GraphPtr s(raw);
      check(bt_graph_save(s.get(), sample_out.c_str(), sample_directed ? 0 : 1));
      std::printf("wrote %s: %zu nodes, %zu arcs\n", sample_out.c_str(), bt_graph_node_count(s.get()),
                  bt_graph_arc_count(s.get()));
    } else if (*features) {
      auto g = load_graph(feat_graph, feat_directed);
      auto t = assign(g.get(), feat_phi, feat_seed);
      double f[BT_FEATURE_COUNT];
      check(bt_features_extract(g.get(), t.get(), feat_cov, f));
      check(bt_features_write_csv(f, feat_out.c_str()));
      std::printf("wrote %s: %d features for %zu nodes\n", feat_out.c_str(), BT_FEATURE_COUNT,
                  bt_graph_node_count(g.get()));
    } else if (*grid) {
      auto g = load_graph(grid_graph, grid_directed);
      auto t = assign(g.get(), grid_phi, grid_seed);
      double best[3];
      size_t best_count = 0, points = 0;
      check(bt_grid_point_count(grid_prec, &points));
      check(bt_grid_search(g.get(), t.get(), grid_cov, grid_prec, grid_out.c_str(), best, &best_count));
      std::printf("wrote %s: %zu points, best (a,b,c) = (%g, %g, %g) with %zu initiators\n",
                  grid_out.c_str(), points, best[0], best[1], best[2], best_count);
    } else if (*train) {
      bt_dataset* raw = nullptr;
      check(bt_dataset_load_training_csv(train_csv.c_str(), train_bin, &raw));
      DatasetPtr d(raw);
      std::error_code ec;
      std::filesystem::create_directories(train_dir, ec);
      for (char target : {'a', 'b'}) {
        if (train_target != "both" && train_target[0] != target) continue;
        bt_forest* f = nullptr;
        // Distinct seeds keep the two forests' random streams apart.
        check(bt_forest_train(d.get(), target, &fp, train_seed * 2 + (target == 'b' ? 1 : 0), &f));
        ForestPtr forest(f);
        const std::string path = train_dir + "/model_" + target + ".json";
        check(bt_forest_save(forest.get(), path.c_str()));
        std::printf("wrote %s (%zu rows)\n", path.c_str(), bt_dataset_rows(d.get()));
      }
    } else if (*predict) {
      auto fa = load_forest(pred_a);
      auto fb = load_forest(pred_b);
      if (!pred_features.empty()) {
        size_t rows = 0;
        check(bt_predict_csv(fa.get(), fb.get(), pred_features.c_str(), pred_out.c_str(), &rows));
        std::printf("wrote %s: %zu rows\n", pred_out.c_str(), rows);
      } else if (!pred_graph.empty()) {
        auto g = load_graph(pred_graph, pred_directed);
        double a = 0.0, b = 0.0;
        check(bt_predict_from_samples(g.get(), fa.get(), fb.get(), pred_phi.c_str(), pred_cov,
                                      pred_samples, pred_size, pred_seed, pred_out.c_str(), &a, &b));
        std::printf("wrote %s: averaged a = %g, b = %g over %zu samples\n", pred_out.c_str(), a, b,
                    pred_samples);
      } else {
        std::cerr << "bitune: predict needs --features or --graph\n\n" << predict->help();
        return kExitUsage;
      }
    } else if (*evaluate) {
      auto g = load_graph(eval_graph, eval_directed);
      auto t = assign(g.get(), eval_phi, eval_seed);
      auto fa = load_forest(eval_a);
      auto fb = load_forest(eval_b);
      bt_eval_summary s{};
      check(bt_evaluate_graph(g.get(), t.get(), eval_cov, eval_prec, fa.get(), fb.get(),
                              eval_out.c_str(), &s));
      std::printf("wrote %s\n", eval_out.c_str());
      print_summary(s);
    } else if (*pipeline) {
      bt_config* raw = nullptr;
      check(pipe_config.empty() ? bt_config_new(&raw) : bt_config_load(pipe_config.c_str(), &raw));
      ConfigPtr cfg(raw);
      // Remaining arguments are config overrides: --key value or --key=value.
      const auto extras = pipeline->remaining();
      for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& arg = extras[i];
        if (arg.rfind("--", 0) != 0 || arg.size() < 3) {
          std::cerr << "bitune: unexpected argument '" << arg << "'\n\n" << pipeline->help();
          return kExitUsage;
        }
        std::string key = arg.substr(2), value;
        if (const auto eq = key.find('='); eq != std::string::npos) {
          value = key.substr(eq + 1);
          key.resize(eq);
        } else if (i + 1 < extras.size()) {
          value = extras[++i];
        } else {
          std::cerr << "bitune: missing value for --" << key << "\n\n" << pipeline->help();
          return kExitUsage;
        }
        if (bt_config_set(cfg.get(), key.c_str(), value.c_str()) != BT_OK) {
          std::cerr << "bitune: " << bt_last_error() << "\n\n" << pipeline->help();
          return kExitUsage;
        }
      }
      if (pipe_training_only) {
        size_t rows = 0, skipped = 0;
        check(bt_training_set_build(cfg.get(), &rows, &skipped));
        std::printf("wrote training.csv: %zu rows, %zu skipped instances\n", rows, skipped);
      } else {
        bt_eval_summary s{};
        check(bt_pipeline_run(cfg.get(), &s));
        print_summary(s);
      }
    }
  } catch (const Failure& f) {
    std::cerr << "bitune: " << f.message << '\n';
    return kExitFailure;
  }
  return 0;
}
