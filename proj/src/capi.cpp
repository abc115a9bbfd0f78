#include "bitune/bitune.h"

#include <cstring>
#include <filesystem>
#include <functional>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "bitune/bi.hpp"
#include "bitune/config.hpp"
#include "bitune/error.hpp"
#include "bitune/experiment.hpp"
#include "bitune/features.hpp"
#include "bitune/forest.hpp"
#include "bitune/format.hpp"
#include "bitune/graph.hpp"
#include "bitune/ltm.hpp"
#include "bitune/sampler.hpp"
#include "bitune/search.hpp"
#include "bitune/synthetic.hpp"

struct bt_graph {
  bitune::Graph graph;
};
struct bt_thresholds {
  bitune::ThresholdAssignment value;
};
struct bt_dataset {
  bitune::Dataset value;
};
struct bt_forest {
  bitune::TrainedForest value;
};
struct bt_config {
  bitune::ExperimentConfig value;
};

namespace {

using bitune::Error;
using bitune::ErrorCode;

thread_local std::string last_error;

bt_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
      return BT_ERR_INVALID_ARGUMENT;
    case ErrorCode::parse:
      return BT_ERR_PARSE;
    case ErrorCode::io:
      return BT_ERR_IO;
    case ErrorCode::unreachable:
      return BT_ERR_UNREACHABLE;
    case ErrorCode::limit_exceeded:
      return BT_ERR_LIMIT;
    case ErrorCode::internal:
      return BT_ERR_INTERNAL;
  }
  return BT_ERR_INTERNAL;
}

bt_status fail(bt_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
bt_status guarded(F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BT_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) bitune::throw_invalid(std::string(what) + " must not be null");
}

void write_text(const char* path, const std::function<void(std::ostream&)>& fill) {
  std::ofstream out(path);
  if (!out) bitune::throw_io(std::string("cannot write '") + path + "'");
  fill(out);
  if (!out) bitune::throw_io(std::string("write failed for '") + path + "'");
}

bt_status copy_seeds(const std::vector<bitune::NodeId>& seeds, uint32_t* out,
                     size_t capacity, size_t* count) {
  *count = seeds.size();
  if (capacity < seeds.size()) {
    return fail(BT_ERR_BUFFER_TOO_SMALL,
                "seed buffer holds " + std::to_string(capacity) + " entries, need " +
                    std::to_string(seeds.size()));
  }
  if (!seeds.empty()) {
    require(out != nullptr, "seed buffer");
    std::copy(seeds.begin(), seeds.end(), out);
  }
  return BT_OK;
}

void fill_summary(const bitune::EvaluationReport& r, bt_eval_summary* out) {
  out->test_rows = r.rows.size();
  out->train_rows = r.train_rows;
  out->skipped = r.skipped;
  out->within_02 = r.within(0.2);
  for (size_t h = 0; h < BT_HEURISTIC_COUNT; ++h) {
    out->mean_initiators[h] = r.mean_initiators[h];
    out->mean_fraction_over_best[h] = r.mean_fraction_over_best[h];
  }
}

}  // namespace

extern "C" {

const char* bt_version(void) { return "1.0.0"; }

const char* bt_last_error(void) { return last_error.c_str(); }

const char* bt_status_string(bt_status status) {
  switch (status) {
    case BT_OK:
      return "ok";
    case BT_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case BT_ERR_PARSE:
      return "parse error";
    case BT_ERR_IO:
      return "i/o error";
    case BT_ERR_UNREACHABLE:
      return "unreachable";
    case BT_ERR_LIMIT:
      return "limit exceeded";
    case BT_ERR_INTERNAL:
      return "internal error";
    case BT_ERR_BUFFER_TOO_SMALL:
      return "buffer too small";
  }
  return "unknown status";
}

// ---- graphs

bt_status bt_graph_load(const char* path, int directed, bt_graph** out) {
  return guarded([&] {
    require(path && out, "path and out");
    *out = new bt_graph{bitune::load_edge_list_file(path, directed != 0)};
    return BT_OK;
  });
}

bt_status bt_graph_load_text(const char* text, int directed, bt_graph** out) {
  return guarded([&] {
    require(text && out, "text and out");
    std::istringstream in(text);
    *out = new bt_graph{bitune::load_edge_list(in, directed != 0)};
    return BT_OK;
  });
}

bt_status bt_graph_save(const bt_graph* g, const char* path, int undirected) {
  return guarded([&] {
    require(g && path, "graph and path");
    bitune::write_edge_list_file(path, g->graph, undirected != 0);
    return BT_OK;
  });
}

bt_status bt_graph_generate_er_swap(size_t n, double mean_degree, double swaps_per_edge,
                                    const char* bias, uint64_t seed, bt_graph** out) {
  return guarded([&] {
    require(out != nullptr, "out");
    if (!(swaps_per_edge >= 0.0)) bitune::throw_invalid("swap count must be non-negative");
    bitune::SwapSpec swaps;
    swaps.per_edge = swaps_per_edge;
    swaps.bias = bitune::parse_swap_bias(bias ? bias : "none");
    *out = new bt_graph{bitune::generate_er_swapped(n, mean_degree, swaps, seed)};
    return BT_OK;
  });
}

bt_status bt_graph_sample(const bt_graph* g, size_t target_size, uint64_t seed,
                          bt_graph** out) {
  return guarded([&] {
    require(g && out, "graph and out");
    bitune::SampleSpec spec;
    spec.target_size = target_size;
    spec.seed = seed;
    *out = new bt_graph{bitune::random_walk_sample(g->graph, spec)};
    return BT_OK;
  });
}

bt_status bt_graph_induced(const bt_graph* g, const uint32_t* nodes, size_t count,
                           bt_graph** out) {
  return guarded([&] {
    require(g && out, "graph and out");
    require(nodes || count == 0, "nodes");
    bitune::NodeSet set(g->graph.node_count(),
                        std::span<const bitune::NodeId>(nodes, count));
    *out = new bt_graph{bitune::induced_subgraph(g->graph, set)};
    return BT_OK;
  });
}

bt_status bt_graph_undirected(const bt_graph* g, bt_graph** out) {
  return guarded([&] {
    require(g && out, "graph and out");
    *out = new bt_graph{bitune::undirected_view(g->graph)};
    return BT_OK;
  });
}

size_t bt_graph_node_count(const bt_graph* g) { return g ? g->graph.node_count() : 0; }

size_t bt_graph_arc_count(const bt_graph* g) { return g ? g->graph.arc_count() : 0; }

int bt_graph_is_connected(const bt_graph* g) {
  return g && bitune::is_weakly_connected(g->graph) ? 1 : 0;
}

const char* bt_graph_label(const bt_graph* g, uint32_t node) {
  if (!g || node >= g->graph.node_count()) return nullptr;
  return g->graph.label(node).c_str();
}

void bt_graph_free(bt_graph* g) { delete g; }

// ---- thresholds and cascades

bt_status bt_thresholds_assign(const bt_graph* g, const char* spec, uint64_t seed,
                               bt_thresholds** out) {
  return guarded([&] {
    require(g && spec && out, "graph, spec and out");
    *out = new bt_thresholds{
        bitune::assign_thresholds(g->graph, bitune::ThresholdSpec::parse(spec), seed)};
    return BT_OK;
  });
}

bt_status bt_thresholds_resistance(const bt_thresholds* t, uint32_t node, uint32_t* out) {
  return guarded([&] {
    require(t && out, "thresholds and out");
    if (node >= t->value.size()) bitune::throw_invalid("node outside threshold assignment");
    *out = t->value.resistance[node];
    return BT_OK;
  });
}

void bt_thresholds_free(bt_thresholds* t) { delete t; }

bt_status bt_cascade_run(const bt_graph* g, const bt_thresholds* t, const uint32_t* seeds,
                         size_t seed_count, size_t* active_count) {
  return guarded([&] {
    require(g && t && seeds && active_count, "graph, thresholds, seeds and active_count");
    const auto r = bitune::run_cascade(g->graph, t->value,
                                       std::span<const bitune::NodeId>(seeds, seed_count));
    *active_count = r.active.size();
    return BT_OK;
  });
}

// ---- selection and search

bt_status bt_preset(const char* name, double out[3]) {
  return guarded([&] {
    require(name && out, "name and out");
    const auto p = bitune::preset(bitune::parse_preset(name));
    out[0] = p.a;
    out[1] = p.b;
    out[2] = p.c;
    return BT_OK;
  });
}

bt_status bt_select_initiators(const bt_graph* g, const bt_thresholds* t, double a,
                               double b, double c, double cov, uint32_t* seeds,
                               size_t capacity, size_t* seed_count) {
  return guarded([&] {
    require(g && t && seed_count, "graph, thresholds and seed_count");
    const auto r = bitune::select_initiators(g->graph, t->value,
                                             bitune::BIParams::make(a, b, c), cov);
    return copy_seeds(r.seeds, seeds, capacity, seed_count);
  });
}

bt_status bt_grid_point_count(double prec, size_t* count) {
  return guarded([&] {
    require(count != nullptr, "count");
    *count = bitune::triangle_grid(prec).size();
    return BT_OK;
  });
}

bt_status bt_grid_search(const bt_graph* g, const bt_thresholds* t, double cov,
                         double prec, const char* surface_csv, double best[3],
                         size_t* best_count) {
  return guarded([&] {
    require(g && t && best && best_count, "graph, thresholds, best and best_count");
    const auto r = bitune::grid_search(g->graph, t->value, cov, prec);
    if (surface_csv) {
      write_text(surface_csv, [&](std::ostream& o) { bitune::write_surface_csv(o, r); });
    }
    best[0] = r.best.params.a;
    best[1] = r.best.params.b;
    best[2] = r.best.params.c;
    *best_count = r.best_count;
    return BT_OK;
  });
}

bt_status bt_min_seeds_brute_force(const bt_graph* g, const bt_thresholds* t, double cov,
                                   size_t max_nodes, uint32_t* seeds, size_t capacity,
                                   size_t* seed_count) {
  return guarded([&] {
    require(g && t && seed_count, "graph, thresholds and seed_count");
    const auto s = bitune::brute_force_min_seeds(g->graph, t->value, cov, max_nodes);
    return copy_seeds(s, seeds, capacity, seed_count);
  });
}

// ---- features

const char* bt_feature_name(size_t index) {
  return index < bitune::kFeatureCount ? bitune::kFeatureNames[index].data() : nullptr;
}

bt_status bt_features_extract(const bt_graph* g, const bt_thresholds* t, double cov,
                              double out[BT_FEATURE_COUNT]) {
  return guarded([&] {
    require(g && t && out, "graph, thresholds and out");
    const auto f = bitune::extract_features(g->graph, t->value, cov);
    std::copy(f.begin(), f.end(), out);
    return BT_OK;
  });
}

bt_status bt_features_write_csv(const double features[BT_FEATURE_COUNT], const char* path) {
  return guarded([&] {
    require(features && path, "features and path");
    bitune::FeatureVector f{};
    std::copy(features, features + BT_FEATURE_COUNT, f.begin());
    write_text(path, [&](std::ostream& o) {
      bitune::write_feature_header(o);
      o << '\n';
      bitune::write_feature_values(o, f);
      o << '\n';
    });
    return BT_OK;
  });
}

// ---- datasets and forests

void bt_forest_params_default(bt_forest_params* out) {
  if (!out) return;
  const bitune::ForestParams p;
  out->tree_count = p.tree_count;
  out->min_leaf = p.min_leaf;
  out->max_depth = p.max_depth;
  out->features_per_split = p.features_per_split;
}

bt_status bt_dataset_load_training_csv(const char* path, double bin_width,
                                       bt_dataset** out) {
  return guarded([&] {
    require(path && out, "path and out");
    std::ifstream in(path);
    if (!in) bitune::throw_io(std::string("cannot open '") + path + "'");
    *out = new bt_dataset{bitune::read_training_csv(in, bin_width)};
    return BT_OK;
  });
}

size_t bt_dataset_rows(const bt_dataset* d) { return d ? d->value.size() : 0; }

void bt_dataset_free(bt_dataset* d) { delete d; }

bt_status bt_forest_train(const bt_dataset* d, char target, const bt_forest_params* params,
                          uint64_t seed, bt_forest** out) {
  return guarded([&] {
    require(d && out, "dataset and out");
    bitune::Target which;
    if (target == 'a' || target == 'A') {
      which = bitune::Target::a;
    } else if (target == 'b' || target == 'B') {
      which = bitune::Target::b;
    } else {
      bitune::throw_invalid("target must be 'a' or 'b'");
    }
    bitune::ForestParams p;
    if (params) {
      p.tree_count = params->tree_count;
      p.min_leaf = params->min_leaf;
      p.max_depth = params->max_depth;
      p.features_per_split = params->features_per_split;
    }
    *out = new bt_forest{bitune::train_forest(d->value, which, p, seed)};
    return BT_OK;
  });
}

bt_status bt_forest_save(const bt_forest* f, const char* path) {
  return guarded([&] {
    require(f && path, "forest and path");
    f->value.save_file(path);
    return BT_OK;
  });
}

bt_status bt_forest_load(const char* path, bt_forest** out) {
  return guarded([&] {
    require(path && out, "path and out");
    *out = new bt_forest{bitune::TrainedForest::load_file(path)};
    return BT_OK;
  });
}

size_t bt_forest_feature_count(const bt_forest* f) {
  return f ? f->value.feature_names().size() : 0;
}

bt_status bt_forest_predict(const bt_forest* f, const double* x, size_t n, int* label,
                            double* value) {
  return guarded([&] {
    require(f && x, "forest and x");
    const auto p = f->value.predict(std::span<const double>(x, n));
    if (label) *label = p.label;
    if (value) *value = p.value;
    return BT_OK;
  });
}

bt_status bt_forest_importance(const bt_forest* f, double* out, size_t n) {
  return guarded([&] {
    require(f && out, "forest and out");
    const auto& imp = f->value.importance();
    if (n < imp.size()) {
      return fail(BT_ERR_BUFFER_TOO_SMALL, "importance buffer too small");
    }
    std::copy(imp.begin(), imp.end(), out);
    return BT_OK;
  });
}

void bt_forest_free(bt_forest* f) { delete f; }

bt_status bt_predict_csv(const bt_forest* forest_a, const bt_forest* forest_b,
                         const char* features_csv, const char* out_csv, size_t* rows) {
  return guarded([&] {
    require(forest_a && forest_b && features_csv && out_csv, "forests and paths");
    std::ifstream in(features_csv);
    if (!in) bitune::throw_io(std::string("cannot open '") + features_csv + "'");
    const auto features = bitune::read_feature_csv(in);
    write_text(out_csv, [&](std::ostream& o) {
      o << "row,a_hat,b_hat\n";
      for (size_t i = 0; i < features.size(); ++i) {
        o << i << ',' << bitune::format_double(forest_a->value.predict(features[i]).value)
          << ',' << bitune::format_double(forest_b->value.predict(features[i]).value) << '\n';
      }
    });
    if (rows) *rows = features.size();
    return BT_OK;
  });
}

bt_status bt_predict_from_samples(const bt_graph* g, const bt_forest* forest_a,
                                  const bt_forest* forest_b, const char* threshold_spec,
                                  double cov, size_t samples, size_t sample_size,
                                  uint64_t seed, const char* out_csv, double* a_mean,
                                  double* b_mean) {
  return guarded([&] {
    require(g && forest_a && forest_b && threshold_spec, "graph, forests and spec");
    const auto r = bitune::predict_from_samples(
        g->graph, forest_a->value, forest_b->value,
        bitune::ThresholdSpec::parse(threshold_spec), cov, samples, sample_size, seed);
    if (out_csv) {
      write_text(out_csv, [&](std::ostream& o) {
        o << "sample,a_hat,b_hat\n";
        for (size_t i = 0; i < r.a_values.size(); ++i) {
          o << i << ',' << bitune::format_double(r.a_values[i]) << ','
            << bitune::format_double(r.b_values[i]) << '\n';
        }
      });
    }
    if (a_mean) *a_mean = r.a_mean;
    if (b_mean) *b_mean = r.b_mean;
    return BT_OK;
  });
}

// ---- evaluation and pipeline

const char* bt_heuristic_name(size_t index) {
  return index < bitune::kHeuristicCount ? bitune::kHeuristicNames[index] : nullptr;
}

bt_status bt_evaluate_graph(const bt_graph* g, const bt_thresholds* t, double cov,
                            double prec, const bt_forest* forest_a,
                            const bt_forest* forest_b, const char* report_csv,
                            bt_eval_summary* out) {
  return guarded([&] {
    require(g && t && forest_a && forest_b, "graph, thresholds and forests");
    const auto r =
        bitune::evaluate_graph(g->graph, t->value, cov, forest_a->value, forest_b->value, prec);
    if (report_csv) {
      write_text(report_csv, [&](std::ostream& o) { bitune::write_report_csv(o, r); });
    }
    if (out) fill_summary(r, out);
    return BT_OK;
  });
}

bt_status bt_config_new(bt_config** out) {
  return guarded([&] {
    require(out != nullptr, "out");
    *out = new bt_config{};
    return BT_OK;
  });
}

bt_status bt_config_load(const char* path, bt_config** out) {
  return guarded([&] {
    require(path && out, "path and out");
    *out = new bt_config{bitune::ExperimentConfig::load_file(path)};
    return BT_OK;
  });
}

bt_status bt_config_set(bt_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg && key && value, "config, key and value");
    cfg->value.set(key, value);
    return BT_OK;
  });
}

bt_status bt_config_text(const bt_config* cfg, char* buf, size_t capacity, size_t* length) {
  return guarded([&] {
    require(cfg && length, "config and length");
    const std::string text = cfg->value.to_text();
    *length = text.size() + 1;
    if (capacity < text.size() + 1) {
      return fail(BT_ERR_BUFFER_TOO_SMALL, "config text buffer too small");
    }
    require(buf != nullptr, "buf");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return BT_OK;
  });
}

void bt_config_free(bt_config* cfg) { delete cfg; }

bt_status bt_training_set_build(const bt_config* cfg, size_t* rows, size_t* skipped) {
  return guarded([&] {
    require(cfg != nullptr, "config");
    const auto ts = bitune::build_training_set(cfg->value);
    const std::filesystem::path dir(cfg->value.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) bitune::throw_io("cannot create '" + dir.string() + "': " + ec.message());
    write_text((dir / "training.csv").c_str(),
               [&](std::ostream& o) { bitune::write_training_csv(o, ts.records); });
    if (rows) *rows = ts.records.size();
    if (skipped) *skipped = ts.skipped;
    return BT_OK;
  });
}

bt_status bt_pipeline_run(const bt_config* cfg, bt_eval_summary* out) {
  return guarded([&] {
    require(cfg != nullptr, "config");
    const auto result = bitune::run_pipeline(cfg->value, true);
    if (out) fill_summary(result.report, out);
    return BT_OK;
  });
}

}  // extern "C"
