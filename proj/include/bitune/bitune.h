/*
 * C interface to the bitune library: Balanced Index seed selection under the
 * linear threshold model, triangle-grid parameter search, random-walk graph
 * sampling, graph features and random-forest parameter prediction.
 *
 * All objects are opaque handles released with the matching *_free call.
 * Every fallible call returns a bt_status; on failure bt_last_error() gives
 * a message for the calling thread that stays valid until its next failing
 * call. Output parameters are written only on success.
 */
#ifndef BITUNE_BITUNE_H
#define BITUNE_BITUNE_H

#include <stddef.h>
#include <stdint.h>

#if defined(BITUNE_BUILDING_LIBRARY)
#define BITUNE_API __attribute__((visibility("default")))
#else
#define BITUNE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bt_status {
  BT_OK = 0,
  BT_ERR_INVALID_ARGUMENT = 1,
  BT_ERR_PARSE = 2,
  BT_ERR_IO = 3,
  BT_ERR_UNREACHABLE = 4,
  BT_ERR_LIMIT = 5,
  BT_ERR_INTERNAL = 6,
  BT_ERR_BUFFER_TOO_SMALL = 7
} bt_status;

typedef struct bt_graph bt_graph;
typedef struct bt_thresholds bt_thresholds;
typedef struct bt_dataset bt_dataset;
typedef struct bt_forest bt_forest;
typedef struct bt_config bt_config;

#define BT_FEATURE_COUNT 12
#define BT_HEURISTIC_COUNT 6

BITUNE_API const char* bt_version(void);
BITUNE_API const char* bt_last_error(void);
BITUNE_API const char* bt_status_string(bt_status status);

/* ---- graphs ---------------------------------------------------------- */

/* Edge list: two whitespace-separated labels per line, '#' comments. */
BITUNE_API bt_status bt_graph_load(const char* path, int directed, bt_graph** out);
BITUNE_API bt_status bt_graph_load_text(const char* text, int directed, bt_graph** out);
/* undirected != 0 writes each symmetric edge once. */
BITUNE_API bt_status bt_graph_save(const bt_graph* g, const char* path, int undirected);
/* bias: "none", "assortative" or "disassortative". */
BITUNE_API bt_status bt_graph_generate_er_swap(size_t n, double mean_degree,
                                               double swaps_per_edge, const char* bias,
                                               uint64_t seed, bt_graph** out);
BITUNE_API bt_status bt_graph_sample(const bt_graph* g, size_t target_size,
                                     uint64_t seed, bt_graph** out);
BITUNE_API bt_status bt_graph_induced(const bt_graph* g, const uint32_t* nodes,
                                      size_t count, bt_graph** out);
BITUNE_API bt_status bt_graph_undirected(const bt_graph* g, bt_graph** out);
BITUNE_API size_t bt_graph_node_count(const bt_graph* g);
BITUNE_API size_t bt_graph_arc_count(const bt_graph* g);
BITUNE_API int bt_graph_is_connected(const bt_graph* g);
/* Original label of a dense node id; NULL when out of range. */
BITUNE_API const char* bt_graph_label(const bt_graph* g, uint32_t node);
BITUNE_API void bt_graph_free(bt_graph* g);

/* ---- thresholds and cascades ----------------------------------------- */

/* spec: "fixed:PHI", "uniform:LO:HI" or "normal:MEAN:STD". */
BITUNE_API bt_status bt_thresholds_assign(const bt_graph* g, const char* spec,
                                          uint64_t seed, bt_thresholds** out);
/* UINT32_MAX marks a node without in-neighbors. */
BITUNE_API bt_status bt_thresholds_resistance(const bt_thresholds* t, uint32_t node,
                                              uint32_t* out);
BITUNE_API void bt_thresholds_free(bt_thresholds* t);

BITUNE_API bt_status bt_cascade_run(const bt_graph* g, const bt_thresholds* t,
                                    const uint32_t* seeds, size_t seed_count,
                                    size_t* active_count);

/* ---- Balanced Index selection ---------------------------------------- */

/* name: "res", "deg", "RD" or "CI-TM"; writes (a, b, c). */
BITUNE_API bt_status bt_preset(const char* name, double out[3]);

/* Greedy adaptive selection to coverage cov. Seeds are written in pick
 * order. If capacity is too small, *seed_count receives the required size
 * and BT_ERR_BUFFER_TOO_SMALL is returned. */
BITUNE_API bt_status bt_select_initiators(const bt_graph* g, const bt_thresholds* t,
                                          double a, double b, double c, double cov,
                                          uint32_t* seeds, size_t capacity,
                                          size_t* seed_count);

BITUNE_API bt_status bt_grid_point_count(double prec, size_t* count);

/* Exhaustive triangle-grid search. surface_csv may be NULL; otherwise the
 * full surface is written there (header a,b,c,initiators). */
BITUNE_API bt_status bt_grid_search(const bt_graph* g, const bt_thresholds* t,
                                    double cov, double prec, const char* surface_csv,
                                    double best[3], size_t* best_count);

/* Minimum seed set by subset enumeration; refuses graphs above max_nodes. */
BITUNE_API bt_status bt_min_seeds_brute_force(const bt_graph* g, const bt_thresholds* t,
                                              double cov, size_t max_nodes,
                                              uint32_t* seeds, size_t capacity,
                                              size_t* seed_count);

/* ---- features -------------------------------------------------------- */

BITUNE_API const char* bt_feature_name(size_t index);
BITUNE_API bt_status bt_features_extract(const bt_graph* g, const bt_thresholds* t,
                                         double cov, double out[BT_FEATURE_COUNT]);
/* Writes a header line and one feature row. */
BITUNE_API bt_status bt_features_write_csv(const double features[BT_FEATURE_COUNT],
                                           const char* path);

/* ---- datasets and forests -------------------------------------------- */

typedef struct bt_forest_params {
  size_t tree_count;
  size_t min_leaf;
  size_t max_depth;          /* 0: unlimited */
  size_t features_per_split; /* 0: ceil(sqrt(features)) */
} bt_forest_params;

BITUNE_API void bt_forest_params_default(bt_forest_params* out);

/* Training CSV: 12 feature columns plus best_a, best_b. */
BITUNE_API bt_status bt_dataset_load_training_csv(const char* path, double bin_width,
                                                  bt_dataset** out);
BITUNE_API size_t bt_dataset_rows(const bt_dataset* d);
BITUNE_API void bt_dataset_free(bt_dataset* d);

/* target: 'a' or 'b'. */
BITUNE_API bt_status bt_forest_train(const bt_dataset* d, char target,
                                     const bt_forest_params* params, uint64_t seed,
                                     bt_forest** out);
BITUNE_API bt_status bt_forest_save(const bt_forest* f, const char* path);
BITUNE_API bt_status bt_forest_load(const char* path, bt_forest** out);
BITUNE_API size_t bt_forest_feature_count(const bt_forest* f);
BITUNE_API bt_status bt_forest_predict(const bt_forest* f, const double* x, size_t n,
                                       int* label, double* value);
BITUNE_API bt_status bt_forest_importance(const bt_forest* f, double* out, size_t n);
BITUNE_API void bt_forest_free(bt_forest* f);

/* Predicts every row of a feature CSV; writes row,a_hat,b_hat. */
BITUNE_API bt_status bt_predict_csv(const bt_forest* forest_a, const bt_forest* forest_b,
                                    const char* features_csv, const char* out_csv,
                                    size_t* rows);

/* Averages predictions over `samples` random-walk samples of g. out_csv may
 * be NULL; otherwise per-sample predictions are written
 * (sample,a_hat,b_hat). */
BITUNE_API bt_status bt_predict_from_samples(const bt_graph* g, const bt_forest* forest_a,
                                             const bt_forest* forest_b,
                                             const char* threshold_spec, double cov,
                                             size_t samples, size_t sample_size,
                                             uint64_t seed, const char* out_csv,
                                             double* a_mean, double* b_mean);

/* ---- evaluation and pipeline ----------------------------------------- */

typedef struct bt_eval_summary {
  size_t test_rows;
  size_t train_rows;
  size_t skipped;
  double within_02; /* share of rows with both parameters within 0.2 */
  /* Order: tuned-BI, grid-best-BI, res, deg, RD, CI-TM. */
  double mean_initiators[BT_HEURISTIC_COUNT];
  double mean_fraction_over_best[BT_HEURISTIC_COUNT];
} bt_eval_summary;

BITUNE_API const char* bt_heuristic_name(size_t index);

/* Tuned BI (forests applied to the graph's own features), grid-best and the
 * presets on one instance. report_csv may be NULL. */
BITUNE_API bt_status bt_evaluate_graph(const bt_graph* g, const bt_thresholds* t,
                                       double cov, double prec,
                                       const bt_forest* forest_a, const bt_forest* forest_b,
                                       const char* report_csv, bt_eval_summary* out);

BITUNE_API bt_status bt_config_new(bt_config** out);
/* Flat `key = value` file. */
BITUNE_API bt_status bt_config_load(const char* path, bt_config** out);
BITUNE_API bt_status bt_config_set(bt_config* cfg, const char* key, const char* value);
/* Copies the settings as text into buf (NUL-terminated). If capacity is
 * too small, *length receives the needed size including the NUL. */
BITUNE_API bt_status bt_config_text(const bt_config* cfg, char* buf, size_t capacity,
                                    size_t* length);
BITUNE_API void bt_config_free(bt_config* cfg);

/* Writes <output_dir>/training.csv only. */
BITUNE_API bt_status bt_training_set_build(const bt_config* cfg, size_t* rows,
                                           size_t* skipped);

/* Full run; writes training.csv, model_a.json, model_b.json,
 * predictions.csv, report.csv and summary.txt under output_dir. */
BITUNE_API bt_status bt_pipeline_run(const bt_config* cfg, bt_eval_summary* out);

#ifdef __cplusplus
}
#endif

#endif /* BITUNE_BITUNE_H */
