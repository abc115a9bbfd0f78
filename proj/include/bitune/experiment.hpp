#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bitune/bi.hpp"
#include "bitune/config.hpp"
#include "bitune/features.hpp"
#include "bitune/format.hpp"
#include "bitune/forest.hpp"
#include "bitune/graph.hpp"
#include "bitune/ltm.hpp"

namespace bitune {

/// One (sampled graph, threshold assignment) pair. Several coverages are
/// labeled per instance.
struct Instance {
  std::size_t graph_index = 0;
  std::size_t sample_index = 0;
  Graph graph;
  ThresholdSpec spec;
  ThresholdAssignment thresholds;
};

/// One training row: features at a coverage plus the grid-search optimum.
struct SampleRecord {
  std::size_t instance = 0;
  FeatureVector features{};
  double best_a = 0.0;
  double best_b = 0.0;
  std::size_t best_count = 0;
};

struct TrainingSet {
  std::vector<Instance> instances;
  std::vector<SampleRecord> records;
  std::size_t skipped = 0;
  std::vector<std::string> skip_messages;

  Dataset dataset(double bin_width) const;
};

/// Builds the graphs a config names: synthetic groups first (in er_n, er_k
/// order), then edge-list files.
std::vector<Graph> build_graphs(const ExperimentConfig& cfg);

/// Samples, assigns thresholds, extracts features and grid-labels every
/// (graph, sample, coverage). Failing instances are skipped and counted.
TrainingSet build_training_set(const ExperimentConfig& cfg);
TrainingSet build_training_set(const ExperimentConfig& cfg,
                               const std::vector<Graph>& graphs);

/// `N,...,phi_std,best_a,best_b,best_count`.
void write_training_csv(std::ostream& out,
                        const std::vector<SampleRecord>& records);
/// Reads a training CSV back; labels are discretized with bin_width.
Dataset read_training_csv(std::istream& in, double bin_width);
/// Reads rows of the 12 feature columns (extra columns ignored).
std::vector<FeatureVector> read_feature_csv(std::istream& in);

/// Maps predicted (a, b) onto the search grid: negative weights clamp to
/// zero, the triple is rescaled onto the simplex, then snapped to the
/// nearest grid point of resolution 1/prec.
BIParams tuned_params(double a_hat, double b_hat, double prec);

inline constexpr std::size_t kHeuristicCount = 6;
/// Report order: tuned, grid-best, then the four presets.
inline constexpr std::array<const char*, kHeuristicCount> kHeuristicNames = {
    "tuned-BI", "grid-best-BI", "res", "deg", "RD", "CI-TM"};

struct InstanceReport {
  std::size_t row = 0;
  double a_hat = 0.0, b_hat = 0.0;
  double a_star = 0.0, b_star = 0.0;
  std::array<std::size_t, kHeuristicCount> initiators{};
};

struct EvaluationReport {
  std::vector<InstanceReport> rows;
  std::array<double, kHeuristicCount> mean_initiators{};
  std::array<double, kHeuristicCount> mean_fraction_over_best{};
  std::array<double, kFeatureCount> importance_a{};
  std::array<double, kFeatureCount> importance_b{};
  std::size_t train_rows = 0;
  std::size_t skipped = 0;

  /// Fraction of rows with |a_hat - a*| <= tol and |b_hat - b*| <= tol.
  double within(double tol) const;
};

/// Initiator counts for the tuned point and the four presets on one
/// instance, given the grid optimum count.
InstanceReport evaluate_instance(const Instance& inst, double cov,
                                 const BIParams& tuned, std::size_t best_count);

/// Evaluates test rows of a labeled set against two trained forests.
EvaluationReport evaluate(const TrainingSet& ts,
                          std::span<const std::size_t> rows,
                          const TrainedForest& forest_a,
                          const TrainedForest& forest_b, double prec);

/// Single-instance evaluation: forests applied to the graph's own features,
/// a full grid search for the optimum, and the presets.
EvaluationReport evaluate_graph(const Graph& g, const ThresholdAssignment& t,
                                double cov, const TrainedForest& forest_a,
                                const TrainedForest& forest_b, double prec);

struct PipelineResult {
  TrainingSet training;
  TrainedForest forest_a;
  TrainedForest forest_b;
  EvaluationReport report;
};

/// Build or reuse the training set, split, train both forests, evaluate the
/// held-out rows. Writes training.csv, model_a.json, model_b.json,
/// predictions.csv, report.csv and summary.txt into cfg.output_dir when
/// write_files is set.
PipelineResult run_pipeline(const ExperimentConfig& cfg, bool write_files = true);

void write_predictions_csv(std::ostream& out, const EvaluationReport& r);
void write_report_csv(std::ostream& out, const EvaluationReport& r);
std::string summarize(const EvaluationReport& r);

/// Averages forest predictions over random-walk samples of one large graph.
struct AveragedPrediction {
  double a_mean = 0.0;
  double b_mean = 0.0;
  std::vector<double> a_values;
  std::vector<double> b_values;
};

AveragedPrediction predict_from_samples(const Graph& g,
                                        const TrainedForest& forest_a,
                                        const TrainedForest& forest_b,
                                        const ThresholdSpec& spec, double cov,
                                        std::size_t samples,
                                        std::size_t sample_size,
                                        std::uint64_t seed);

}  // namespace bitune
