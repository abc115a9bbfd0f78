#include "bitune/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "bitune/error.hpp"
#include "bitune/format.hpp"
#include "bitune/parallel.hpp"
#include "bitune/rng.hpp"
#include "bitune/sampler.hpp"
#include "bitune/search.hpp"
#include "bitune/synthetic.hpp"

namespace bitune {

namespace {

// Independent RNG streams derived from the master seed.
enum Stream : std::uint64_t {
  kStreamGraph = 1,
  kStreamSample = 2,
  kStreamPhi = 3,
  kStreamSplit = 4,
  kStreamForestA = 5,
  kStreamForestB = 6,
};

// Slack for comparing differences of binned parameter values.
constexpr double kCompareSlack = 1e-9;

std::vector<std::string> read_csv_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw_parse("CSV is empty (missing header)");
  return split_fields(line, ',');
}

std::size_t column_of(const std::vector<std::string>& header, std::string_view name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw_parse("CSV lacks column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& fill) {
  std::ofstream out(path);
  if (!out) throw_io("cannot write '" + path.string() + "'");
  fill(out);
  if (!out) throw_io("write failed for '" + path.string() + "'");
}

void fill_means(EvaluationReport& report) {
  if (report.rows.empty()) return;
  const double n = static_cast<double>(report.rows.size());
  for (const auto& r : report.rows) {
    for (std::size_t h = 0; h < kHeuristicCount; ++h) {
      report.mean_initiators[h] += static_cast<double>(r.initiators[h]) / n;
      report.mean_fraction_over_best[h] +=
          static_cast<double>(r.initiators[h]) / static_cast<double>(r.initiators[1]) / n;
    }
  }
}

}  // namespace

Dataset TrainingSet::dataset(double bin_width) const {
  Dataset d;
  d.bin_width = bin_width;
  d.feature_names.assign(kFeatureNames.begin(), kFeatureNames.end());
  for (const auto& r : records) {
    d.x.emplace_back(r.features.begin(), r.features.end());
    d.label_a.push_back(discretize(r.best_a, bin_width));
    d.label_b.push_back(discretize(r.best_b, bin_width));
  }
  return d;
}

std::vector<Graph> build_graphs(const ExperimentConfig& cfg) {
  struct Job {
    std::size_t n;
    double k;
    SwapSpec swaps;
  };
  std::vector<Job> jobs;
  const std::size_t factors = cfg.swap_factors.size();
  const std::size_t biases = cfg.swap_biases.size();
  for (std::size_t n : cfg.er_n) {
    for (double k : cfg.er_k) {
      for (std::size_t i = 0; i < cfg.er_count; ++i) {
        SwapSpec swaps;
        swaps.per_edge = cfg.swap_factors[i % factors];
        swaps.bias = cfg.swap_biases[(i / factors) % biases];
        jobs.push_back({n, k, swaps});
      }
    }
  }

  std::vector<Graph> graphs(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    graphs[i] = generate_er_swapped(jobs[i].n, jobs[i].k, jobs[i].swaps,
                                    derive_seed(cfg.seed, kStreamGraph, i));
  });
  for (const auto& path : cfg.graph_files) {
    graphs.push_back(load_edge_list_file(path, cfg.directed));
  }
  return graphs;
}

TrainingSet build_training_set(const ExperimentConfig& cfg) {
  cfg.validate();
  return build_training_set(cfg, build_graphs(cfg));
}

TrainingSet build_training_set(const ExperimentConfig& cfg,
                               const std::vector<Graph>& graphs) {
  const std::size_t per_graph = cfg.samples_per_graph;
  const std::size_t total = graphs.size() * per_graph;

  struct Slot {
    Instance instance;
    std::vector<SampleRecord> records;
    std::string error;
  };
  std::vector<Slot> slots(total);

  parallel_for(total, [&](std::size_t j) {
    Slot& slot = slots[j];
    Instance& inst = slot.instance;
    inst.graph_index = j / per_graph;
    inst.sample_index = j % per_graph;
    inst.spec = cfg.phi[j % cfg.phi.size()];
    try {
      const Graph& parent = graphs[inst.graph_index];
      if (cfg.sample_size == 0 || cfg.sample_size >= parent.node_count()) {
        inst.graph = parent;
      } else {
        SampleSpec spec;
        spec.target_size = cfg.sample_size;
        spec.seed = derive_seed(cfg.seed, kStreamSample, j);
        inst.graph = random_walk_sample(parent, spec);
      }
      inst.thresholds =
          assign_thresholds(inst.graph, inst.spec, derive_seed(cfg.seed, kStreamPhi, j));
      const auto grids =
          grid_search_multi(inst.graph, inst.thresholds, cfg.coverages, cfg.prec);
      for (std::size_t c = 0; c < cfg.coverages.size(); ++c) {
        SampleRecord rec;
        rec.features = extract_features(inst.graph, inst.thresholds, cfg.coverages[c]);
        rec.best_a = grids[c].best.params.a;
        rec.best_b = grids[c].best.params.b;
        rec.best_count = grids[c].best_count;
        slot.records.push_back(rec);
      }
    } catch (const std::exception& e) {
      slot.error = "graph " + std::to_string(inst.graph_index) + " sample " +
                   std::to_string(inst.sample_index) + ": " + e.what();
      slot.records.clear();
    }
  });

  TrainingSet ts;
  for (auto& slot : slots) {
    if (!slot.error.empty()) {
      ++ts.skipped;
      ts.skip_messages.push_back(std::move(slot.error));
      continue;
    }
    const std::size_t id = ts.instances.size();
    for (auto& rec : slot.records) {
      rec.instance = id;
      ts.records.push_back(rec);
    }
    ts.instances.push_back(std::move(slot.instance));
  }
  return ts;
}

void write_training_csv(std::ostream& out, const std::vector<SampleRecord>& records) {
  write_feature_header(out);
  out << ",best_a,best_b,best_count\n";
  for (const auto& r : records) {
    write_feature_values(out, r.features);
    out << ',' << format_double(r.best_a) << ',' << format_double(r.best_b) << ','
        << r.best_count << '\n';
  }
}

Dataset read_training_csv(std::istream& in, double bin_width) {
  const auto header = read_csv_header(in);
  std::array<std::size_t, kFeatureCount> cols{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) cols[i] = column_of(header, kFeatureNames[i]);
  const std::size_t col_a = column_of(header, "best_a");
  const std::size_t col_b = column_of(header, "best_b");

  Dataset d;
  d.bin_width = bin_width;
  d.feature_names.assign(kFeatureNames.begin(), kFeatureNames.end());
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() != header.size()) {
      throw_parse("training CSV line " + std::to_string(line_no) + ": expected " +
                  std::to_string(header.size()) + " columns");
    }
    std::vector<double> x(kFeatureCount);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      x[i] = parse_double(fields[cols[i]], kFeatureNames[i]);
    }
    d.x.push_back(std::move(x));
    d.label_a.push_back(discretize(parse_double(fields[col_a], "best_a"), bin_width));
    d.label_b.push_back(discretize(parse_double(fields[col_b], "best_b"), bin_width));
  }
  return d;
}

std::vector<FeatureVector> read_feature_csv(std::istream& in) {
  const auto header = read_csv_header(in);
  std::array<std::size_t, kFeatureCount> cols{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) cols[i] = column_of(header, kFeatureNames[i]);
  std::vector<FeatureVector> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() != header.size()) {
      throw_parse("feature CSV line " + std::to_string(line_no) + ": expected " +
                  std::to_string(header.size()) + " columns");
    }
    FeatureVector f{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      f[i] = parse_double(fields[cols[i]], kFeatureNames[i]);
    }
    rows.push_back(f);
  }
  return rows;
}

BIParams tuned_params(double a_hat, double b_hat, double prec) {
  const BIParams p = BIParams::normalized(a_hat, b_hat, 1.0 - a_hat - b_hat);
  const int n = grid_resolution(prec);
  const int max_a = n - n % 2;
  int a_units = static_cast<int>(std::lround(p.a * n / 2.0)) * 2;
  a_units = std::clamp(a_units, 0, max_a);
  int b_units = static_cast<int>(std::lround(p.b * n));
  b_units = std::clamp(b_units, 0, n - a_units);
  return grid_point(a_units, b_units, n).params;
}

double EvaluationReport::within(double tol) const {
  if (rows.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& r : rows) {
    if (std::abs(r.a_hat - r.a_star) <= tol + kCompareSlack &&
        std::abs(r.b_hat - r.b_star) <= tol + kCompareSlack) {
      ++ok;
    }
  }
  return static_cast<double>(ok) / static_cast<double>(rows.size());
}

InstanceReport evaluate_instance(const Instance& inst, double cov,
                                 const BIParams& tuned, std::size_t best_count) {
  InstanceReport r;
  const double covs[] = {cov};
  auto count = [&](const BIParams& p) {
    return initiators_for_coverages(inst.graph, inst.thresholds, p, covs).front();
  };
  r.initiators[0] = count(tuned);
  r.initiators[1] = best_count;
  for (std::size_t i = 0; i < std::size(kAllPresets); ++i) {
    r.initiators[2 + i] = count(preset(kAllPresets[i]));
  }
  return r;
}

EvaluationReport evaluate(const TrainingSet& ts, std::span<const std::size_t> rows,
                          const TrainedForest& forest_a, const TrainedForest& forest_b,
                          double prec) {
  EvaluationReport report;
  report.rows.resize(rows.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const auto& rec = ts.records.at(rows[i]);
    const auto& inst = ts.instances.at(rec.instance);
    const double a_hat = forest_a.predict(rec.features).value;
    const double b_hat = forest_b.predict(rec.features).value;
    InstanceReport r = evaluate_instance(inst, rec.features[kFeatCov],
                                         tuned_params(a_hat, b_hat, prec), rec.best_count);
    r.row = rows[i];
    r.a_hat = a_hat;
    r.b_hat = b_hat;
    r.a_star = rec.best_a;
    r.b_star = rec.best_b;
    report.rows[i] = r;
  });

  fill_means(report);
  return report;
}

EvaluationReport evaluate_graph(const Graph& g, const ThresholdAssignment& t,
                                double cov, const TrainedForest& forest_a,
                                const TrainedForest& forest_b, double prec) {
  const auto features = extract_features(g, t, cov);
  const double a_hat = forest_a.predict(features).value;
  const double b_hat = forest_b.predict(features).value;
  const auto grid = grid_search(g, t, cov, prec);

  Instance inst;
  inst.graph = g;
  inst.thresholds = t;
  InstanceReport r =
      evaluate_instance(inst, cov, tuned_params(a_hat, b_hat, prec), grid.best_count);
  r.a_hat = a_hat;
  r.b_hat = b_hat;
  r.a_star = grid.best.params.a;
  r.b_star = grid.best.params.b;

  EvaluationReport report;
  report.rows.push_back(r);
  fill_means(report);
  return report;
}

void write_predictions_csv(std::ostream& out, const EvaluationReport& r) {
  out << "row,a_hat,b_hat,a_star,b_star\n";
  for (const auto& row : r.rows) {
    out << row.row << ',' << format_double(row.a_hat) << ',' << format_double(row.b_hat)
        << ',' << format_double(row.a_star) << ',' << format_double(row.b_star) << '\n';
  }
}

void write_report_csv(std::ostream& out, const EvaluationReport& r) {
  out << "instance,heuristic,initiators,fraction_over_best\n";
  for (const auto& row : r.rows) {
    for (std::size_t h = 0; h < kHeuristicCount; ++h) {
      out << row.row << ',' << kHeuristicNames[h] << ',' << row.initiators[h] << ','
          << format_double(static_cast<double>(row.initiators[h]) /
                           static_cast<double>(row.initiators[1]))
          << '\n';
    }
  }
}

std::string summarize(const EvaluationReport& r) {
  std::ostringstream out;
  out << "test rows: " << r.rows.size() << " (train rows: " << r.train_rows
      << ", skipped instances: " << r.skipped << ")\n";
  out << "within 0.2 of grid optimum: " << format_double(r.within(0.2)) << '\n';
  for (std::size_t h = 0; h < kHeuristicCount; ++h) {
    out << kHeuristicNames[h] << ": mean initiators " << format_double(r.mean_initiators[h])
        << ", mean fraction over best " << format_double(r.mean_fraction_over_best[h]) << '\n';
  }
  out << "importance (a):";
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    out << ' ' << kFeatureNames[i] << '=' << format_double(r.importance_a[i]);
  }
  out << "\nimportance (b):";
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    out << ' ' << kFeatureNames[i] << '=' << format_double(r.importance_b[i]);
  }
  out << '\n';
  return out.str();
}

PipelineResult run_pipeline(const ExperimentConfig& cfg, bool write_files) {
  cfg.validate();
  PipelineResult result;
  result.training = build_training_set(cfg);
  const Dataset data = result.training.dataset(cfg.bin_width);
  if (data.size() < 3) {
    throw_invalid("only " + std::to_string(data.size()) +
                  " training rows were produced; need at least 3");
  }
  const auto split =
      split_dataset(data, cfg.train_fraction, derive_seed(cfg.seed, kStreamSplit));
  result.forest_a = train_forest(split.train, Target::a, cfg.forest,
                                 derive_seed(cfg.seed, kStreamForestA));
  result.forest_b = train_forest(split.train, Target::b, cfg.forest,
                                 derive_seed(cfg.seed, kStreamForestB));
  result.report = evaluate(result.training, split.test_rows, result.forest_a,
                           result.forest_b, cfg.prec);
  result.report.train_rows = split.train_rows.size();
  result.report.skipped = result.training.skipped;
  std::copy(result.forest_a.importance().begin(), result.forest_a.importance().end(),
            result.report.importance_a.begin());
  std::copy(result.forest_b.importance().begin(), result.forest_b.importance().end(),
            result.report.importance_b.begin());

  if (write_files) {
    const std::filesystem::path dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw_io("cannot create '" + dir.string() + "': " + ec.message());
    write_file(dir / "training.csv",
               [&](std::ostream& o) { write_training_csv(o, result.training.records); });
    result.forest_a.save_file((dir / "model_a.json").string());
    result.forest_b.save_file((dir / "model_b.json").string());
    write_file(dir / "predictions.csv",
               [&](std::ostream& o) { write_predictions_csv(o, result.report); });
    write_file(dir / "report.csv",
               [&](std::ostream& o) { write_report_csv(o, result.report); });
    write_file(dir / "summary.txt", [&](std::ostream& o) {
      o << summarize(result.report);
      for (const auto& msg : result.training.skip_messages) o << "skipped: " << msg << '\n';
    });
  }
  return result;
}

AveragedPrediction predict_from_samples(const Graph& g, const TrainedForest& forest_a,
                                        const TrainedForest& forest_b,
                                        const ThresholdSpec& spec, double cov,
                                        std::size_t samples, std::size_t sample_size,
                                        std::uint64_t seed) {
  if (samples == 0) throw_invalid("need at least one sample");
  AveragedPrediction out;
  out.a_values.resize(samples);
  out.b_values.resize(samples);
  parallel_for(samples, [&](std::size_t i) {
    SampleSpec s;
    s.target_size = sample_size;
    s.seed = derive_seed(seed, kStreamSample, i);
    const Graph sub = random_walk_sample(g, s);
    const auto t = assign_thresholds(sub, spec, derive_seed(seed, kStreamPhi, i));
    const auto f = extract_features(sub, t, cov);
    out.a_values[i] = forest_a.predict(f).value;
    out.b_values[i] = forest_b.predict(f).value;
  });
  for (std::size_t i = 0; i < samples; ++i) {
    out.a_mean += out.a_values[i] / static_cast<double>(samples);
    out.b_mean += out.b_values[i] / static_cast<double>(samples);
  }
  return out;
}

}  // namespace bitune
