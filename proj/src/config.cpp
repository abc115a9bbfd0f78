#include "bitune/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include "bitune/error.hpp"
#include "bitune/format.hpp"
#include "bitune/search.hpp"

namespace bitune {

namespace {

template <typename T, typename F>
std::vector<T> parse_list(const std::string& value, F&& parse_one) {
  std::vector<T> out;
  if (value.find_first_not_of(" \t") == std::string::npos) return out;
  for (const auto& field : split_fields(value, ',')) out.push_back(parse_one(field));
  return out;
}

std::size_t parse_count(std::string_view text, std::string_view key) {
  const long long v = parse_int(text, key);
  if (v < 0) throw_invalid(std::string(key) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

bool parse_bool(std::string_view text, std::string_view key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw_parse("bad boolean '" + std::string(text) + "' for " + std::string(key));
}

// Accepts plain decimals and simple ratios such as "2/3".
double parse_fraction(std::string_view text, std::string_view key) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_double(text, key);
  const double num = parse_double(text.substr(0, slash), key);
  const double den = parse_double(text.substr(slash + 1), key);
  if (den == 0.0) throw_parse("zero denominator for " + std::string(key));
  return num / den;
}

template <typename T, typename F>
std::string join(const std::vector<T>& values, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt(values[i]);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void ExperimentConfig::set(const std::string& raw_key, const std::string& value) {
  std::string key = raw_key;
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string v = trim(value);

  if (key == "graph_files") {
    graph_files = parse_list<std::string>(v, [](const std::string& s) { return s; });
  } else if (key == "directed") {
    directed = parse_bool(v, key);
  } else if (key == "er_n") {
    er_n = parse_list<std::size_t>(v, [&](const std::string& s) { return parse_count(s, key); });
  } else if (key == "er_k") {
    er_k = parse_list<double>(v, [&](const std::string& s) { return parse_double(s, key); });
  } else if (key == "er_count") {
    er_count = parse_count(v, key);
  } else if (key == "swap_factors") {
    swap_factors = parse_list<double>(v, [&](const std::string& s) { return parse_double(s, key); });
  } else if (key == "swap_biases") {
    swap_biases = parse_list<SwapBias>(v, [](const std::string& s) { return parse_swap_bias(s); });
  } else if (key == "phi") {
    phi = parse_list<ThresholdSpec>(v, [](const std::string& s) { return ThresholdSpec::parse(s); });
  } else if (key == "coverages") {
    coverages = parse_list<double>(v, [&](const std::string& s) { return parse_double(s, key); });
  } else if (key == "samples_per_graph") {
    samples_per_graph = parse_count(v, key);
  } else if (key == "sample_size") {
    sample_size = parse_count(v, key);
  } else if (key == "prec") {
    prec = parse_fraction(v, key);
  } else if (key == "bin_width") {
    bin_width = parse_fraction(v, key);
  } else if (key == "train_fraction") {
    train_fraction = parse_fraction(v, key);
  } else if (key == "trees") {
    forest.tree_count = parse_count(v, key);
  } else if (key == "min_leaf") {
    forest.min_leaf = parse_count(v, key);
  } else if (key == "max_depth") {
    forest.max_depth = parse_count(v, key);
  } else if (key == "features_per_split") {
    forest.features_per_split = parse_count(v, key);
  } else if (key == "seed") {
    const long long s = parse_int(v, key);
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "output_dir") {
    if (v.empty()) throw_invalid("output_dir must not be empty");
    output_dir = v;
  } else {
    throw_invalid("unknown config key '" + raw_key + "'");
  }
}

void ExperimentConfig::validate() const {
  const bool synthetic = !er_n.empty() && !er_k.empty() && er_count > 0;
  if (!synthetic && graph_files.empty()) {
    throw_invalid("config names no graphs (set graph_files or er_n/er_k/er_count)");
  }
  for (const auto& path : graph_files) {
    std::ifstream probe(path);
    if (!probe) throw_io("cannot read graph file '" + path + "'");
  }
  for (double k : er_k) {
    if (!(k > 0.0)) throw_invalid("er_k values must be positive");
  }
  if (swap_factors.empty() || swap_biases.empty()) {
    throw_invalid("swap_factors and swap_biases need at least one entry");
  }
  for (double f : swap_factors) {
    if (!(f >= 0.0)) throw_invalid("swap factors must be non-negative");
  }
  if (phi.empty()) throw_invalid("phi needs at least one threshold spec");
  for (const auto& p : phi) p.validate();
  if (coverages.empty()) throw_invalid("coverages must not be empty");
  for (double c : coverages) {
    if (!(c > 0.0 && c <= 1.0)) throw_invalid("coverage values must lie in (0, 1]");
  }
  if (samples_per_graph == 0) throw_invalid("samples_per_graph must be positive");
  if (sample_size == 1) throw_invalid("sample_size must be 0 or at least 2");
  grid_resolution(prec);
  class_count(bin_width);
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw_invalid("train_fraction must lie in (0, 1)");
  }
  if (forest.tree_count == 0) throw_invalid("trees must be positive");
  if (forest.min_leaf == 0) throw_invalid("min_leaf must be positive");
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw_parse("config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      cfg.set(trim(body.substr(0, eq)), body.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.code(), "config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open config '" + path + "'");
  return parse(in);
}

std::string ExperimentConfig::to_text() const {
  auto num = [](double v) { return format_double(v); };
  auto count = [](std::size_t v) { return std::to_string(v); };
  std::ostringstream out;
  out << "graph_files = " << join(graph_files, [](const std::string& s) { return s; }) << '\n'
      << "directed = " << (directed ? "true" : "false") << '\n'
      << "er_n = " << join(er_n, count) << '\n'
      << "er_k = " << join(er_k, num) << '\n'
      << "er_count = " << er_count << '\n'
      << "swap_factors = " << join(swap_factors, num) << '\n'
      << "swap_biases = "
      << join(swap_biases, [](SwapBias b) { return std::string(swap_bias_name(b)); }) << '\n'
      << "phi = " << join(phi, [](const ThresholdSpec& s) { return s.to_string(); }) << '\n'
      << "coverages = " << join(coverages, num) << '\n'
      << "samples_per_graph = " << samples_per_graph << '\n'
      << "sample_size = " << sample_size << '\n'
      << "prec = " << num(prec) << '\n'
      << "bin_width = " << num(bin_width) << '\n'
      << "train_fraction = " << num(train_fraction) << '\n'
      << "trees = " << forest.tree_count << '\n'
      << "min_leaf = " << forest.min_leaf << '\n'
      << "max_depth = " << forest.max_depth << '\n'
      << "features_per_split = " << forest.features_per_split << '\n'
      << "seed = " << seed << '\n'
      << "output_dir = " << output_dir << '\n';
  return out.str();
}

}  // namespace bitune
