#include "bitune/ltm.hpp"

#include <cmath>
#include <sstream>

#include "bitune/error.hpp"
#include "bitune/format.hpp"
#include "bitune/rng.hpp"

namespace bitune {

namespace {

// Absorbs representation error in phi * k_in so that, e.g., 0.3 * 10 counts
// as exactly 3 rather than rounding up to 4.
constexpr double kCeilSlack = 1e-9;

}  // namespace

ThresholdSpec ThresholdSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.empty()) throw_parse("empty threshold spec");

  ThresholdSpec spec;
  const std::string& name = parts[0];
  std::size_t arity = 0;
  if (name == "fixed") {
    spec.kind = Kind::fixed;
    arity = 1;
  } else if (name == "uniform") {
    spec.kind = Kind::uniform;
    arity = 2;
  } else if (name == "normal" || name == "truncnormal") {
    spec.kind = Kind::truncated_normal;
    arity = 2;
  } else {
    throw_parse("unknown threshold distribution '" + name +
                "' (expected fixed, uniform or normal)");
  }
  if (parts.size() != arity + 1) {
    throw_parse("threshold spec '" + text + "' needs " + std::to_string(arity) +
                " parameter(s)");
  }
  spec.p1 = parse_double(parts[1], "threshold spec '" + text + "'");
  spec.p2 = arity > 1 ? parse_double(parts[2], "threshold spec '" + text + "'") : 0.0;
  spec.validate();
  return spec;
}

std::string ThresholdSpec::to_string() const {
  switch (kind) {
    case Kind::fixed:
      return "fixed:" + format_double(p1);
    case Kind::uniform:
      return "uniform:" + format_double(p1) + ':' + format_double(p2);
    case Kind::truncated_normal:
      return "normal:" + format_double(p1) + ':' + format_double(p2);
  }
  return {};
}

void ThresholdSpec::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
  switch (kind) {
    case Kind::fixed:
      if (!in_unit(p1)) throw_invalid("fixed threshold must lie in (0, 1]");
      return;
    case Kind::uniform:
      if (!(p1 > 0.0 && p1 <= p2 && p2 <= 1.0)) {
        throw_invalid("uniform thresholds need 0 < lo <= hi <= 1");
      }
      return;
    case Kind::truncated_normal:
      // Rejection sampling needs non-negligible mass in (0, 1].
      if (!in_unit(p1) || !(p2 >= 0.0) || !std::isfinite(p2)) {
        throw_invalid("normal thresholds need mean in (0, 1] and std >= 0");
      }
      return;
  }
}

std::uint32_t resistance_for(double phi, std::size_t k_in) {
  if (k_in == 0) return kUnreachable;
  const double need = std::ceil(phi * static_cast<double>(k_in) - kCeilSlack);
  return need < 1.0 ? 1u : static_cast<std::uint32_t>(need);
}

ThresholdAssignment thresholds_from_phi(const Graph& g, std::vector<double> phi) {
  if (phi.size() != g.node_count()) {
    throw_invalid("threshold count does not match node count");
  }
  ThresholdAssignment t;
  t.resistance.resize(phi.size());
  for (NodeId v = 0; v < phi.size(); ++v) {
    if (!(phi[v] > 0.0 && phi[v] <= 1.0)) {
      throw_invalid("threshold of node " + g.label(v) + " outside (0, 1]");
    }
    t.resistance[v] = resistance_for(phi[v], g.in_degree(v));
  }
  t.phi = std::move(phi);
  return t;
}

ThresholdAssignment assign_thresholds(const Graph& g, const ThresholdSpec& spec,
                                      std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::vector<double> phi(g.node_count());
  for (double& p : phi) {
    switch (spec.kind) {
      case ThresholdSpec::Kind::fixed:
        p = spec.p1;
        break;
      case ThresholdSpec::Kind::uniform:
        p = rng.uniform(spec.p1, spec.p2);
        break;
      case ThresholdSpec::Kind::truncated_normal:
        if (spec.p2 == 0.0) {
          p = spec.p1;
          break;
        }
        do {
          p = rng.normal(spec.p1, spec.p2);
        } while (!(p > 0.0 && p <= 1.0));
        break;
    }
  }
  return thresholds_from_phi(g, std::move(phi));
}

std::size_t required_active(double cov, std::size_t n) {
  if (!(cov > 0.0 && cov <= 1.0)) throw_invalid("coverage must lie in (0, 1]");
  const double need = std::ceil(cov * static_cast<double>(n) - kCeilSlack);
  return need < 1.0 ? 1 : static_cast<std::size_t>(need);
}

Cascade::Cascade(const Graph& g, const ThresholdAssignment& t)
    : g_(&g),
      t_(&t),
      active_(g.node_count(), 0),
      pressure_(g.node_count(), 0),
      residual_out_(g.node_count(), 0) {
  if (t.size() != g.node_count()) {
    throw_invalid("threshold assignment does not match graph");
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    residual_out_[v] = static_cast<std::uint32_t>(g.out_degree(v));
  }
  order_.reserve(g.node_count());
  queue_.reserve(g.node_count());
}

void Cascade::activate(NodeId v) {
  active_[v] = 1;
  order_.push_back(v);
  queue_.push_back(v);
  for (NodeId u : g_->in(v)) --residual_out_[u];
}

void Cascade::propagate() {
  // queue_ acts as a FIFO over [head, size).
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const NodeId u = queue_[head];
    for (NodeId w : g_->out(u)) {
      ++pressure_[w];
      if (!active_[w] && pressure_[w] >= t_->resistance[w]) activate(w);
    }
  }
  queue_.clear();
}

std::size_t Cascade::seed(NodeId v) {
  if (v >= active_.size()) throw_invalid("seed outside graph");
  if (active_[v]) return 0;
  const std::size_t before = order_.size();
  activate(v);
  propagate();
  return order_.size() - before;
}

std::size_t Cascade::seed_all(std::span<const NodeId> seeds) {
  for (NodeId s : seeds) {
    if (s >= active_.size()) throw_invalid("seed outside graph");
  }
  const std::size_t before = order_.size();
  for (NodeId s : seeds) {
    if (!active_[s]) activate(s);
  }
  propagate();
  return order_.size() - before;
}

std::uint32_t Cascade::residual_resistance(NodeId v) const {
  if (active_[v]) return 0;
  const std::uint32_t r = t_->resistance[v];
  if (r == kUnreachable) return kUnreachable;
  return r - pressure_[v];
}

CascadeResult Cascade::result() const {
  CascadeResult r;
  r.active = NodeSet(active_.size(), order_);
  r.activation_order = order_;
  r.coverage = active_.empty()
                   ? 0.0
                   : static_cast<double>(order_.size()) /
                         static_cast<double>(active_.size());
  return r;
}

CascadeResult run_cascade(const Graph& g, const ThresholdAssignment& t,
                          std::span<const NodeId> seeds) {
  if (seeds.empty()) throw_invalid("cascade needs at least one seed");
  Cascade c(g, t);
  c.seed_all(seeds);
  return c.result();
}

}  // namespace bitune
