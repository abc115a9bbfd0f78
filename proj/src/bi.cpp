#include "bitune/bi.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "bitune/error.hpp"

namespace bitune {

namespace {

constexpr double kSimplexTolerance = 1e-9;

// Scores that differ by less than this relative amount count as tied, so
// that rounding noise cannot override the lowest-id rule.
constexpr double kTieTolerance = 1e-9;

bool beats(double candidate, double incumbent) {
  if (incumbent == kInactiveScoreFloor) return candidate > incumbent;
  const double scale = std::max(1.0, std::abs(incumbent));
  return candidate > incumbent + kTieTolerance * scale;
}

// Fills `scores` and returns the lowest-id maximizer among inactive nodes,
// or the node count when every node is active.
NodeId score_into(const Graph& g, const Cascade& state, const BIParams& p,
                  std::vector<double>& scores, std::vector<double>& ready) {
  const std::size_t n = g.node_count();
  scores.assign(n, kInactiveScoreFloor);

  if (p.c != 0.0) {
    // ready[j] = k~out_j - 1 for inactive j with r~_j == 1, else 0.
    ready.assign(n, 0.0);
    for (NodeId j = 0; j < n; ++j) {
      if (!state.is_active(j) && state.residual_resistance(j) == 1) {
        ready[j] = static_cast<double>(state.residual_out_degree(j)) - 1.0;
      }
    }
  }

  NodeId best = static_cast<NodeId>(n);
  double best_score = kInactiveScoreFloor;
  for (NodeId v = 0; v < n; ++v) {
    if (state.is_active(v)) continue;
    const std::uint32_t rr = state.residual_resistance(v);
    const double r_term = rr == kUnreachable ? 0.0 : static_cast<double>(rr);
    double score = p.a * r_term +
                   p.b * static_cast<double>(state.residual_out_degree(v));
    if (p.c != 0.0) {
      double spread = 0.0;
      for (NodeId j : g.out(v)) spread += ready[j];
      score += p.c * spread;
    }
    scores[v] = score;
    if (best == n || beats(score, best_score)) {
      best = v;
      best_score = score;
    }
  }
  return best;
}

}  // namespace

BIParams BIParams::make(double a, double b, double c) {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) {
    throw_invalid("BI parameters must be non-negative");
  }
  if (std::abs(a + b + c - 1.0) > kSimplexTolerance) {
    throw_invalid("BI parameters must sum to 1");
  }
  return {a, b, c};
}

BIParams BIParams::from_ab(double a, double b) {
  double c = 1.0 - a - b;
  if (c < 0.0 && c > -kSimplexTolerance) c = 0.0;
  return make(a, b, c);
}

BIParams BIParams::normalized(double a, double b, double c) {
  a = std::max(0.0, a);
  b = std::max(0.0, b);
  c = std::max(0.0, c);
  const double sum = a + b + c;
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw_invalid("cannot normalize an all-zero parameter triple");
  }
  return {a / sum, b / sum, c / sum};
}

BIParams preset(Preset p) {
  switch (p) {
    case Preset::res:
      return {1.0, 0.0, 0.0};
    case Preset::deg:
      return {0.0, 1.0, 0.0};
    case Preset::rd:
      return {0.5, 0.5, 0.0};
    case Preset::ci_tm:
      return {0.0, 0.5, 0.5};
  }
  throw_invalid("unknown preset");
}

Preset parse_preset(std::string_view name) {
  std::string lower(name);
  for (char& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lower == "res") return Preset::res;
  if (lower == "deg") return Preset::deg;
  if (lower == "rd") return Preset::rd;
  if (lower == "ci-tm" || lower == "citm" || lower == "ci_tm") return Preset::ci_tm;
  throw_invalid("unknown preset '" + std::string(name) +
                "' (expected res, deg, RD or CI-TM)");
}

std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::res:
      return "res";
    case Preset::deg:
      return "deg";
    case Preset::rd:
      return "RD";
    case Preset::ci_tm:
      return "CI-TM";
  }
  return "?";
}

std::vector<double> bi_scores(const Graph& g, const Cascade& state,
                              const BIParams& p) {
  std::vector<double> scores, ready;
  score_into(g, state, p, scores, ready);
  return scores;
}

SelectionResult select_initiators(const Graph& g, const ThresholdAssignment& t,
                                  const BIParams& p, double cov) {
  const std::size_t need = required_active(cov, g.node_count());
  Cascade state(g, t);
  SelectionResult out;
  std::vector<double> scores, ready;
  while (state.active_count() < need) {
    const NodeId pick = score_into(g, state, p, scores, ready);
    out.seeds.push_back(pick);
    state.seed(pick);
  }
  out.cascade = state.result();
  return out;
}

std::vector<std::size_t> initiators_for_coverages(const Graph& g,
                                                  const ThresholdAssignment& t,
                                                  const BIParams& p,
                                                  std::span<const double> covs) {
  std::vector<std::size_t> need(covs.size());
  std::size_t most = 0;
  for (std::size_t i = 0; i < covs.size(); ++i) {
    need[i] = required_active(covs[i], g.node_count());
    most = std::max(most, need[i]);
  }

  std::vector<std::size_t> counts(covs.size(), 0);
  Cascade state(g, t);
  std::vector<double> scores, ready;
  std::size_t picks = 0;
  auto record = [&] {
    for (std::size_t i = 0; i < covs.size(); ++i) {
      if (counts[i] == 0 && state.active_count() >= need[i]) counts[i] = picks;
    }
  };
  while (state.active_count() < most) {
    state.seed(score_into(g, state, p, scores, ready));
    ++picks;
    record();
  }
  return counts;
}

}  // namespace bitune
