#pragma once

#include <cstddef>
#include <vector>

#include "stochmatch/graph.hpp"
#include "stochmatch/thresholds.hpp"

namespace stochmatch {

/// Ground truth by enumerating all 2^m realizations (exact to double precision).
struct ExactStats {
  double opt = 0.0;
  std::vector<double> q;             // Pr[e in MM(G)] per edge
  std::vector<double> matched_prob;  // Pr[v matched in MM(G)] per vertex
};

inline constexpr std::size_t kDefaultOracleEdgeCap = 20;

/// Realizations are visited in binary counting order (bit e = edge e present)
/// and matched with the same deterministic max_matching used everywhere else.
/// Throws InstanceTooLarge when m exceeds max_edges.
ExactStats exact_stats(const StochasticGraph& g, std::size_t max_edges = kDefaultOracleEdgeCap);

struct CrucialSplit {
  std::vector<EdgeLabel> labels;
  std::vector<EdgeId> crucial, noncrucial, ignored;
  std::vector<double> c;  // per vertex: probability of being matched via a crucial edge
  std::vector<double> n;  // per vertex: same for non-crucial edges
};

CrucialSplit exact_crucial_split(const StochasticGraph& g, const ExactStats& stats,
                                 double tau_minus, double tau_plus);

}  // namespace stochmatch
