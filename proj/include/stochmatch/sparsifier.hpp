#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stochmatch/graph.hpp"

namespace stochmatch {

/// Union of R matchings with per-edge multiplicities.
struct SubgraphQ {
  std::size_t R = 0;
  std::vector<char> member;        // member[e] == (t[e] > 0)
  std::vector<std::uint32_t> t;    // number of matchings containing e

  std::vector<EdgeId> member_edges() const;
  std::size_t size() const;
  /// Max degree of the member subgraph.
  std::size_t max_degree(const StochasticGraph& g) const;
};

/// Draws R independent realizations (streams keyed SparsifierSample/i) and
/// takes the union of their deterministic maximum matchings.
SubgraphQ build_q(const StochasticGraph& g, std::size_t R, std::uint64_t seed);

inline constexpr std::size_t kDefaultRCap = 1'000'000;

/// ceil(1 / (2 tau_minus)). Throws ParameterOverflow above cap.
std::size_t default_R(double tau_minus, std::size_t cap = kDefaultRCap);

/// Deterministic baseline: repeatedly take a maximum matching of the
/// remaining graph and remove its edges, R times.
SubgraphQ build_baseline_iterative(const StochasticGraph& g, std::size_t R);

struct QEvaluation {
  Realization realized;  // realized member edges of Q (indexed over g's edges)
  std::size_t mu = 0;
};

/// Realizes Q with a fresh Evaluation-tagged stream (disjoint from the
/// SparsifierSample keys used by build_q) and returns mu of the result.
QEvaluation realize_and_match_q(const StochasticGraph& g, const SubgraphQ& q,
                                std::uint64_t seed, std::uint64_t eval_index);

/// Same, but intersecting Q with an already drawn realization of G.
QEvaluation realize_and_match_q(const StochasticGraph& g, const SubgraphQ& q,
                                const Realization& realization_of_g);

}  // namespace stochmatch
