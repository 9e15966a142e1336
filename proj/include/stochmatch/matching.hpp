#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "stochmatch/graph.hpp"

namespace stochmatch {

struct Matching {
  std::vector<EdgeId> edges;     // ascending edge ids
  std::vector<VertexId> mate;    // per vertex, kNoVertex if unmatched

  std::size_t size() const { return edges.size(); }
  bool covers(VertexId v) const { return mate[v] != kNoVertex; }
};

using VertexPair = std::pair<VertexId, VertexId>;

/// Deterministic maximum-cardinality matching (Edmonds' blossom algorithm).
///
/// The result is a pure function of the set of unordered pairs: adjacency is
/// canonicalized (ascending neighbor ids, duplicates dropped), the greedy
/// warm start and the augmenting searches visit vertices in ascending order.
/// Returns the mate array.
std::vector<VertexId> max_matching_mates(std::size_t n, std::span<const VertexPair> pairs);

/// Maximum matching of the subgraph of g formed by the given edge ids.
Matching max_matching(const StochasticGraph& g, std::span<const EdgeId> edge_ids);

/// Maximum matching of the realized subgraph.
Matching max_matching(const StochasticGraph& g, const Realization& r);

std::size_t mu(const StochasticGraph& g, std::span<const EdgeId> edge_ids);
std::size_t mu(const StochasticGraph& g, const Realization& r);

/// True iff the edge ids are pairwise vertex-disjoint.
bool is_matching(const StochasticGraph& g, std::span<const EdgeId> edge_ids);

}  // namespace stochmatch
