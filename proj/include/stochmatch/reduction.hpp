#pragma once

// Vertex sparsification by random bucketing, and lifting a sparsifier of the
// contracted graph back to the original edges.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stochmatch/graph.hpp"
#include "stochmatch/sparsifier.hpp"

namespace stochmatch {

struct Contraction {
  std::size_t k = 0;
  std::vector<std::uint32_t> bucket;          // per original vertex
  StochasticGraph merged;                     // on k vertices
  std::vector<std::vector<EdgeId>> origin;    // per merged edge, ascending original ids
};

/// k = ceil(8 opt / eps) uniformly random buckets.
std::size_t bucket_count(double epsilon, double opt_estimate);

Contraction contract(const StochasticGraph& g, double epsilon, double opt_estimate,
                     std::uint64_t seed);

/// Contraction under a given assignment. Edges inside a bucket are dropped and
/// parallel edges merged with p = 1 - prod(1 - p').
Contraction contract_with_buckets(const StochasticGraph& g, std::size_t k,
                                  std::vector<std::uint32_t> bucket);

/// min{ceil(ln(1/eps) / p_min), |E(e)|} is applied per merged edge; this is the first term.
std::size_t lift_cap(double epsilon, double p_min);

struct LiftedQ {
  std::vector<char> member;  // over original edges
  std::size_t cap = 0;

  std::vector<EdgeId> member_edges() const;
  std::size_t max_degree(const StochasticGraph& g) const;
};

/// For each member edge of qH, keeps its lowest-id origin edges up to the cap.
LiftedQ lift(const SubgraphQ& qH, const Contraction& c, std::size_t original_edges, double epsilon,
             double p_min);

/// The contraction analysis needs opt > 3 / eps^3.
bool reduction_precondition(double opt, double epsilon);

}  // namespace stochmatch
