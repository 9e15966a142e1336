#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace stochmatch {

/// Undirected graph stored as a clique cover: two nodes are adjacent iff they
/// share at least one clique. An explicit edge list is the special case of
/// 2-cliques; the hyperwalk conflict graph uses one clique per walk vertex.
class ConflictGraph {
 public:
  ConflictGraph() = default;
  ConflictGraph(std::size_t num_nodes, std::vector<std::vector<std::uint32_t>> cliques);

  static ConflictGraph from_edges(std::size_t num_nodes,
                                  std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

  std::size_t num_nodes() const { return num_nodes_; }
  const std::vector<std::vector<std::uint32_t>>& cliques() const { return cliques_; }
  std::span<const std::uint32_t> cliques_of(std::uint32_t node) const {
    return {node_cliques_.data() + node_offsets_[node],
            node_cliques_.data() + node_offsets_[node + 1]};
  }

  /// Sorted neighbor list, excluding the node itself.
  std::vector<std::uint32_t> neighbors(std::uint32_t node) const;
  bool adjacent(std::uint32_t a, std::uint32_t b) const;
  std::size_t num_edges() const;
  std::size_t max_degree() const;

 private:
  std::size_t num_nodes_ = 0;
  std::vector<std::vector<std::uint32_t>> cliques_;
  std::vector<std::size_t> node_offsets_{0};
  std::vector<std::uint32_t> node_cliques_;
};

struct MisOptions {
  double round_constant = 1.0;
  /// Degree used for the round budget; defaults to the graph's max degree.
  std::optional<std::size_t> degree_bound;
};

struct MisResult {
  std::vector<std::uint32_t> independent;  // ascending
  std::vector<std::uint32_t> undecided;    // ascending
  std::size_t round_budget = 0;
  std::size_t rounds_used = 0;
};

/// Priority of a node in a given round; lower wins, ties broken by node id.
using PriorityFn = std::function<std::uint64_t(std::uint32_t node, std::uint32_t round)>;

/// ceil(c * log2((delta + 2) / d)) with d = eps / (10 (delta + 1)); at least 1.
std::size_t mis_round_budget(std::size_t delta, double epsilon, double round_constant);

/// Round-synchronous randomized greedy MIS (Luby's permutation variant),
/// stopped after the round budget. Each round, every active node that holds
/// the smallest priority in all of its cliques joins the set and its
/// neighbors retire. Nodes still active at the end are undecided.
MisResult apx_mis(const ConflictGraph& h, double epsilon, const PriorityFn& priority,
                  const MisOptions& options = {});

/// Same with priorities drawn freshly from seed (node ids are re-randomized per call).
MisResult apx_mis(const ConflictGraph& h, double epsilon, std::uint64_t seed,
                  const MisOptions& options = {});

/// Extends the result to a maximal independent set by adding undecided nodes
/// in ascending order.
std::vector<std::uint32_t> greedy_complete(const ConflictGraph& h, const MisResult& result);

bool is_independent(const ConflictGraph& h, std::span<const std::uint32_t> nodes);
bool is_maximal_independent(const ConflictGraph& h, std::span<const std::uint32_t> nodes);

}  // namespace stochmatch
