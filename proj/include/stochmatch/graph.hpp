#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stochmatch/random.hpp"

namespace stochmatch {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double p = 1.0;

  VertexId other(VertexId w) const { return w == u ? v : u; }
};

/// Simple undirected graph whose edges carry realization probabilities.
/// Vertices are 0..n-1; edges keep the index they were given at construction.
class StochasticGraph {
 public:
  StochasticGraph() = default;

  /// Validates: endpoints < n, no self-loops, no duplicate pairs, 0 < p <= 1.
  StochasticGraph(std::size_t n, std::vector<Edge> edges);

  std::size_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  /// Minimum edge probability; 1 on an edgeless graph.
  double p_min() const { return p_min_; }

  /// Incident edge ids of v, ordered by ascending neighbor id.
  std::span<const EdgeId> incident(VertexId v) const {
    return {incidence_.data() + offsets_[v], incidence_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const;

  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<EdgeId> incidence_;
  double p_min_ = 1.0;
};

/// Presence indicator per edge index of a parent graph.
struct Realization {
  std::vector<char> present;

  std::size_t count() const;
  std::vector<EdgeId> edge_ids() const;
};

/// Each edge present independently with its probability. Edge e reads the
/// e-th value of the stream (seed, key).
Realization sample_realization(const StochasticGraph& g, std::uint64_t seed, const StreamKey& key);

/// Strict reader for the text format: "n m" then m lines "u v p".
StochasticGraph parse_graph(std::istream& in);
StochasticGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const StochasticGraph& g);

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Hop distances from source over the given edges; kUnreachable where disconnected.
std::vector<std::uint32_t> bfs_distances(std::size_t n, std::span<const Edge> edges,
                                         VertexId source);

}  // namespace stochmatch
