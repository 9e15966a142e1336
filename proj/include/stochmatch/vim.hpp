#pragma once

// Vertex-independent matching of the crucial graph: recursive FindMatching over
// profiles of independent realizations, improved by vertex-disjoint augmenting
// hyperwalks chosen with a round-limited MIS.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "stochmatch/decomposition.hpp"
#include "stochmatch/graph.hpp"
#include "stochmatch/matching.hpp"
#include "stochmatch/mis.hpp"

namespace stochmatch {

struct VimParams {
  double epsilon = 0.3;
  std::size_t alpha = 7;
  std::size_t depth = 3;
  std::size_t walk_cap = 3;  // largest hyperwalk size considered (inclusive)
  std::size_t gamma_samples = 400;
  std::optional<double> saturation_slack;  // defaults to 2 eps^2
  double gamma_z = 3.0;                    // standard errors subtracted from the threshold
  double mis_round_constant = 1.0;
  std::size_t max_conflict_nodes = 200000;

  double slack() const { return saturation_slack ? *saturation_slack : 2.0 * epsilon * epsilon; }
  void validate() const;

  static VimParams desk(double epsilon);
  /// alpha = 1/eps^7 - 1, depth = ceil(1/eps^9), walk_cap = ceil(2/eps) - 1.
  /// Refuses (ParameterOverflow) when alpha > 64 or depth > 10 unless forced.
  static VimParams paper_faithful(double epsilon, bool force = false);
};

/// The crucial graph as a standalone indexed graph. Local edge i corresponds to
/// edge g_edge(i) of the input graph; vertex ids are shared with the input.
class CrucialGraph {
 public:
  CrucialGraph(const StochasticGraph& g, const EdgeClassification& cls);

  std::size_t n() const { return c_.size(); }
  std::size_t m() const { return edges_.size(); }
  const Edge& edge(std::uint32_t i) const { return edges_[i]; }
  EdgeId g_edge(std::uint32_t i) const { return g_ids_[i]; }
  std::span<const std::uint32_t> incident(VertexId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  double c(VertexId v) const { return c_[v]; }
  std::size_t max_degree() const { return delta_; }

  /// Restriction of a realization of G to C.
  std::vector<char> project(const Realization& r) const;
  std::vector<std::uint32_t> distances_from(VertexId v) const;

 private:
  std::vector<Edge> edges_;
  std::vector<EdgeId> g_ids_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> adj_;  // local edge ids sorted by (neighbor, id)
  std::vector<double> c_;
  std::size_t delta_ = 0;
};

inline constexpr std::uint32_t kNoSlotEdge = 0xffffffffu;

/// alpha + 1 subgraphs of C with a matching in each.
struct Profile {
  std::vector<std::vector<char>> present;         // [slot][local edge]
  std::vector<std::vector<std::uint32_t>> mate;   // [slot][vertex] -> local edge or kNoSlotEdge

  Profile() = default;
  Profile(std::size_t slots, std::size_t n, std::size_t m);

  std::size_t slots() const { return present.size(); }
  bool in_matching(const CrucialGraph& c, std::size_t slot, std::uint32_t e) const;
  std::size_t d(VertexId v) const;
  std::size_t total_d() const;
  std::size_t matching_size(std::size_t slot) const;
  /// Every M_i is a matching of its subgraph and mate entries are symmetric.
  bool valid(const CrucialGraph& c) const;
};

struct HyperStep {
  std::uint32_t edge;  // local edge of C
  std::uint32_t slot;
  friend auto operator<=>(const HyperStep&, const HyperStep&) = default;
};

struct Hyperwalk {
  VertexId start = kNoVertex;
  std::vector<HyperStep> steps;

  std::size_t size() const { return steps.size(); }
  /// Vertex sequence of the underlying walk (size() + 1 entries).
  std::vector<VertexId> vertices(const CrucialGraph& c) const;
  VertexId end(const CrucialGraph& c) const;
  Hyperwalk reversed(const CrucialGraph& c) const;
  Hyperwalk canonical(const CrucialGraph& c) const;
  friend auto operator<=>(const Hyperwalk&, const Hyperwalk&) = default;
};

/// Steps are consecutive edges of a walk starting at `start`, slots in range.
bool is_structurally_valid(const CrucialGraph& c, std::size_t slots, const Hyperwalk& w);

/// Applying W (odd steps added, even steps removed, per slot) keeps every
/// M_i a matching inside its subgraph, leaves d unchanged at interior vertices
/// and raises it by one at both endpoints.
bool is_augmenting(const CrucialGraph& c, const Profile& p, const Hyperwalk& w);

/// Canonical augmenting hyperwalks of size 1..walk_cap with unsaturated
/// endpoints, sorted and deduplicated. Each (edge, slot) pair is used at most
/// once per walk and every prefix must keep all matchings valid away from the
/// current head. Throws ConflictGraphTooLarge past max_walks.
std::vector<Hyperwalk> enumerate_augmenting_hyperwalks(const CrucialGraph& c, const Profile& p,
                                                       const std::vector<char>& saturated,
                                                       std::size_t walk_cap,
                                                       std::size_t max_walks = 200000);

/// One node per walk, adjacent iff the walks share a vertex.
ConflictGraph build_conflict_graph(const CrucialGraph& c, std::span<const Hyperwalk> walks);

/// Applies pairwise vertex-disjoint walks. Throws Error if a matching breaks.
void apply_hyperwalks(const CrucialGraph& c, Profile& p, std::span<const Hyperwalk> walks);

struct LevelTrace {
  std::size_t level = 0;
  std::size_t walks = 0;
  std::size_t independent = 0;
  std::size_t d_before = 0;
  std::size_t d_after = 0;
  std::size_t mis_rounds = 0;
  std::vector<std::size_t> slot_sizes;  // |M'_i| after application
};

/// Per-vertex Monte Carlo estimate of Pr[v matched by FindMatching(level)].
struct GammaEstimate {
  std::size_t level = 0;
  std::size_t samples = 0;
  std::vector<double> mean;
  std::vector<double> se;
};

/// Where the randomness of one top-level run comes from. When `inside` is set,
/// draws located outside the marked vertex set come from alt_seed instead.
struct VimRun {
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;
  const std::vector<char>* inside = nullptr;
  std::uint64_t alt_seed = 0;
};

struct RadiusReport {
  VertexId vertex = kNoVertex;
  std::size_t radius = 0;      // max over trials
  std::size_t bound = 0;       // depth * ((2T + 1) * walk_cap + 1)
  std::size_t eccentricity = 0;
  std::size_t trials = 0;
};

class VimContext {
 public:
  VimContext(const StochasticGraph& g, const EdgeClassification& cls, VimParams params,
             std::uint64_t gamma_seed);

  const CrucialGraph& crucial() const { return c_; }
  const VimParams& params() const { return params_; }
  const StochasticGraph& graph() const { return g_; }

  /// gamma estimate for FindMatching(level); level 0 is identically zero.
  const GammaEstimate& gamma(std::size_t level);
  std::vector<char> saturated_at(std::size_t level);

  /// FindMatching(r, C) on a realization of C (indexed by local edge).
  /// Returns a matching in the ids of G.
  Matching find_matching(std::size_t r, const std::vector<char>& realized, const VimRun& run,
                         std::vector<LevelTrace>* trace = nullptr);
  /// Convenience: realization of C drawn from (seed, run_index).
  std::vector<char> draw_input(const VimRun& run) const;

  std::size_t mis_degree_bound() const;
  std::size_t mis_rounds() const;
  std::size_t locality_bound(std::size_t r) const;

  RadiusReport dependency_radius(VertexId v, std::size_t r, std::uint64_t seed,
                                 std::size_t trials);

 private:
  std::vector<std::uint32_t> recurse(std::size_t r, const std::vector<char>& realized,
                                     std::uint64_t path, const VimRun& run,
                                     std::vector<LevelTrace>* trace);
  std::uint64_t edge_seed(std::uint32_t local_edge, const VimRun& run) const;
  std::uint64_t vertex_seed(VertexId v, const VimRun& run) const;
  Matching to_matching(const std::vector<std::uint32_t>& mate) const;

  const StochasticGraph& g_;
  CrucialGraph c_;
  VimParams params_;
  std::uint64_t gamma_seed_;
  std::map<std::size_t, GammaEstimate> gamma_;
};

/// Standalone estimate with a fresh context.
GammaEstimate estimate_gamma(const StochasticGraph& g, const EdgeClassification& cls,
                             const VimParams& params, std::size_t r, std::uint64_t seed);

}  // namespace stochmatch
