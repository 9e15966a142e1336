#pragma once

// Independent reference implementations used as test oracles.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "stochmatch/graph.hpp"

namespace testsupport {

using stochmatch::Edge;
using stochmatch::EdgeId;
using stochmatch::StochasticGraph;

/// Maximum matching size by trying every edge subset.
inline std::size_t brute_force_mu(const StochasticGraph& g, const std::vector<EdgeId>& ids) {
  const std::size_t k = ids.size();
  std::size_t best = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
    std::vector<char> used(g.n(), 0);
    std::size_t size = 0;
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      const Edge& e = g.edge(ids[i]);
      if (used[e.u] || used[e.v]) ok = false;
      used[e.u] = used[e.v] = 1;
      ++size;
    }
    if (ok) best = std::max(best, size);
  }
  return best;
}

inline std::vector<EdgeId> all_edges(const StochasticGraph& g) {
  std::vector<EdgeId> ids(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) ids[e] = e;
  return ids;
}

/// Random simple graph with at most max_edges edges, using std::mt19937_64
/// so the corpus does not depend on the library's own streams.
inline StochasticGraph random_small_graph(std::uint64_t seed, std::size_t max_n,
                                          std::size_t max_edges) {
  std::mt19937_64 rng(seed);
  const std::size_t n = 2 + rng() % (max_n - 1);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) pairs.push_back({u, v});
  std::shuffle(pairs.begin(), pairs.end(), rng);
  const std::size_t m = std::min(pairs.size(), 1 + rng() % max_edges);
  std::uniform_real_distribution<double> prob(0.1, 1.0);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < m; ++i) {
    double p = prob(rng);
    if (rng() % 6 == 0) p = 1.0;
    edges.push_back({pairs[i].first, pairs[i].second, p});
  }
  return StochasticGraph(n, std::move(edges));
}

inline StochasticGraph petersen() {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i < 5; ++i) {
    e.push_back({i, (i + 1) % 5, 1.0});
    e.push_back({i, i + 5, 1.0});
    e.push_back({i + 5, (i + 2) % 5 + 5, 1.0});
  }
  return StochasticGraph(10, std::move(e));
}

inline double binomial_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace testsupport
