#include "stochmatch/mis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stochmatch/error.hpp"
#include "stochmatch/random.hpp"

namespace stochmatch {

ConflictGraph::ConflictGraph(std::size_t num_nodes, std::vector<std::vector<std::uint32_t>> cliques)
    : num_nodes_(num_nodes), cliques_(std::move(cliques)) {
  node_offsets_.assign(num_nodes_ + 1, 0);
  for (const auto& c : cliques_) {
    for (std::uint32_t w : c) {
      if (w >= num_nodes_) throw InvalidArgument("clique member out of range");
      ++node_offsets_[w + 1];
    }
  }
  for (std::size_t i = 0; i < num_nodes_; ++i) node_offsets_[i + 1] += node_offsets_[i];
  node_cliques_.resize(node_offsets_[num_nodes_]);
  std::vector<std::size_t> fill(node_offsets_.begin(), node_offsets_.end() - 1);
  for (std::uint32_t ci = 0; ci < cliques_.size(); ++ci)
    for (std::uint32_t w : cliques_[ci]) node_cliques_[fill[w]++] = ci;
}

ConflictGraph ConflictGraph::from_edges(
    std::size_t num_nodes, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
  std::vector<std::vector<std::uint32_t>> cliques;
  cliques.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a == b) throw InvalidArgument("conflict graph must be simple");
    cliques.push_back({a, b});
  }
  return ConflictGraph(num_nodes, std::move(cliques));
}

std::vector<std::uint32_t> ConflictGraph::neighbors(std::uint32_t node) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t ci : cliques_of(node))
    for (std::uint32_t w : cliques_[ci])
      if (w != node) out.push_back(w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ConflictGraph::adjacent(std::uint32_t a, std::uint32_t b) const {
  if (a == b) return false;
  auto ca = cliques_of(a);
  auto cb = cliques_of(b);
  // Both lists are ascending by construction.
  std::size_t i = 0, j = 0;
  while (i < ca.size() && j < cb.size()) {
    if (ca[i] == cb[j]) return true;
    if (ca[i] < cb[j])
      ++i;
    else
      ++j;
  }
  return false;
}

std::size_t ConflictGraph::num_edges() const {
  std::size_t total = 0;
  for (std::uint32_t w = 0; w < num_nodes_; ++w) total += neighbors(w).size();
  return total / 2;
}

std::size_t ConflictGraph::max_degree() const {
  std::size_t best = 0;
  for (std::uint32_t w = 0; w < num_nodes_; ++w) best = std::max(best, neighbors(w).size());
  return best;
}

std::size_t mis_round_budget(std::size_t delta, double epsilon, double round_constant) {
  const double d = static_cast<double>(delta);
  const double failure = epsilon / (10.0 * (d + 1.0));
  const double rounds = std::ceil(round_constant * std::log2((d + 2.0) / failure));
  if (!std::isfinite(rounds) || rounds > 1e6) throw ParameterOverflow("MIS round budget overflows");
  return std::max<std::size_t>(1, static_cast<std::size_t>(rounds));
}

MisResult apx_mis(const ConflictGraph& h, double epsilon, const PriorityFn& priority,
                  const MisOptions& options) {
  const std::size_t n = h.num_nodes();
  const std::size_t delta = options.degree_bound ? *options.degree_bound : h.max_degree();
  MisResult out;
  out.round_budget = mis_round_budget(delta, epsilon, options.round_constant);

  std::vector<char> active(n, 1), chosen(n, 0);
  std::vector<std::uint64_t> pr(n, 0);
  std::vector<std::uint32_t> clique_min(h.cliques().size());
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::size_t remaining = n;

  auto beats = [&](std::uint32_t a, std::uint32_t b) {
    return pr[a] < pr[b] || (pr[a] == pr[b] && a < b);
  };

  for (std::size_t round = 0; round < out.round_budget && remaining > 0; ++round) {
    ++out.rounds_used;
    for (std::uint32_t w = 0; w < n; ++w)
      if (active[w]) pr[w] = priority(w, static_cast<std::uint32_t>(round));
    for (std::size_t ci = 0; ci < h.cliques().size(); ++ci) {
      std::uint32_t best = kNone;
      for (std::uint32_t w : h.cliques()[ci])
        if (active[w] && (best == kNone || beats(w, best))) best = w;
      clique_min[ci] = best;
    }
    std::vector<std::uint32_t> joined;
    for (std::uint32_t w = 0; w < n; ++w) {
      if (!active[w]) continue;
      bool local_min = true;
      for (std::uint32_t ci : h.cliques_of(w)) {
        if (clique_min[ci] != w) {
          local_min = false;
          break;
        }
      }
      if (local_min) joined.push_back(w);
    }
    for (std::uint32_t w : joined) {
      chosen[w] = 1;
      active[w] = 0;
      --remaining;
    }
    for (std::uint32_t w : joined) {
      for (std::uint32_t ci : h.cliques_of(w)) {
        for (std::uint32_t x : h.cliques()[ci]) {
          if (active[x]) {
            active[x] = 0;
            --remaining;
          }
        }
      }
    }
  }

  for (std::uint32_t w = 0; w < n; ++w) {
    if (chosen[w]) out.independent.push_back(w);
    if (active[w]) out.undecided.push_back(w);
  }
  return out;
}

MisResult apx_mis(const ConflictGraph& h, double epsilon, std::uint64_t seed,
                  const MisOptions& options) {
  const std::uint64_t base = key_hash(seed, {Purpose::MisGeneric, 0, 0, 0});
  return apx_mis(
      h, epsilon,
      [base](std::uint32_t node, std::uint32_t round) {
        return hash_combine(hash_combine(base, node), round);
      },
      options);
}

std::vector<std::uint32_t> greedy_complete(const ConflictGraph& h, const MisResult& result) {
  std::vector<char> in(h.num_nodes(), 0);
  for (std::uint32_t w : result.independent) in[w] = 1;
  for (std::uint32_t w : result.undecided) {
    bool free = true;
    for (std::uint32_t x : h.neighbors(w)) {
      if (in[x]) {
        free = false;
        break;
      }
    }
    if (free) in[w] = 1;
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t w = 0; w < h.num_nodes(); ++w)
    if (in[w]) out.push_back(w);
  return out;
}

bool is_independent(const ConflictGraph& h, std::span<const std::uint32_t> nodes) {
  std::vector<char> marked(h.cliques().size(), 0);
  std::vector<char> seen(h.num_nodes(), 0);
  for (std::uint32_t w : nodes) {
    if (seen[w]) return false;
    seen[w] = 1;
    for (std::uint32_t ci : h.cliques_of(w)) {
      if (marked[ci]) return false;
      marked[ci] = 1;
    }
  }
  return true;
}

bool is_maximal_independent(const ConflictGraph& h, std::span<const std::uint32_t> nodes) {
  if (!is_independent(h, nodes)) return false;
  std::vector<char> in(h.num_nodes(), 0);
  for (std::uint32_t w : nodes) in[w] = 1;
  for (std::uint32_t w = 0; w < h.num_nodes(); ++w) {
    if (in[w]) continue;
    bool blocked = false;
    for (std::uint32_t x : h.neighbors(w))
      if (in[x]) blocked = true;
    if (!blocked) return false;
  }
  return true;
}

}  // namespace stochmatch
