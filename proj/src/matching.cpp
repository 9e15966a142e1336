#include "stochmatch/matching.hpp"

#include <algorithm>

namespace stochmatch {

namespace {

// Edmonds' blossom algorithm, O(n^3). Buffers are reused across calls.
class Blossom {
 public:
  std::vector<VertexId> run(std::size_t n, std::span<const VertexPair> pairs) {
    n_ = static_cast<int>(n);
    build_adjacency(pairs);
    match_.assign(n, -1);

    // Greedy warm start in ascending order.
    for (int v = 0; v < n_; ++v) {
      if (match_[v] != -1) continue;
      for (int k = off_[v]; k < off_[v + 1]; ++k) {
        int w = nbr_[k];
        if (match_[w] == -1) {
          match_[v] = w;
          match_[w] = v;
          break;
        }
      }
    }

    p_.resize(n);
    base_.resize(n);
    used_.resize(n);
    blossom_.resize(n);
    lca_mark_.resize(n);
    queue_.resize(n);
    for (int root = 0; root < n_; ++root) {
      if (match_[root] != -1) continue;
      int v = find_path(root);
      while (v != -1) {
        int pv = p_[v];
        int ppv = match_[pv];
        match_[v] = pv;
        match_[pv] = v;
        v = ppv;
      }
    }

    std::vector<VertexId> mates(n, kNoVertex);
    for (int v = 0; v < n_; ++v)
      if (match_[v] != -1) mates[v] = static_cast<VertexId>(match_[v]);
    return mates;
  }

 private:
  void build_adjacency(std::span<const VertexPair> pairs) {
    arcs_.clear();
    for (auto [a, b] : pairs) {
      arcs_.emplace_back(static_cast<int>(a), static_cast<int>(b));
      arcs_.emplace_back(static_cast<int>(b), static_cast<int>(a));
    }
    std::sort(arcs_.begin(), arcs_.end());
    arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());
    off_.assign(n_ + 1, 0);
    nbr_.resize(arcs_.size());
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      ++off_[arcs_[i].first + 1];
      nbr_[i] = arcs_[i].second;
    }
    for (int v = 0; v < n_; ++v) off_[v + 1] += off_[v];
  }

  int lca(int a, int b) {
    std::fill(lca_mark_.begin(), lca_mark_.end(), 0);
    for (;;) {
      a = base_[a];
      lca_mark_[a] = 1;
      if (match_[a] == -1) break;
      a = p_[match_[a]];
    }
    for (;;) {
      b = base_[b];
      if (lca_mark_[b]) return b;
      b = p_[match_[b]];
    }
  }

  void mark_path(int v, int b, int child) {
    while (base_[v] != b) {
      blossom_[base_[v]] = 1;
      blossom_[base_[match_[v]]] = 1;
      p_[v] = child;
      child = match_[v];
      v = p_[match_[v]];
    }
  }

  int find_path(int root) {
    std::fill(used_.begin(), used_.end(), 0);
    std::fill(p_.begin(), p_.end(), -1);
    for (int i = 0; i < n_; ++i) base_[i] = i;
    used_[root] = 1;
    int head = 0, tail = 0;
    queue_[tail++] = root;
    while (head < tail) {
      int v = queue_[head++];
      for (int k = off_[v]; k < off_[v + 1]; ++k) {
        int to = nbr_[k];
        if (base_[v] == base_[to] || match_[v] == to) continue;
        if (to == root || (match_[to] != -1 && p_[match_[to]] != -1)) {
          int cur = lca(v, to);
          std::fill(blossom_.begin(), blossom_.end(), 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n_; ++i) {
            if (blossom_[base_[i]]) {
              base_[i] = cur;
              if (!used_[i]) {
                used_[i] = 1;
                queue_[tail++] = i;
              }
            }
          }
        } else if (p_[to] == -1) {
          p_[to] = v;
          if (match_[to] == -1) return to;
          int next = match_[to];
          used_[next] = 1;
          queue_[tail++] = next;
        }
      }
    }
    return -1;
  }

  int n_ = 0;
  std::vector<std::pair<int, int>> arcs_;
  std::vector<int> off_, nbr_, match_, p_, base_, queue_;
  std::vector<char> used_, blossom_, lca_mark_;
};

Matching to_matching(const StochasticGraph& g, std::span<const EdgeId> edge_ids,
                     std::vector<VertexId> mates) {
  Matching m;
  for (EdgeId e : edge_ids) {
    const Edge& ed = g.edge(e);
    if (mates[ed.u] == ed.v) m.edges.push_back(e);
  }
  std::sort(m.edges.begin(), m.edges.end());
  m.mate = std::move(mates);
  return m;
}

}  // namespace

std::vector<VertexId> max_matching_mates(std::size_t n, std::span<const VertexPair> pairs) {
  thread_local Blossom blossom;
  return blossom.run(n, pairs);
}

Matching max_matching(const StochasticGraph& g, std::span<const EdgeId> edge_ids) {
  thread_local std::vector<VertexPair> pairs;
  pairs.clear();
  for (EdgeId e : edge_ids) pairs.emplace_back(g.edge(e).u, g.edge(e).v);
  return to_matching(g, edge_ids, max_matching_mates(g.n(), pairs));
}

Matching max_matching(const StochasticGraph& g, const Realization& r) {
  auto ids = r.edge_ids();
  return max_matching(g, ids);
}

std::size_t mu(const StochasticGraph& g, std::span<const EdgeId> edge_ids) {
  return max_matching(g, edge_ids).size();
}

std::size_t mu(const StochasticGraph& g, const Realization& r) {
  return max_matching(g, r).size();
}

bool is_matching(const StochasticGraph& g, std::span<const EdgeId> edge_ids) {
  std::vector<char> used(g.n(), 0);
  for (EdgeId e : edge_ids) {
    const Edge& ed = g.edge(e);
    if (used[ed.u] || used[ed.v]) return false;
    used[ed.u] = used[ed.v] = 1;
  }
  return true;
}

}  // namespace stochmatch
