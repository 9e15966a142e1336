#include "stochmatch/graph.hpp"

#include <algorithm>
#include <charconv>
#include <string_view>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

#include "stochmatch/error.hpp"

namespace stochmatch {

StochasticGraph::StochasticGraph(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  std::set<std::pair<VertexId, VertexId>> seen;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.u >= n_ || e.v >= n_)
      throw InvalidArgument("edge " + std::to_string(i) + " has an endpoint outside 0..n-1");
    if (e.u == e.v) throw InvalidArgument("edge " + std::to_string(i) + " is a self-loop");
    if (!(e.p > 0.0 && e.p <= 1.0))
      throw InvalidArgument("edge " + std::to_string(i) + " has probability outside (0,1]");
    const std::pair<VertexId, VertexId> key{std::min(e.u, e.v), std::max(e.u, e.v)};
    if (!seen.insert(key).second)
      throw InvalidArgument("edge " + std::to_string(i) + " duplicates an earlier pair");
    p_min_ = std::min(p_min_, e.p);
  }

  offsets_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
  incidence_.resize(offsets_[n_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId i = 0; i < edges_.size(); ++i) {
    incidence_[fill[edges_[i].u]++] = i;
    incidence_[fill[edges_[i].v]++] = i;
  }
  for (VertexId v = 0; v < n_; ++v) {
    std::sort(incidence_.begin() + offsets_[v], incidence_.begin() + offsets_[v + 1],
              [&](EdgeId a, EdgeId b) { return edges_[a].other(v) < edges_[b].other(v); });
  }
}

std::size_t StochasticGraph::max_degree() const {
  std::size_t d = 0;
  for (VertexId v = 0; v < n_; ++v) d = std::max(d, degree(v));
  return d;
}

std::optional<EdgeId> StochasticGraph::find_edge(VertexId a, VertexId b) const {
  if (a >= n_ || b >= n_) return std::nullopt;
  auto inc = incident(a);
  auto it = std::lower_bound(inc.begin(), inc.end(), b,
                             [&](EdgeId e, VertexId x) { return edges_[e].other(a) < x; });
  if (it != inc.end() && edges_[*it].other(a) == b) return *it;
  return std::nullopt;
}

std::size_t Realization::count() const {
  return static_cast<std::size_t>(std::count(present.begin(), present.end(), char{1}));
}

std::vector<EdgeId> Realization::edge_ids() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < present.size(); ++e)
    if (present[e]) out.push_back(e);
  return out;
}

Realization sample_realization(const StochasticGraph& g, std::uint64_t seed, const StreamKey& key) {
  RandomStream stream(seed, key);
  Realization r;
  r.present.resize(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) r.present[e] = stream.uniform_at(e) < g.edge(e).p ? 1 : 0;
  return r;
}

namespace {

bool parse_uint(const std::string& tok, unsigned long long& out) {
  if (tok.empty() || tok[0] == '-' || tok[0] == '+') return false;
  std::size_t pos = 0;
  try {
    out = std::stoull(tok, &pos);
  } catch (...) {
    return false;
  }
  return pos == tok.size();
}

bool parse_prob(const std::string& tok, double& out) {
  std::size_t pos = 0;
  try {
    out = std::stod(tok, &pos);
  } catch (...) {
    return false;
  }
  return pos == tok.size();
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

}  // namespace

StochasticGraph parse_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header \"n m\"");
  ++lineno;
  auto head = tokens(line);
  unsigned long long n = 0, m = 0;
  if (head.size() != 2 || !parse_uint(head[0], n) || !parse_uint(head[1], m))
    throw ParseError(lineno, "header must be two non-negative integers \"n m\"");

  std::vector<Edge> edges;
  edges.reserve(m);
  std::set<std::pair<VertexId, VertexId>> seen;
  for (unsigned long long i = 0; i < m; ++i) {
    if (!std::getline(in, line))
      throw ParseError(lineno + 1, "expected " + std::to_string(m) + " edge lines, found " +
                                       std::to_string(i));
    ++lineno;
    auto t = tokens(line);
    unsigned long long u = 0, v = 0;
    double p = 0;
    if (t.size() != 3 || !parse_uint(t[0], u) || !parse_uint(t[1], v) || !parse_prob(t[2], p))
      throw ParseError(lineno, "edge line must be \"u v p\"");
    if (u >= n || v >= n) throw ParseError(lineno, "vertex id out of range");
    if (u == v) throw ParseError(lineno, "self-loop");
    if (!(p > 0.0 && p <= 1.0)) throw ParseError(lineno, "probability must lie in (0,1]");
    const std::pair<VertexId, VertexId> key{static_cast<VertexId>(std::min(u, v)),
                                            static_cast<VertexId>(std::max(u, v))};
    if (!seen.insert(key).second) throw ParseError(lineno, "parallel edge");
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), p});
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!tokens(line).empty()) throw ParseError(lineno, "trailing content after edge list");
  }
  return StochasticGraph(static_cast<std::size_t>(n), std::move(edges));
}

StochasticGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open graph file " + path);
  return parse_graph(in);
}

void write_graph(std::ostream& out, const StochasticGraph& g) {
  out << g.n() << ' ' << g.m() << '\n';
  char buf[64];
  for (const Edge& e : g.edges()) {
    auto res = std::to_chars(buf, buf + sizeof(buf), e.p);
    out << e.u << ' ' << e.v << ' ' << std::string_view(buf, res.ptr - buf) << '\n';
  }
}

std::vector<std::uint32_t> bfs_distances(std::size_t n, std::span<const Edge> edges,
                                         VertexId source) {
  std::vector<std::vector<VertexId>> adj(n);
  for (const Edge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<std::uint32_t> dist(n, kUnreachable);
  std::queue<VertexId> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (VertexId w : adj[v]) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

}  // namespace stochmatch
