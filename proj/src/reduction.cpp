#include "stochmatch/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stochmatch/error.hpp"
#include "stochmatch/random.hpp"

namespace stochmatch {

std::size_t bucket_count(double epsilon, double opt_estimate) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (!(opt_estimate > 0.0)) throw InvalidArgument("opt estimate must be positive");
  const double raw = 8.0 * opt_estimate / epsilon;
  if (raw > 1e9) throw ParameterOverflow("bucket count overflows");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw)));
}

Contraction contract(const StochasticGraph& g, double epsilon, double opt_estimate,
                     std::uint64_t seed) {
  const std::size_t k = bucket_count(epsilon, opt_estimate);
  std::vector<std::uint32_t> bucket(g.n());
  for (VertexId v = 0; v < g.n(); ++v) {
    RandomStream rs(seed, {Purpose::Bucket, v, 0, 0});
    bucket[v] = static_cast<std::uint32_t>(rs.below(k));
  }
  return contract_with_buckets(g, k, std::move(bucket));
}

Contraction contract_with_buckets(const StochasticGraph& g, std::size_t k,
                                  std::vector<std::uint32_t> bucket) {
  if (bucket.size() != g.n()) throw InvalidArgument("bucket map does not match graph");
  for (std::uint32_t b : bucket)
    if (b >= k) throw InvalidArgument("bucket id out of range");
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<EdgeId>> groups;
  for (EdgeId e = 0; e < g.m(); ++e) {
    std::uint32_t a = bucket[g.edge(e).u], b = bucket[g.edge(e).v];
    if (a == b) continue;
    groups[{std::min(a, b), std::max(a, b)}].push_back(e);
  }
  Contraction c;
  c.k = k;
  c.bucket = std::move(bucket);
  std::vector<Edge> edges;
  for (auto& [key, ids] : groups) {
    double p = g.edge(ids[0]).p;  // a lone origin edge keeps its exact value
    if (ids.size() > 1) {
      double miss = 1.0;
      for (EdgeId e : ids) miss *= 1.0 - g.edge(e).p;
      p = 1.0 - miss;
    }
    edges.push_back({key.first, key.second, p});
    c.origin.push_back(std::move(ids));
  }
  c.merged = StochasticGraph(k, std::move(edges));
  return c;
}

std::size_t lift_cap(double epsilon, double p_min) {
  const double raw = std::log(1.0 / epsilon) / p_min;
  if (raw > 1e9) throw ParameterOverflow("lift cap overflows");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw)));
}

std::vector<EdgeId> LiftedQ::member_edges() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < member.size(); ++e)
    if (member[e]) out.push_back(e);
  return out;
}

std::size_t LiftedQ::max_degree(const StochasticGraph& g) const {
  std::vector<std::size_t> deg(g.n(), 0);
  std::size_t best = 0;
  for (EdgeId e : member_edges()) {
    best = std::max(best, ++deg[g.edge(e).u]);
    best = std::max(best, ++deg[g.edge(e).v]);
  }
  return best;
}

LiftedQ lift(const SubgraphQ& qH, const Contraction& c, std::size_t original_edges, double epsilon,
             double p_min) {
  if (qH.member.size() != c.merged.m()) throw InvalidArgument("sparsifier is not on the merged graph");
  LiftedQ out;
  out.cap = lift_cap(epsilon, p_min);
  out.member.assign(original_edges, 0);
  for (EdgeId e = 0; e < c.merged.m(); ++e) {
    if (!qH.member[e]) continue;
    const auto& ids = c.origin[e];
    const std::size_t take = std::min(out.cap, ids.size());
    for (std::size_t i = 0; i < take; ++i) out.member.at(ids[i]) = 1;
  }
  return out;
}

bool reduction_precondition(double opt, double epsilon) {
  return opt > 3.0 / (epsilon * epsilon * epsilon);
}

}  // namespace stochmatch
