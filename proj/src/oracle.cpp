#include "stochmatch/oracle.hpp"

#include "stochmatch/error.hpp"
#include "stochmatch/matching.hpp"
#include "stochmatch/stats.hpp"

namespace stochmatch {

std::string_view to_string(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::Crucial:
      return "crucial";
    case EdgeLabel::NonCrucial:
      return "noncrucial";
    case EdgeLabel::Ignored:
      return "ignored";
  }
  return "?";
}

void validate_thresholds(double tau_minus, double tau_plus) {
  if (!(0.0 < tau_minus && tau_minus < tau_plus && tau_plus < 1.0))
    throw InvalidArgument("thresholds must satisfy 0 < tau_minus < tau_plus < 1");
}

ExactStats exact_stats(const StochasticGraph& g, std::size_t max_edges) {
  const std::size_t m = g.m();
  if (m > max_edges || m >= 63)
    throw InstanceTooLarge("exact enumeration needs m <= " + std::to_string(max_edges) +
                           " edges, got " + std::to_string(m));

  std::vector<CompensatedSum> q_sum(m);
  CompensatedSum opt_sum;
  std::vector<EdgeId> ids;
  ids.reserve(m);
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double weight = 1.0;
    ids.clear();
    for (EdgeId e = 0; e < m; ++e) {
      if (mask >> e & 1U) {
        weight *= g.edge(e).p;
        ids.push_back(e);
      } else {
        weight *= 1.0 - g.edge(e).p;
      }
    }
    if (weight == 0.0) continue;
    Matching mm = max_matching(g, ids);
    opt_sum.add(weight * static_cast<double>(mm.size()));
    for (EdgeId e : mm.edges) q_sum[e].add(weight);
  }

  ExactStats s;
  s.opt = opt_sum.value();
  s.q.resize(m);
  for (EdgeId e = 0; e < m; ++e) s.q[e] = q_sum[e].value();
  std::vector<CompensatedSum> vsum(g.n());
  for (EdgeId e = 0; e < m; ++e) {
    vsum[g.edge(e).u].add(s.q[e]);
    vsum[g.edge(e).v].add(s.q[e]);
  }
  s.matched_prob.resize(g.n());
  for (VertexId v = 0; v < g.n(); ++v) s.matched_prob[v] = vsum[v].value();
  return s;
}

CrucialSplit exact_crucial_split(const StochasticGraph& g, const ExactStats& stats,
                                 double tau_minus, double tau_plus) {
  validate_thresholds(tau_minus, tau_plus);
  CrucialSplit split;
  split.labels.resize(g.m());
  split.c.assign(g.n(), 0.0);
  split.n.assign(g.n(), 0.0);
  for (EdgeId e = 0; e < g.m(); ++e) {
    const double q = stats.q[e];
    const EdgeLabel label = label_for(q, tau_minus, tau_plus);
    split.labels[e] = label;
    const Edge& ed = g.edge(e);
    switch (label) {
      case EdgeLabel::Crucial:
        split.crucial.push_back(e);
        split.c[ed.u] += q;
        split.c[ed.v] += q;
        break;
      case EdgeLabel::NonCrucial:
        split.noncrucial.push_back(e);
        split.n[ed.u] += q;
        split.n[ed.v] += q;
        break;
      case EdgeLabel::Ignored:
        split.ignored.push_back(e);
        break;
    }
  }
  return split;
}

}  // namespace stochmatch
