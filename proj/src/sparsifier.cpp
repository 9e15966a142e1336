#include "stochmatch/sparsifier.hpp"

#include <algorithm>
#include <cmath>

#include "stochmatch/error.hpp"
#include "stochmatch/matching.hpp"

namespace stochmatch {

std::vector<EdgeId> SubgraphQ::member_edges() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < member.size(); ++e)
    if (member[e]) out.push_back(e);
  return out;
}

std::size_t SubgraphQ::size() const {
  std::size_t k = 0;
  for (char c : member) k += c ? 1 : 0;
  return k;
}

std::size_t SubgraphQ::max_degree(const StochasticGraph& g) const {
  std::vector<std::size_t> deg(g.n(), 0);
  std::size_t best = 0;
  for (EdgeId e = 0; e < member.size(); ++e) {
    if (!member[e]) continue;
    best = std::max(best, ++deg[g.edge(e).u]);
    best = std::max(best, ++deg[g.edge(e).v]);
  }
  return best;
}

SubgraphQ build_q(const StochasticGraph& g, std::size_t R, std::uint64_t seed) {
  if (R == 0) throw InvalidArgument("R must be positive");
  SubgraphQ q;
  q.R = R;
  q.t.assign(g.m(), 0);
  for (std::size_t i = 0; i < R; ++i) {
    Realization r = sample_realization(g, seed, {Purpose::SparsifierSample, 0, 0, i});
    for (EdgeId e : max_matching(g, r).edges) ++q.t[e];
  }
  q.member.resize(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) q.member[e] = q.t[e] > 0 ? 1 : 0;
  return q;
}

std::size_t default_R(double tau_minus, std::size_t cap) {
  if (!(tau_minus > 0.0 && tau_minus < 1.0))
    throw InvalidArgument("tau_minus must lie in (0,1)");
  const double raw = 1.0 / (2.0 * tau_minus);
  const double r = std::ceil(raw - 1e-9 * raw);
  if (!(r <= static_cast<double>(cap)))
    throw ParameterOverflow("R = 1/(2 tau_minus) = " + std::to_string(raw) + " exceeds the cap " +
                            std::to_string(cap) + "; pass an explicit R (--R-override)");
  return std::max<std::size_t>(1, static_cast<std::size_t>(r));
}

SubgraphQ build_baseline_iterative(const StochasticGraph& g, std::size_t R) {
  if (R == 0) throw InvalidArgument("R must be positive");
  SubgraphQ q;
  q.R = R;
  q.t.assign(g.m(), 0);
  q.member.assign(g.m(), 0);
  std::vector<EdgeId> remaining(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) remaining[e] = e;
  for (std::size_t i = 0; i < R && !remaining.empty(); ++i) {
    Matching mm = max_matching(g, remaining);
    for (EdgeId e : mm.edges) {
      q.member[e] = 1;
      q.t[e] = 1;
    }
    std::erase_if(remaining, [&](EdgeId e) { return q.member[e] != 0; });
  }
  return q;
}

QEvaluation realize_and_match_q(const StochasticGraph& g, const SubgraphQ& q,
                                std::uint64_t seed, std::uint64_t eval_index) {
  return realize_and_match_q(g, q, sample_realization(g, seed, {Purpose::Evaluation, 0, 0, eval_index}));
}

QEvaluation realize_and_match_q(const StochasticGraph& g, const SubgraphQ& q,
                                const Realization& realization_of_g) {
  QEvaluation out;
  out.realized.present.resize(g.m());
  for (EdgeId e = 0; e < g.m(); ++e)
    out.realized.present[e] = (q.member[e] && realization_of_g.present[e]) ? 1 : 0;
  out.mu = mu(g, out.realized);
  return out;
}

}  // namespace stochmatch
