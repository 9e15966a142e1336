#include "stochmatch/vim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stochmatch/error.hpp"
#include "stochmatch/random.hpp"
#include "stochmatch/stats.hpp"

namespace stochmatch {

void VimParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (walk_cap < 1) throw InvalidArgument("walk_cap must be at least 1");
  if (gamma_samples < 1) throw InvalidArgument("gamma_samples must be at least 1");
  if (saturation_slack && *saturation_slack < 0.0)
    throw InvalidArgument("saturation slack must be non-negative");
  if (!(gamma_z >= 0.0)) throw InvalidArgument("gamma_z must be non-negative");
  if (!(mis_round_constant > 0.0)) throw InvalidArgument("MIS round constant must be positive");
}

VimParams VimParams::desk(double epsilon) {
  VimParams p;
  p.epsilon = epsilon;
  p.validate();
  return p;
}

VimParams VimParams::paper_faithful(double epsilon, bool force) {
  VimParams p;
  p.epsilon = epsilon;
  p.validate();
  const double alpha = std::round(std::pow(epsilon, -7.0) - 1.0);
  const double depth = std::ceil(std::pow(epsilon, -9.0) * (1.0 - 1e-12));
  const double cap = std::ceil(2.0 / epsilon * (1.0 - 1e-12)) - 1.0;
  if (alpha > 1e7 || depth > 1e6)
    throw ParameterOverflow("paper-faithful VIM constants overflow (alpha=" + std::to_string(alpha) +
                            ", depth=" + std::to_string(depth) + ")");
  if (!force && (alpha > 64 || depth > 10))
    throw ParameterOverflow("paper-faithful VIM constants alpha=" + std::to_string(alpha) +
                            ", depth=" + std::to_string(depth) +
                            " exceed the run guard; pass --force-paper-constants to try anyway");
  p.alpha = static_cast<std::size_t>(alpha);
  p.depth = static_cast<std::size_t>(depth);
  p.walk_cap = static_cast<std::size_t>(std::max(1.0, cap));
  return p;
}

// ---------------------------------------------------------------------------

CrucialGraph::CrucialGraph(const StochasticGraph& g, const EdgeClassification& cls)
    : c_(cls.c) {
  if (cls.labels.size() != g.m() || cls.c.size() != g.n())
    throw InvalidArgument("classification does not match graph");
  for (EdgeId e : cls.crucial) {
    edges_.push_back(g.edge(e));
    g_ids_.push_back(e);
  }
  const std::size_t n = g.n();
  offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t v = 0; v < n; ++v) {
    delta_ = std::max(delta_, offsets_[v + 1]);
    offsets_[v + 1] += offsets_[v];
  }
  adj_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    adj_[fill[edges_[i].u]++] = i;
    adj_[fill[edges_[i].v]++] = i;
  }
  for (VertexId v = 0; v < n; ++v) {
    std::sort(adj_.begin() + offsets_[v], adj_.begin() + offsets_[v + 1],
              [&](std::uint32_t a, std::uint32_t b) {
                VertexId na = edges_[a].other(v), nb = edges_[b].other(v);
                return na != nb ? na < nb : a < b;
              });
  }
}

std::vector<char> CrucialGraph::project(const Realization& r) const {
  std::vector<char> out(edges_.size(), 0);
  for (std::size_t i = 0; i < edges_.size(); ++i) out[i] = r.present.at(g_ids_[i]);
  return out;
}

std::vector<std::uint32_t> CrucialGraph::distances_from(VertexId v) const {
  return bfs_distances(n(), edges_, v);
}

// ---------------------------------------------------------------------------

Profile::Profile(std::size_t slots, std::size_t n, std::size_t m)
    : present(slots, std::vector<char>(m, 0)),
      mate(slots, std::vector<std::uint32_t>(n, kNoSlotEdge)) {}

bool Profile::in_matching(const CrucialGraph& c, std::size_t slot, std::uint32_t e) const {
  return mate[slot][c.edge(e).u] == e;
}

std::size_t Profile::d(VertexId v) const {
  std::size_t k = 0;
  for (const auto& m : mate) k += m[v] != kNoSlotEdge;
  return k;
}

std::size_t Profile::total_d() const {
  std::size_t k = 0;
  for (const auto& m : mate)
    for (std::uint32_t e : m) k += e != kNoSlotEdge;
  return k;
}

std::size_t Profile::matching_size(std::size_t slot) const {
  std::size_t k = 0;
  for (std::uint32_t e : mate[slot]) k += e != kNoSlotEdge;
  return k / 2;
}

bool Profile::valid(const CrucialGraph& c) const {
  if (mate.size() != present.size()) return false;
  for (std::size_t s = 0; s < slots(); ++s) {
    if (present[s].size() != c.m() || mate[s].size() != c.n()) return false;
    for (VertexId v = 0; v < c.n(); ++v) {
      std::uint32_t e = mate[s][v];
      if (e == kNoSlotEdge) continue;
      if (e >= c.m() || !present[s][e]) return false;
      const Edge& ed = c.edge(e);
      if (ed.u != v && ed.v != v) return false;
      if (mate[s][ed.other(v)] != e) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

std::vector<VertexId> Hyperwalk::vertices(const CrucialGraph& c) const {
  std::vector<VertexId> out{start};
  VertexId cur = start;
  for (const HyperStep& s : steps) {
    cur = c.edge(s.edge).other(cur);
    out.push_back(cur);
  }
  return out;
}

VertexId Hyperwalk::end(const CrucialGraph& c) const {
  VertexId cur = start;
  for (const HyperStep& s : steps) cur = c.edge(s.edge).other(cur);
  return cur;
}

Hyperwalk Hyperwalk::reversed(const CrucialGraph& c) const {
  Hyperwalk w;
  w.start = end(c);
  w.steps.assign(steps.rbegin(), steps.rend());
  return w;
}

Hyperwalk Hyperwalk::canonical(const CrucialGraph& c) const {
  Hyperwalk r = reversed(c);
  return r < *this ? r : *this;
}

bool is_structurally_valid(const CrucialGraph& c, std::size_t slots, const Hyperwalk& w) {
  if (w.steps.empty() || w.start >= c.n()) return false;
  VertexId cur = w.start;
  for (const HyperStep& s : w.steps) {
    if (s.edge >= c.m() || s.slot >= slots) return false;
    const Edge& e = c.edge(s.edge);
    if (e.u != cur && e.v != cur) return false;
    cur = e.other(cur);
  }
  return true;
}

namespace {

// M'_s restricted to what the walk touches: for each affected slot, the
// added and removed edge sets.
struct WalkEffect {
  std::vector<HyperStep> added, removed;  // sorted

  explicit WalkEffect(const Hyperwalk& w) {
    for (std::size_t j = 0; j < w.steps.size(); ++j) (j % 2 == 0 ? added : removed).push_back(w.steps[j]);
    std::sort(added.begin(), added.end());
    std::sort(removed.begin(), removed.end());
  }
  bool is_removed(std::uint32_t e, std::uint32_t s) const {
    return std::binary_search(removed.begin(), removed.end(), HyperStep{e, s});
  }
  bool is_added(std::uint32_t e, std::uint32_t s) const {
    return std::binary_search(added.begin(), added.end(), HyperStep{e, s});
  }
};

}  // namespace

bool is_augmenting(const CrucialGraph& c, const Profile& p, const Hyperwalk& w) {
  if (!is_structurally_valid(c, p.slots(), w)) return false;
  const std::vector<VertexId> verts = w.vertices(c);
  const VertexId first = verts.front(), last = verts.back();
  // A closed walk would raise the total degree count by one, not two.
  if (first == last) return false;
  const WalkEffect eff(w);

  for (const HyperStep& a : eff.added)
    if (!eff.is_removed(a.edge, a.slot) && !p.present[a.slot][a.edge]) return false;

  std::vector<VertexId> uniq = verts;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

  for (VertexId v : uniq) {
    std::size_t d_new = 0;
    for (std::uint32_t s = 0; s < p.slots(); ++s) {
      // Edges of M'_s at v: surviving mate plus added edges (distinct).
      std::size_t count = 0;
      const std::uint32_t m = p.mate[s][v];
      if (m != kNoSlotEdge && !eff.is_removed(m, s)) ++count;
      for (const HyperStep& a : eff.added) {
        if (a.slot != s || a.edge == m || eff.is_removed(a.edge, s)) continue;
        const Edge& e = c.edge(a.edge);
        if (e.u == v || e.v == v) ++count;
      }
      if (count > 1) return false;
      d_new += count;
    }
    const std::size_t d_old = p.d(v);
    const bool endpoint = v == first || v == last;
    if (endpoint ? d_new != d_old + 1 : d_new != d_old) return false;
  }
  return true;
}

namespace {

class WalkEnumerator {
 public:
  WalkEnumerator(const CrucialGraph& c, const Profile& p, const std::vector<char>& saturated,
                 std::size_t cap, std::size_t max_walks)
      : c_(c), p_(p), sat_(saturated), cap_(cap), max_walks_(max_walks), slots_(p.slots()),
        in_m_(slots_, std::vector<char>(c.m(), 0)),
        cnt_(slots_, std::vector<std::uint8_t>(c.n(), 0)) {
    for (std::size_t s = 0; s < slots_; ++s) {
      for (VertexId v = 0; v < c.n(); ++v) {
        std::uint32_t e = p.mate[s][v];
        if (e != kNoSlotEdge) {
          in_m_[s][e] = 1;
          cnt_[s][v] = 1;
        }
      }
    }
  }

  std::vector<Hyperwalk> run() {
    for (VertexId v = 0; v < c_.n(); ++v) {
      if (sat_[v] || c_.incident(v).empty()) continue;
      walk_.start = v;
      walk_.steps.clear();
      dfs(v);
    }
    std::sort(out_.begin(), out_.end());
    out_.erase(std::unique(out_.begin(), out_.end()), out_.end());
    return std::move(out_);
  }

 private:
  bool used(std::uint32_t e, std::uint32_t s) const {
    for (const HyperStep& st : walk_.steps)
      if (st.edge == e && st.slot == s) return true;
    return false;
  }

  void bump(std::uint32_t s, VertexId v, int delta) {
    std::uint8_t& x = cnt_[s][v];
    if (x >= 2) --bad_;
    x = static_cast<std::uint8_t>(x + delta);
    if (x >= 2) ++bad_;
  }

  std::size_t bad_at(VertexId v) const {
    std::size_t k = 0;
    for (std::size_t s = 0; s < slots_; ++s) k += cnt_[s][v] >= 2;
    return k;
  }

  void dfs(VertexId head) {
    const std::size_t len = walk_.steps.size();
    if (len >= 1 && !sat_[head] && head != walk_.start && bad_ == 0 &&
        is_augmenting(c_, p_, walk_)) {
      out_.push_back(walk_.canonical(c_));
      if (out_.size() > 2 * max_walks_)
        throw ConflictGraphTooLarge("more than " + std::to_string(max_walks_) +
                                    " augmenting hyperwalks; reduce walk_cap");
    }
    if (len >= cap_) return;
    const bool add = len % 2 == 0;
    for (std::uint32_t e : c_.incident(head)) {
      const Edge& ed = c_.edge(e);
      const VertexId next = ed.other(head);
      for (std::uint32_t s = 0; s < slots_; ++s) {
        if (add ? (!p_.present[s][e] || in_m_[s][e]) : !in_m_[s][e]) continue;
        if (used(e, s)) continue;
        const int delta = add ? 1 : -1;
        in_m_[s][e] = add;
        bump(s, ed.u, delta);
        bump(s, ed.v, delta);
        walk_.steps.push_back({e, s});
        // Only the new head may violate a matching.
        if (bad_ == bad_at(next)) dfs(next);
        walk_.steps.pop_back();
        bump(s, ed.u, -delta);
        bump(s, ed.v, -delta);
        in_m_[s][e] = !add;
      }
    }
  }

  const CrucialGraph& c_;
  const Profile& p_;
  const std::vector<char>& sat_;
  std::size_t cap_, max_walks_, slots_;
  std::vector<std::vector<char>> in_m_;
  std::vector<std::vector<std::uint8_t>> cnt_;
  std::size_t bad_ = 0;
  Hyperwalk walk_;
  std::vector<Hyperwalk> out_;
};

}  // namespace

std::vector<Hyperwalk> enumerate_augmenting_hyperwalks(const CrucialGraph& c, const Profile& p,
                                                       const std::vector<char>& saturated,
                                                       std::size_t walk_cap,
                                                       std::size_t max_walks) {
  if (saturated.size() != c.n()) throw InvalidArgument("saturation mask has wrong size");
  auto walks = WalkEnumerator(c, p, saturated, walk_cap, max_walks).run();
  if (walks.size() > max_walks)
    throw ConflictGraphTooLarge("more than " + std::to_string(max_walks) +
                                " augmenting hyperwalks; reduce walk_cap");
  return walks;
}

ConflictGraph build_conflict_graph(const CrucialGraph& c, std::span<const Hyperwalk> walks) {
  std::vector<std::vector<std::uint32_t>> by_vertex(c.n());
  for (std::uint32_t i = 0; i < walks.size(); ++i) {
    std::vector<VertexId> vs = walks[i].vertices(c);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    for (VertexId v : vs) by_vertex[v].push_back(i);
  }
  std::vector<std::vector<std::uint32_t>> cliques;
  for (auto& cl : by_vertex)
    if (!cl.empty()) cliques.push_back(std::move(cl));
  return ConflictGraph(walks.size(), std::move(cliques));
}

void apply_hyperwalks(const CrucialGraph& c, Profile& p, std::span<const Hyperwalk> walks) {
  for (const Hyperwalk& w : walks) {
    if (!is_structurally_valid(c, p.slots(), w))
      throw Error("malformed hyperwalk passed to apply_hyperwalks");
    const WalkEffect eff(w);
    for (const HyperStep& r : eff.removed) {
      const Edge& e = c.edge(r.edge);
      if (p.mate[r.slot][e.u] == r.edge) {
        p.mate[r.slot][e.u] = kNoSlotEdge;
        p.mate[r.slot][e.v] = kNoSlotEdge;
      }
    }
    for (const HyperStep& a : eff.added) {
      if (eff.is_removed(a.edge, a.slot)) continue;
      const Edge& e = c.edge(a.edge);
      auto& m = p.mate[a.slot];
      if (m[e.u] == a.edge) continue;
      if (!p.present[a.slot][a.edge] || m[e.u] != kNoSlotEdge || m[e.v] != kNoSlotEdge)
        throw Error("hyperwalk application broke a matching");
      m[e.u] = a.edge;
      m[e.v] = a.edge;
    }
  }
}

// ---------------------------------------------------------------------------

VimContext::VimContext(const StochasticGraph& g, const EdgeClassification& cls, VimParams params,
                       std::uint64_t gamma_seed)
    : g_(g), c_(g, cls), params_(params), gamma_seed_(gamma_seed) {
  params_.validate();
}

std::uint64_t VimContext::edge_seed(std::uint32_t local_edge, const VimRun& run) const {
  if (!run.inside) return run.seed;
  const Edge& e = c_.edge(local_edge);
  return (*run.inside)[e.u] && (*run.inside)[e.v] ? run.seed : run.alt_seed;
}

std::uint64_t VimContext::vertex_seed(VertexId v, const VimRun& run) const {
  if (!run.inside) return run.seed;
  return (*run.inside)[v] ? run.seed : run.alt_seed;
}

std::vector<char> VimContext::draw_input(const VimRun& run) const {
  std::vector<char> out(c_.m(), 0);
  for (std::uint32_t e = 0; e < c_.m(); ++e) {
    RandomStream rs(edge_seed(e, run), {Purpose::VimInput, c_.g_edge(e), 0, run.run_index});
    out[e] = rs.uniform_at(0) < c_.edge(e).p;
  }
  return out;
}

std::size_t VimContext::mis_degree_bound() const {
  const double base = static_cast<double>(c_.max_degree()) * static_cast<double>(params_.alpha + 1);
  double total = 0.0, pw = 1.0;
  for (std::size_t k = 1; k <= params_.walk_cap; ++k) {
    pw *= base;
    total += static_cast<double>(k + 1) * pw;
  }
  total *= static_cast<double>(params_.walk_cap + 1);
  if (!(total < 1e18)) return static_cast<std::size_t>(1e18);
  return static_cast<std::size_t>(total);
}

std::size_t VimContext::mis_rounds() const {
  return mis_round_budget(mis_degree_bound(), params_.epsilon, params_.mis_round_constant);
}

std::size_t VimContext::locality_bound(std::size_t r) const {
  return r * ((2 * mis_rounds() + 1) * params_.walk_cap + 1);
}

const GammaEstimate& VimContext::gamma(std::size_t level) {
  if (auto it = gamma_.find(level); it != gamma_.end()) return it->second;
  GammaEstimate est;
  est.level = level;
  est.mean.assign(c_.n(), 0.0);
  est.se.assign(c_.n(), 0.0);
  if (level > 0 && c_.m() > 0) {
    const std::size_t samples = params_.gamma_samples;
    est.samples = samples;
    std::vector<std::size_t> hits(c_.n(), 0);
    VimRun run;
    run.seed = key_hash(gamma_seed_, {Purpose::GammaEstimate, 0, static_cast<std::uint32_t>(level), 0});
    for (std::size_t s = 0; s < samples; ++s) {
      run.run_index = s;
      std::vector<std::uint32_t> mate = recurse(level, draw_input(run), mix64(s), run, nullptr);
      for (VertexId v = 0; v < c_.n(); ++v) hits[v] += mate[v] != kNoSlotEdge;
    }
    for (VertexId v = 0; v < c_.n(); ++v) {
      est.mean[v] = static_cast<double>(hits[v]) / static_cast<double>(samples);
      est.se[v] = binomial_se(est.mean[v], samples);
    }
  }
  return gamma_.emplace(level, std::move(est)).first->second;
}

std::vector<char> VimContext::saturated_at(std::size_t level) {
  const GammaEstimate& gm = gamma(level);
  std::vector<char> sat(c_.n(), 0);
  for (VertexId v = 0; v < c_.n(); ++v)
    sat[v] = gm.mean[v] >= c_.c(v) - params_.slack() - params_.gamma_z * gm.se[v];
  return sat;
}

std::vector<std::uint32_t> VimContext::recurse(std::size_t r, const std::vector<char>& realized,
                                               std::uint64_t path, const VimRun& run,
                                               std::vector<LevelTrace>* trace) {
  if (r == 0) return std::vector<std::uint32_t>(c_.n(), kNoSlotEdge);
  const std::size_t slots = params_.alpha + 1;
  const auto level = static_cast<std::uint32_t>(r);
  Profile prof(slots, c_.n(), c_.m());
  prof.present[0] = realized;
  for (std::size_t i = 1; i < slots; ++i) {
    const std::uint64_t index = hash_combine(path, i);
    for (std::uint32_t e = 0; e < c_.m(); ++e) {
      RandomStream rs(edge_seed(e, run), {Purpose::VimRealize, c_.g_edge(e), level, index});
      prof.present[i][e] = rs.uniform_at(0) < c_.edge(e).p;
    }
  }
  for (std::size_t i = 0; i < slots; ++i)
    prof.mate[i] = recurse(r - 1, prof.present[i], hash_combine(hash_combine(path, r), i), run, trace);

  const std::vector<char> sat = saturated_at(r - 1);
  const std::vector<Hyperwalk> walks =
      enumerate_augmenting_hyperwalks(c_, prof, sat, params_.walk_cap, params_.max_conflict_nodes);
  const ConflictGraph h = build_conflict_graph(c_, walks);

  std::vector<std::uint64_t> base(walks.size());
  for (std::size_t k = 0; k < walks.size(); ++k) {
    const Hyperwalk& w = walks[k];
    std::uint64_t wh = mix64(w.start);
    VertexId anchor = w.start, cur = w.start;
    for (const HyperStep& s : w.steps) {
      wh = hash_combine(hash_combine(wh, s.edge), s.slot);
      cur = c_.edge(s.edge).other(cur);
      anchor = std::min(anchor, cur);
    }
    base[k] = key_hash(vertex_seed(anchor, run), {Purpose::VimMis, wh, level, path});
  }
  MisOptions opts;
  opts.round_constant = params_.mis_round_constant;
  opts.degree_bound = mis_degree_bound();
  const MisResult mis = apx_mis(
      h, params_.epsilon,
      [&base](std::uint32_t node, std::uint32_t round) { return hash_combine(base[node], round); },
      opts);

  std::vector<Hyperwalk> chosen;
  chosen.reserve(mis.independent.size());
  for (std::uint32_t k : mis.independent) chosen.push_back(walks[k]);
  LevelTrace tr;
  if (trace) {
    tr.level = r;
    tr.walks = walks.size();
    tr.independent = chosen.size();
    tr.d_before = prof.total_d();
    tr.mis_rounds = mis.rounds_used;
  }
  apply_hyperwalks(c_, prof, chosen);
  if (trace) {
    tr.d_after = prof.total_d();
    for (std::size_t i = 0; i < slots; ++i) tr.slot_sizes.push_back(prof.matching_size(i));
    trace->push_back(std::move(tr));
  }
  return std::move(prof.mate[0]);
}

Matching VimContext::to_matching(const std::vector<std::uint32_t>& mate) const {
  Matching m;
  m.mate.assign(g_.n(), kNoVertex);
  for (VertexId v = 0; v < c_.n(); ++v) {
    if (mate[v] == kNoSlotEdge) continue;
    const Edge& e = c_.edge(mate[v]);
    m.mate[v] = e.other(v);
    if (v == e.u) m.edges.push_back(c_.g_edge(mate[v]));
  }
  std::sort(m.edges.begin(), m.edges.end());
  return m;
}

Matching VimContext::find_matching(std::size_t r, const std::vector<char>& realized,
                                   const VimRun& run, std::vector<LevelTrace>* trace) {
  if (realized.size() != c_.m()) throw InvalidArgument("realization of C has wrong size");
  return to_matching(recurse(r, realized, mix64(run.run_index), run, trace));
}

RadiusReport VimContext::dependency_radius(VertexId v, std::size_t r, std::uint64_t seed,
                                           std::size_t trials) {
  if (v >= c_.n()) throw InvalidArgument("vertex out of range");
  RadiusReport rep;
  rep.vertex = v;
  rep.trials = trials;
  rep.bound = locality_bound(r);
  const std::vector<std::uint32_t> dist = c_.distances_from(v);
  for (std::uint32_t d : dist)
    if (d != kUnreachable) rep.eccentricity = std::max<std::size_t>(rep.eccentricity, d);

  VimRun base{seed, 0, nullptr, 0};
  const bool x0 = find_matching(r, draw_input(base), base).covers(v);
  std::vector<char> inside(c_.n(), 0);
  for (std::size_t t = 0; t < trials; ++t) {
    VimRun pert{seed, 0, &inside, hash_combine(mix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL), t + 1)};
    for (std::size_t rho = rep.eccentricity + 1; rho-- > 0;) {
      for (VertexId u = 0; u < c_.n(); ++u) inside[u] = dist[u] <= rho;
      const bool x = find_matching(r, draw_input(pert), pert).covers(v);
      if (x != x0) {
        rep.radius = std::max(rep.radius, rho + 1);
        break;
      }
    }
  }
  return rep;
}

GammaEstimate estimate_gamma(const StochasticGraph& g, const EdgeClassification& cls,
                             const VimParams& params, std::size_t r, std::uint64_t seed) {
  VimContext ctx(g, cls, params, seed);
  return ctx.gamma(r);
}

}  // namespace stochmatch
