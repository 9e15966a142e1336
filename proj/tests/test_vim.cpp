#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "stochmatch/decomposition.hpp"
#include "stochmatch/error.hpp"
#include "stochmatch/matching.hpp"
#include "stochmatch/vim.hpp"
#include "support.hpp"

using namespace stochmatch;

namespace {

// Every edge crucial with per-edge q value qv.
EdgeClassification all_crucial(const StochasticGraph& g, double qv, double eps = 0.3) {
  std::vector<double> q(g.m(), qv);
  return classify(g, q, qv / 4, qv / 2, eps);
}

VimParams params(std::size_t alpha, std::size_t depth, std::size_t cap = 3) {
  VimParams p;
  p.alpha = alpha;
  p.depth = depth;
  p.walk_cap = cap;
  p.gamma_samples = 200;
  return p;
}

void match(Profile& p, const CrucialGraph& c, std::size_t s, std::uint32_t e) {
  p.mate[s][c.edge(e).u] = e;
  p.mate[s][c.edge(e).v] = e;
}

// Reference check: M'_s = (M_s + odd steps) - even steps must be a matching
// inside the slot subgraph, d unchanged off the endpoints, +1 at both ends.
bool reference_augmenting(const CrucialGraph& c, const Profile& p, const Hyperwalk& w) {
  std::vector<VertexId> verts{w.start};
  for (const auto& s : w.steps) {
    const Edge& e = c.edge(s.edge);
    if (e.u == verts.back()) verts.push_back(e.v);
    else if (e.v == verts.back()) verts.push_back(e.u);
    else return false;
  }
  if (verts.front() == verts.back()) return false;
  std::vector<std::vector<std::uint32_t>> deg(p.slots(), std::vector<std::uint32_t>(c.n(), 0));
  for (std::size_t s = 0; s < p.slots(); ++s) {
    std::set<std::uint32_t> m;
    for (VertexId v = 0; v < c.n(); ++v)
      if (p.mate[s][v] != kNoSlotEdge) m.insert(p.mate[s][v]);
    for (std::size_t j = 0; j < w.size(); ++j)
      if (j % 2 == 0 && w.steps[j].slot == s) m.insert(w.steps[j].edge);
    for (std::size_t j = 0; j < w.size(); ++j)
      if (j % 2 == 1 && w.steps[j].slot == s) m.erase(w.steps[j].edge);
    for (auto e : m) {
      if (!p.present[s][e]) return false;
      if (++deg[s][c.edge(e).u] > 1 || ++deg[s][c.edge(e).v] > 1) return false;
    }
  }
  for (VertexId v = 0; v < c.n(); ++v) {
    std::size_t d = 0;
    for (std::size_t s = 0; s < p.slots(); ++s) d += deg[s][v];
    const bool end = v == verts.front() || v == verts.back();
    if (d != p.d(v) + (end ? 1 : 0)) return false;
  }
  return true;
}

// All simple walks (no repeated vertex) of size 1..cap with any slots.
void simple_walks(const CrucialGraph& c, std::size_t slots, std::size_t cap, Hyperwalk& w,
                  std::vector<char>& used, VertexId head, std::vector<Hyperwalk>& out) {
  if (w.size() >= 1) out.push_back(w);
  if (w.size() == cap) return;
  for (auto e : c.incident(head)) {
    const Edge& ed = c.edge(e);
    const VertexId next = ed.u == head ? ed.v : ed.u;
    if (used[next]) continue;
    used[next] = 1;
    for (std::uint32_t s = 0; s < slots; ++s) {
      w.steps.push_back({e, s});
      simple_walks(c, slots, cap, w, used, next, out);
      w.steps.pop_back();
    }
    used[next] = 0;
  }
}

struct RandomProfile {
  StochasticGraph g;
  EdgeClassification cls;
  CrucialGraph c;
  Profile p;
  std::vector<char> saturated;
};

RandomProfile random_profile(std::uint64_t seed, std::size_t slots) {
  auto g = testsupport::random_small_graph(seed, 7, 10);
  auto cls = all_crucial(g, 0.5);
  CrucialGraph c(g, cls);
  Profile p(slots, c.n(), c.m());
  std::mt19937_64 rng(seed * 31 + 7);
  for (std::size_t s = 0; s < slots; ++s) {
    for (std::uint32_t e = 0; e < c.m(); ++e) p.present[s][e] = rng() % 3 != 0;
    for (std::uint32_t e = 0; e < c.m(); ++e) {
      const Edge& ed = c.edge(e);
      if (p.present[s][e] && rng() % 2 && p.mate[s][ed.u] == kNoSlotEdge &&
          p.mate[s][ed.v] == kNoSlotEdge)
        match(p, c, s, e);
    }
  }
  std::vector<char> sat(c.n());
  for (auto& x : sat) x = rng() % 4 == 0;
  return {std::move(g), std::move(cls), std::move(c), std::move(p), std::move(sat)};
}

}  // namespace

TEST_CASE("parameters") {
  CHECK_NOTHROW(VimParams::desk(0.3));
  auto pf = VimParams::paper_faithful(0.9);
  CHECK(pf.alpha == 1);
  CHECK(pf.depth == 3);
  CHECK(pf.walk_cap == 2);
  CHECK_THROWS_AS(VimParams::paper_faithful(0.5), ParameterOverflow);
  CHECK(VimParams::paper_faithful(0.5, true).alpha == 127);
  CHECK_THROWS_AS(VimParams::paper_faithful(0.1, true), ParameterOverflow);
  VimParams bad;
  bad.walk_cap = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  CHECK(VimParams{}.slack() == doctest::Approx(2 * 0.09));
}

TEST_CASE("find_matching examples") {
  StochasticGraph g(2, {{0, 1, 1.0}});
  auto cls = classify(g, std::vector<double>{1.0}, 0.1, 0.5, 0.3);
  VimContext ctx(g, cls, params(0, 1), 1);
  VimRun run{5, 0};
  CHECK(ctx.find_matching(0, {1}, run).size() == 0);
  auto z = ctx.find_matching(1, {1}, run);
  CHECK(z.edges == std::vector<EdgeId>{0});
  CHECK(ctx.find_matching(1, {0}, run).size() == 0);
}

TEST_CASE("is_augmenting examples") {
  StochasticGraph g(4, {{0, 1, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}});
  auto cls = all_crucial(g, 0.5);
  CrucialGraph c(g, cls);
  Profile p(1, 4, 3);
  p.present[0] = {1, 1, 1};
  CHECK(is_augmenting(c, p, Hyperwalk{0, {{0, 0}}}));
  match(p, c, 0, 1);
  CHECK_FALSE(is_augmenting(c, p, Hyperwalk{0, {{0, 0}}}));
  Hyperwalk path{0, {{0, 0}, {1, 0}, {2, 0}}};
  CHECK(is_augmenting(c, p, path));
  CHECK(reference_augmenting(c, p, path));
  p.present[0][2] = 0;
  CHECK_FALSE(is_augmenting(c, p, path));
}

TEST_CASE("enumeration examples") {
  StochasticGraph g(2, {{0, 1, 0.5}});
  auto cls = all_crucial(g, 0.5);
  CrucialGraph c(g, cls);
  Profile p(1, 2, 1);
  p.present[0] = {1};
  CHECK(enumerate_augmenting_hyperwalks(c, p, {1, 1}, 3).empty());
  auto walks = enumerate_augmenting_hyperwalks(c, p, {0, 0}, 3);
  REQUIRE(walks.size() == 1);
  CHECK(walks[0] == Hyperwalk{0, {{0, 0}}});
  p.present[0] = {0};
  CHECK(enumerate_augmenting_hyperwalks(c, p, {0, 0}, 3).empty());
}

TEST_CASE("enumeration agrees with the reference checker") {
  std::size_t compared = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto rp = random_profile(seed, 1 + seed % 3);
    const std::size_t cap = 1 + seed % 4;
    auto found = enumerate_augmenting_hyperwalks(rp.c, rp.p, rp.saturated, cap);
    std::set<Hyperwalk> found_set(found.begin(), found.end());
    CHECK(found_set.size() == found.size());
    CHECK(std::is_sorted(found.begin(), found.end()));
    for (const auto& w : found) {
      CHECK(w == w.canonical(rp.c));
      CHECK(w.size() <= cap);
      CHECK(reference_augmenting(rp.c, rp.p, w));
      CHECK_FALSE(rp.saturated[w.start]);
      CHECK_FALSE(rp.saturated[w.end(rp.c)]);
    }
    for (VertexId v = 0; v < rp.c.n(); ++v) {
      if (rp.saturated[v]) continue;
      std::vector<Hyperwalk> all;
      std::vector<char> used(rp.c.n(), 0);
      used[v] = 1;
      Hyperwalk w{v, {}};
      simple_walks(rp.c, rp.p.slots(), cap, w, used, v, all);
      for (const auto& cand : all) {
        if (rp.saturated[cand.end(rp.c)] || !reference_augmenting(rp.c, rp.p, cand)) continue;
        ++compared;
        CHECK(found_set.count(cand.canonical(rp.c)) == 1);
      }
    }
  }
  CHECK(compared > 50);
}

TEST_CASE("conflict graph examples") {
  StochasticGraph g(7, {{0, 1, 0.5}, {2, 3, 0.5}, {1, 4, 0.5}, {4, 5, 0.5}, {1, 6, 0.5}});
  auto cls = all_crucial(g, 0.5);
  CrucialGraph c(g, cls);
  std::vector<Hyperwalk> disjoint{{0, {{0, 0}}}, {2, {{1, 0}}}};
  CHECK(build_conflict_graph(c, disjoint).num_edges() == 0);
  std::vector<Hyperwalk> shared{{0, {{0, 0}, {2, 0}}}, {6, {{4, 0}}}};
  CHECK(build_conflict_graph(c, shared).adjacent(0, 1));
  std::vector<Hyperwalk> hub{{0, {{0, 0}}}, {4, {{2, 0}}}, {6, {{4, 0}}}};
  auto h = build_conflict_graph(c, hub);
  CHECK(h.num_edges() == 3);
}

TEST_CASE("apply_hyperwalks examples") {
  StochasticGraph g(4, {{0, 1, 0.5}, {2, 3, 0.5}});
  auto cls = all_crucial(g, 0.5);
  CrucialGraph c(g, cls);
  Profile p(2, 4, 2);
  p.present = {{1, 1}, {1, 1}};
  Profile q = p;
  apply_hyperwalks(c, q, {});
  CHECK(q.mate == p.mate);
  std::vector<Hyperwalk> one{{0, {{0, 1}}}};
  apply_hyperwalks(c, q, one);
  CHECK(q.d(0) == 1);
  CHECK(q.d(1) == 1);
  CHECK(q.d(2) == 0);
  Profile r = p;
  std::vector<Hyperwalk> two{{0, {{0, 0}}}, {2, {{1, 1}}}};
  apply_hyperwalks(c, r, two);
  CHECK(r.total_d() == p.total_d() + 4);
  CHECK(r.valid(c));
  std::vector<Hyperwalk> idempotent{{0, {{0, 0}}}};
  apply_hyperwalks(c, r, idempotent);
  CHECK(r.total_d() == p.total_d() + 4);
  r.present[1][0] = 0;
  std::vector<Hyperwalk> absent{{0, {{0, 1}}}};
  CHECK_THROWS_AS(apply_hyperwalks(c, r, absent), Error);
}

TEST_CASE("gamma estimates") {
  StochasticGraph g(2, {{0, 1, 0.6}});
  auto cls = classify(g, std::vector<double>{0.6}, 0.1, 0.5, 0.3);
  VimParams pr = params(0, 1);
  pr.gamma_samples = 10000;
  VimContext ctx(g, cls, pr, 3);
  for (double x : ctx.gamma(0).mean) CHECK(x == 0.0);
  const auto& g1 = ctx.gamma(1);
  for (double x : g1.mean) CHECK(std::fabs(x - 0.6) <= 3 * std::sqrt(0.24 / 1e4));
  CHECK(&ctx.gamma(1) == &g1);

  StochasticGraph h(3, {{0, 1, 0.5}, {1, 2, 0.5}});
  auto none = classify(h, std::vector<double>{0.1, 0.1}, 0.2, 0.4, 0.3);
  auto e = estimate_gamma(h, none, params(2, 2), 2, 7);
  for (double x : e.mean) CHECK(x == 0.0);
}

TEST_CASE("matchings, counting identity and determinism on a corpus") {
  for (std::uint64_t s = 0; s < 15; ++s) {
    auto g = testsupport::random_small_graph(40 + s, 9, 14);
    auto cls = all_crucial(g, 0.4);
    VimContext ctx(g, cls, params(2, 2), s);
    for (std::uint64_t i = 0; i < 10; ++i) {
      VimRun run{s + 100, i};
      auto input = ctx.draw_input(run);
      std::vector<LevelTrace> trace;
      auto z = ctx.find_matching(2, input, run, &trace);
      CHECK(is_matching(g, z.edges));
      for (EdgeId e : z.edges) {
        CHECK(cls.is_crucial(e));
        bool realized = false;
        for (std::uint32_t l = 0; l < ctx.crucial().m(); ++l)
          if (ctx.crucial().g_edge(l) == e) realized = input[l];
        CHECK(realized);
      }
      for (const auto& t : trace) CHECK(t.d_after == t.d_before + 2 * t.independent);
      CHECK(ctx.find_matching(2, input, run).edges == z.edges);
    }
  }
}

TEST_CASE("only crucial state is read") {
  StochasticGraph g(4, {{0, 1, 0.9}, {1, 2, 0.3}, {2, 3, 0.9}});
  std::vector<double> q{0.9, 0.05, 0.9};
  auto cls = classify(g, q, 0.1, 0.5, 0.3);
  VimContext ctx(g, cls, params(1, 2), 1);
  CHECK(ctx.crucial().m() == 2);
  StochasticGraph g2(4, {{0, 1, 0.9}, {1, 2, 0.8}, {2, 3, 0.9}});
  VimContext ctx2(g2, cls, params(1, 2), 1);
  for (std::uint64_t i = 0; i < 20; ++i) {
    VimRun run{9, i};
    CHECK(ctx.find_matching(2, ctx.draw_input(run), run).edges ==
          ctx2.find_matching(2, ctx2.draw_input(run), run).edges);
  }
}

TEST_CASE("dependency radius") {
  StochasticGraph g(6, {{0, 1, 0.7}, {3, 4, 0.7}, {4, 5, 0.7}});
  auto cls = all_crucial(g, 0.5);
  VimContext ctx(g, cls, params(1, 1), 2);
  auto isolated = ctx.dependency_radius(2, 1, 5, 5);
  CHECK(isolated.radius == 0);
  auto edge = ctx.dependency_radius(0, 1, 5, 20);
  CHECK(edge.radius <= 1);
  CHECK(edge.radius <= edge.bound);
  CHECK(edge.eccentricity == 1);
  auto comp = ctx.dependency_radius(4, 1, 5, 20);
  CHECK(comp.eccentricity == 1);
  CHECK(comp.radius <= comp.bound);
}
