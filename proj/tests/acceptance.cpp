// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "stochmatch/certificate.hpp"
#include "stochmatch/decomposition.hpp"
#include "stochmatch/harness.hpp"
#include "stochmatch/matching.hpp"
#include "stochmatch/mis.hpp"
#include "stochmatch/oracle.hpp"
#include "stochmatch/reduction.hpp"
#include "stochmatch/sparsifier.hpp"
#include "stochmatch/stats.hpp"
#include "stochmatch/vim.hpp"
#include "support.hpp"

using namespace stochmatch;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

std::vector<StochasticGraph> corpus(std::size_t count, std::size_t max_n, std::size_t max_edges,
                                    std::uint64_t base) {
  std::vector<StochasticGraph> out;
  for (std::uint64_t s = 0; out.size() < count; ++s) {
    auto g = testsupport::random_small_graph(base + s, max_n, max_edges);
    if (g.m() >= 2) out.push_back(std::move(g));
  }
  return out;
}

// Classification from exact q with the desk schedule.
EdgeClassification exact_classification(const StochasticGraph& g, const ExactStats& st, double eps) {
  auto t = threshold_schedule(st.q, st.opt, eps, g.p_min(), ScheduleShape::geometric(0.5, 0.5));
  return classify(g, st.q, t.tau_minus, t.tau_plus, eps);
}

GeneratorSpec spec(GeneratorSpec::Family f, std::size_t n, double p, double density = 0.5) {
  GeneratorSpec s;
  s.family = f;
  s.n = n;
  s.p = p;
  s.density = density;
  return s;
}

// ---------------------------------------------------------------------------

Outcome oracle_agreement() {
  const std::size_t S = 100000;
  std::size_t edges = 0, misses = 0, sum_bad = 0;
  double worst_z = 0;
  for (const auto& g : corpus(50, 9, 12, 1000)) {
    const auto st = exact_stats(g);
    const auto est = estimate_q(g, S, g.m() * 7919 + g.n());
    std::uint64_t total = 0;
    for (auto c : est.counts) total += c;
    sum_bad += total != est.matched_total;
    for (EdgeId e = 0; e < g.m(); ++e) {
      ++edges;
      const double sigma = std::sqrt(st.q[e] * (1 - st.q[e]) / S);
      const double dev = std::fabs(est.q_hat[e] - st.q[e]);
      if (sigma == 0) {
        misses += dev > 1e-12;
        continue;
      }
      worst_z = std::max(worst_z, dev / sigma);
      misses += dev > 3 * sigma;
    }
  }
  return {misses == 0 && sum_bad == 0,
          std::to_string(edges) + " edges, " + std::to_string(misses) + " outside 3 sigma (max |z| = " +
              fmt(worst_z, 3) + "), sum identity failures " + std::to_string(sum_bad)};
}

Outcome degree_bound() {
  std::size_t builds = 0, violations = 0;
  for (const auto& g : corpus(50, 10, 20, 2000)) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const std::size_t R = 1 + seed % 8;
      violations += build_q(g, R, seed).max_degree(g) > R;
      ++builds;
    }
  }
  return {violations == 0,
          std::to_string(builds) + " builds, " + std::to_string(violations) + " violations"};
}

Outcome threshold_schedule_check() {
  std::size_t instances = 0, bad_j = 0, bad_mass = 0;
  for (const auto& g : corpus(80, 9, 14, 3000)) {
    const auto st = exact_stats(g);
    for (double eps : {0.1, 0.2, 0.3, 0.5}) {
      for (const auto& shape : {ScheduleShape::geometric(0.5, 0.5), ScheduleShape::geometric(0.3, 0.2),
                                ScheduleShape::power(0.6, 2.0)}) {
        ++instances;
        auto t = threshold_schedule(st.q, st.opt, eps, g.p_min(), shape);
        bad_j += t.j > static_cast<std::size_t>(std::ceil(1 / eps)) + 1;
        double kept = 0;
        for (double q : st.q)
          if (label_for(q, t.tau_minus, t.tau_plus) != EdgeLabel::Ignored) kept += q;
        bad_mass += kept < (1 - eps) * st.opt;
      }
    }
  }
  return {bad_j == 0 && bad_mass == 0, std::to_string(instances) + " schedules, j-bound failures " +
                                           std::to_string(bad_j) + ", mass failures " +
                                           std::to_string(bad_mass)};
}

Outcome vim_validity() {
  std::size_t runs = 0, levels = 0, bad_matching = 0, bad_subset = 0, bad_identity = 0;
  std::vector<std::pair<StochasticGraph, EdgeClassification>> cases;
  for (const auto& g : corpus(20, 9, 14, 4000)) cases.emplace_back(g, exact_classification(g, exact_stats(g), 0.3));
  for (std::uint64_t s = 0; s < 3; ++s) {
    auto g = generate(spec(GeneratorSpec::Family::ErdosRenyi, 24, 0.6, 0.15), 40 + s);
    auto est = estimate_q(g, 5000, s);
    auto t = threshold_schedule(est.q_hat, est.opt_hat, 0.3, g.p_min(), ScheduleShape::geometric(0.5, 0.5));
    cases.emplace_back(g, classify(g, est.q_hat, t.tau_minus, t.tau_plus, 0.3));
  }
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& [g, cls] = cases[k];
    VimParams p = VimParams::desk(0.3);
    p.gamma_samples = 100;
    VimContext ctx(g, cls, p, k);
    for (std::uint64_t i = 0; i < 60; ++i) {
      VimRun run{k * 1000 + 1, i};
      auto input = ctx.draw_input(run);
      std::vector<LevelTrace> trace;
      auto z = ctx.find_matching(p.depth, input, run, &trace);
      ++runs;
      bad_matching += !is_matching(g, z.edges);
      std::vector<char> realized(g.m(), 0);
      for (std::uint32_t l = 0; l < ctx.crucial().m(); ++l) realized[ctx.crucial().g_edge(l)] = input[l];
      for (EdgeId e : z.edges) bad_subset += !cls.is_crucial(e) || !realized[e];
      for (const auto& t : trace) {
        ++levels;
        bad_identity += t.d_after != t.d_before + 2 * t.independent;
      }
    }
  }
  return {bad_matching + bad_subset + bad_identity == 0,
          std::to_string(runs) + " runs, " + std::to_string(levels) + " levels; non-matchings " +
              std::to_string(bad_matching) + ", edges outside realized C " + std::to_string(bad_subset) +
              ", identity failures " + std::to_string(bad_identity)};
}

Outcome vim_saturation_cap() {
  const double eps = 0.3;
  const std::size_t N = 10000;
  std::size_t vertices = 0, violations = 0, instances = 0;
  double worst = -1;
  for (const auto& g : corpus(40, 8, 11, 5000)) {
    const auto st = exact_stats(g);
    const auto cls = exact_classification(g, st, eps);
    if (cls.crucial.size() < 2) continue;
    if (++instances > 6) break;
    VimParams p = VimParams::desk(eps);
    p.alpha = 11;
    p.depth = 2;
    p.gamma_samples = 2000;
    VimContext ctx(g, cls, p, instances);
    const auto& gamma_prev = ctx.gamma(p.depth - 1);
    std::vector<std::size_t> hits(g.n(), 0);
    for (std::uint64_t i = 0; i < N; ++i) {
      VimRun run{instances * 77 + 5, i};
      auto z = ctx.find_matching(p.depth, ctx.draw_input(run), run);
      for (VertexId v = 0; v < g.n(); ++v) hits[v] += z.covers(v);
    }
    for (VertexId v = 0; v < g.n(); ++v) {
      ++vertices;
      const double freq = static_cast<double>(hits[v]) / N;
      const double sigma = std::sqrt(freq * (1 - freq) / N);
      const double cap = std::max(cls.c[v] - eps * eps, 0.0) + 3 * sigma + p.gamma_z * gamma_prev.se[v];
      worst = std::max(worst, freq - cap);
      violations += freq > cap;
    }
  }
  return {violations == 0, std::to_string(instances) + " instances, " + std::to_string(vertices) +
                               " vertices, " + std::to_string(violations) +
                               " above cap (max excess " + fmt(worst, 3) + ")"};
}

Outcome vim_independence() {
  auto g = generate(spec(GeneratorSpec::Family::TwoFarComponents, 4, 0.7), 1);
  const auto st = exact_stats(g);
  const auto cls = exact_classification(g, st, 0.3);
  VimParams p = VimParams::desk(0.3);
  p.gamma_samples = 1000;
  VimContext ctx(g, cls, p, 9);
  auto rep = independence_test(ctx, p.depth, cls.lambda, 10000, 17);
  std::size_t controls = 0, controls_bad = 0, far_bad = 0;
  for (const auto& pc : rep.pairs) {
    if (pc.control) {
      ++controls;
      controls_bad += !pc.passed;
    } else {
      far_bad += !pc.passed;
    }
  }
  const bool ok = rep.far_pairs() > 0 && far_bad == 0 && controls > 0 && controls_bad == 0;
  return {ok, "lambda = " + fmt(cls.lambda, 3) + ", " + std::to_string(rep.far_pairs()) + " far pairs (" +
                  std::to_string(far_bad) + " outside 3 sigma), " + std::to_string(controls) +
                  " controls (" + std::to_string(controls_bad) + " not positive)"};
}

Outcome locality() {
  auto g = generate(spec(GeneratorSpec::Family::Path, 60, 0.7), 1);
  std::vector<double> q(g.m(), 0.5);
  const auto cls = classify(g, q, 0.1, 0.4, 0.3);
  VimParams p = VimParams::desk(0.3);
  p.alpha = 2;
  p.depth = 2;
  p.walk_cap = 2;
  p.gamma_samples = 200;
  p.mis_round_constant = 0.05;
  VimContext ctx(g, cls, p, 3);
  std::size_t trials = 0, violations = 0, worst = 0, bound = 0;
  for (VertexId v : {0u, 7u, 20u, 30u, 45u}) {
    auto r = ctx.dependency_radius(v, p.depth, 101 + v, 200);
    trials += r.trials;
    bound = r.bound;
    worst = std::max(worst, r.radius);
    violations += r.radius > r.bound;
  }
  return {violations == 0 && trials >= 1000,
          std::to_string(trials) + " trials, max radius " + std::to_string(worst) + ", bound " +
              std::to_string(bound) + " (MIS rounds " + std::to_string(ctx.mis_rounds()) + ")"};
}

Outcome certificate_validity() {
  std::size_t pipelines = 0, failed = 0;
  std::string first_failure;
  std::vector<GeneratorSpec> specs{spec(GeneratorSpec::Family::Path, 3, 0.5),
                                   spec(GeneratorSpec::Family::Clique, 5, 0.5),
                                   spec(GeneratorSpec::Family::ErdosRenyi, 9, 0.4, 0.3),
                                   spec(GeneratorSpec::Family::ErdosRenyi, 10, 0.7, 0.25),
                                   spec(GeneratorSpec::Family::TwoFarComponents, 5, 0.6)};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (double eps : {0.3, 0.5}) {
      ExperimentConfig cfg;
      cfg.generator = specs[i];
      cfg.epsilon = eps;
      cfg.seed = 10 + i;
      cfg.q_samples = 10000;
      cfg.runs = 200;
      cfg.gamma_samples = 200;
      auto rep = run_pipeline(cfg);
      ++pipelines;
      for (const auto& c : rep.checks) {
        if (c.name != "y_vertex_sums_at_most_1" && c.name != "y_blossom_inequalities" &&
            c.name != "x_vertex_mean_at_most_1")
          continue;
        if (!c.passed) {
          ++failed;
          if (first_failure.empty()) first_failure = "; first: " + c.name + " " + c.detail;
        }
      }
    }
  }
  return {failed == 0, std::to_string(pipelines) + " pipelines x 200 runs, " + std::to_string(failed) +
                           " failed checks" + first_failure};
}

Outcome f_properties() {
  const double eps = 0.3;
  std::size_t instances = 0, edges = 0, bad_edges = 0, bad_sums = 0;
  for (const auto& g : corpus(15, 9, 13, 6000)) {
    const auto st = exact_stats(g);
    const auto cls = exact_classification(g, st, eps);
    const std::size_t R = default_R(cls.tau_minus);
    std::vector<FValues> batch;
    for (std::uint64_t s = 0; s < 2000; ++s) batch.push_back(compute_f(g, build_q(g, R, s), cls, eps));
    auto rep = test_f_properties(g, cls, eps, st.q, cls.n, batch, R);
    ++instances;
    edges += rep.edges.size();
    for (const auto& e : rep.edges) bad_edges += !e.upper_ok || !e.lower_ok;
    bad_sums += !rep.vertex_sums_ok;
  }
  return {bad_edges == 0 && bad_sums == 0,
          std::to_string(instances) + " instances, R = default, " + std::to_string(edges) +
              " non-crucial edges, " + std::to_string(bad_edges) + " outside band, " +
              std::to_string(bad_sums) + " vertex-sum failures"};
}

Outcome ratio_behavior() {
  auto g = generate(spec(GeneratorSpec::Family::Clique, 20, 0.5), 1);
  std::vector<RatioEstimate> est;
  std::ostringstream detail;
  bool monotone = true;
  for (std::size_t R : {1, 2, 4, 8, 16, 32}) {
    est.push_back(estimate_ratio(g, QBuilder::Algorithm1, R, 60, 100, 5));
    detail << "R=" << R << ":" << fmt(est.back().ratio, 3) << " ";
    if (est.size() > 1) {
      const auto& a = est[est.size() - 2];
      const auto& b = est.back();
      monotone &= b.ratio >= a.ratio - 3 * std::sqrt(a.se * a.se + b.se * b.se);
    }
  }
  auto base = estimate_ratio(g, QBuilder::BaselineIterative, 8, 1, 6000, 5);
  detail << "| baseline R=8: " << fmt(base.ratio, 3) << ", algorithm 1 margin "
         << fmt(est[3].ratio - base.ratio, 3);
  return {monotone && est.back().ratio >= 0.9, detail.str()};
}

Outcome concentration() {
  auto g = generate(spec(GeneratorSpec::Family::ErdosRenyi, 40, 0.5, 0.3), 1);
  auto rep = concentration_test(g, {0.25, 0.5}, 10000, 3);
  std::ostringstream detail;
  bool ok = true;
  for (const auto& r : rep.rows) {
    ok &= !r.out_of_precondition && r.within;
    detail << "t=" << fmt(r.t, 3) << ": " << fmt(r.empirical, 3) << " <= " << fmt(r.bound, 3) << "; ";
  }
  StochasticGraph single(2, {{0, 1, 0.5}});
  auto sr = concentration_test(single, {0.8}, 2000, 4);
  const bool labeled = sr.rows[0].out_of_precondition && sr.ok();
  ok &= labeled;
  detail << "single edge " << (labeled ? "labeled out-of-precondition" : "NOT labeled");
  return {ok, detail.str()};
}

Outcome reduction() {
  std::ostringstream detail;
  // realization coupling
  StochasticGraph small(4, {{0, 2, 0.3}, {1, 3, 0.4}, {0, 3, 0.2}, {1, 2, 0.1}});
  auto c = contract_with_buckets(small, 2, {0, 0, 1, 1});
  const std::size_t N = 100000;
  std::size_t joint = 0, merged = 0;
  for (std::uint64_t i = 0; i < N; ++i) {
    auto r = sample_realization(small, 1, {Purpose::ReductionCheck, 0, 0, i});
    joint += std::any_of(r.present.begin(), r.present.end(), [](char x) { return x != 0; });
    merged += sample_realization(c.merged, 2, {Purpose::ReductionCheck, 1, 0, i}).present[0];
  }
  const double pm = c.merged.edge(0).p;
  const double coupling_dev = std::fabs(static_cast<double>(joint) - static_cast<double>(merged)) / N;
  const bool coupling = coupling_dev <= 3 * std::sqrt(2 * pm * (1 - pm) / N);
  detail << "coupling dev " << fmt(coupling_dev, 3) << "; ";

  // injective round trip
  bool round_trip = true;
  for (const auto& g : corpus(30, 10, 18, 7000)) {
    std::vector<std::uint32_t> b(g.n());
    std::iota(b.rbegin(), b.rend(), 0);
    auto ct = contract_with_buckets(g, g.n(), b);
    auto m = max_matching(ct.merged, Realization{std::vector<char>(ct.merged.m(), 1)});
    std::vector<EdgeId> back;
    for (EdgeId e : m.edges) back.push_back(ct.origin[e][0]);
    round_trip &= is_matching(g, back) && back.size() == m.size() &&
                  back.size() == mu(g, Realization{std::vector<char>(g.m(), 1)});
  }
  detail << "round trip " << (round_trip ? "exact" : "BROKEN") << "; ";

  // expected matching preserved under contraction
  const double eps = 0.5;
  auto g = generate(spec(GeneratorSpec::Family::ErdosRenyi, 120, 0.6, 0.04), 2);
  auto est = estimate_q(g, 4000, 3);
  const bool pre = reduction_precondition(est.opt_hat, eps);
  auto ct = contract(g, eps, est.opt_hat, 4);
  RunningStats h;
  for (std::uint64_t i = 0; i < 4000; ++i)
    h.add(static_cast<double>(mu(ct.merged, sample_realization(ct.merged, 5, {Purpose::Realization, 0, 0, i}))));
  const double se = std::sqrt(h.variance() / h.count() + est.opt_se * est.opt_se);
  const bool preserved = h.mean() >= (1 - 3 * eps) * est.opt_hat - 3 * se;
  detail << "opt_hat " << fmt(est.opt_hat) << " (precondition " << (pre ? "met" : "NOT met") << "), k = "
         << ct.k << ", E[mu(H)] = " << fmt(h.mean()) << ", ratio " << fmt(h.mean() / est.opt_hat, 3);
  return {coupling && round_trip && pre && preserved, detail.str()};
}

Outcome mis_quality() {
  std::vector<ConflictGraph> graphs;
  for (std::uint32_t leaves : {8u, 32u}) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    for (std::uint32_t i = 1; i <= leaves; ++i) e.push_back({0, i});
    graphs.push_back(ConflictGraph::from_edges(leaves + 1, e));
  }
  std::mt19937_64 rng(42);
  while (graphs.size() < 6) {
    const std::uint32_t n = 40 + rng() % 60;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    std::vector<std::size_t> deg(n, 0);
    for (std::uint32_t u = 0; u < n; ++u)
      for (std::uint32_t v = u + 1; v < n; ++v)
        if (rng() % 100 < 12 && deg[u] < 32 && deg[v] < 32) {
          e.push_back({u, v});
          ++deg[u];
          ++deg[v];
        }
    graphs.push_back(ConflictGraph::from_edges(n, e));
  }
  std::size_t dependent = 0, short_fall = 0;
  double worst = 1e9;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    for (double eps : {0.1, 0.3}) {
      RunningStats diff;
      for (std::uint64_t s = 0; s < 1000; ++s) {
        auto r = apx_mis(graphs[k], eps, k * 100000 + s);
        dependent += !is_independent(graphs[k], r.independent);
        const auto full = greedy_complete(graphs[k], r);
        diff.add(static_cast<double>(r.independent.size()) - (1 - eps) * static_cast<double>(full.size()));
      }
      const double margin = diff.mean() + 3 * std::sqrt(diff.variance() / diff.count());
      worst = std::min(worst, margin);
      short_fall += margin < 0;
    }
  }
  return {dependent == 0 && short_fall == 0,
          std::to_string(graphs.size()) + " graphs x 2 eps x 1000 seeds, dependent outputs " +
              std::to_string(dependent) + ", shortfalls " + std::to_string(short_fall) +
              " (min margin " + fmt(worst, 3) + ")"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double time_limit;  // seconds, 0 = none
  };
  const std::vector<Criterion> criteria{
      {"oracle agreement", oracle_agreement, 120},
      {"sparsifier degree bound", degree_bound, 0},
      {"threshold schedule", threshold_schedule_check, 0},
      {"vim validity and counting identity", vim_validity, 0},
      {"vim saturation cap", vim_saturation_cap, 300},
      {"vim independence at distance", vim_independence, 0},
      {"locality radius", locality, 0},
      {"certificate validity", certificate_validity, 0},
      {"f properties", f_properties, 0},
      {"ratio behavior", ratio_behavior, 600},
      {"concentration", concentration, 0},
      {"reduction", reduction, 0},
      {"approximate MIS", mis_quality, 0},
  };
  std::size_t failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].time_limit > 0 && secs > criteria[i].time_limit) {
      o.passed = false;
      o.detail += "; over the " + fmt(criteria[i].time_limit, 4) + " s limit";
    }
    failures += !o.passed;
    std::printf("%s [%zu] %s: %s (%.1f s)\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
