#include "stochmatch/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "stochmatch/matching.hpp"
#include "stochmatch/oracle.hpp"
#include "stochmatch/random.hpp"
#include "stochmatch/reduction.hpp"
#include "stochmatch/sparsifier.hpp"
#include "stochmatch/stats.hpp"

namespace stochmatch {

GeneratorSpec::Family GeneratorSpec::parse_family(const std::string& name) {
  if (name == "erdos_renyi") return Family::ErdosRenyi;
  if (name == "clique") return Family::Clique;
  if (name == "path") return Family::Path;
  if (name == "bipartite_random") return Family::BipartiteRandom;
  if (name == "two_far_components") return Family::TwoFarComponents;
  throw InvalidArgument("unknown graph family '" + name + "'");
}

std::string GeneratorSpec::family_name(Family f) {
  switch (f) {
    case Family::ErdosRenyi: return "erdos_renyi";
    case Family::Clique: return "clique";
    case Family::Path: return "path";
    case Family::BipartiteRandom: return "bipartite_random";
    case Family::TwoFarComponents: return "two_far_components";
  }
  return "unknown";
}

StochasticGraph generate(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.n < 1) throw InvalidArgument("generator needs n >= 1");
  if (!(spec.p > 0.0 && spec.p <= 1.0)) throw InvalidArgument("p must lie in (0, 1]");
  if (spec.p_max && !(*spec.p_max >= spec.p && *spec.p_max <= 1.0))
    throw InvalidArgument("p_max must lie in [p, 1]");
  if (!(spec.density >= 0.0 && spec.density <= 1.0))
    throw InvalidArgument("density must lie in [0, 1]");
  RandomStream rs(seed, {Purpose::Generator, 0, 0, 0});
  auto draw_p = [&] { return spec.p_max ? spec.p + (*spec.p_max - spec.p) * rs.uniform() : spec.p; };
  std::vector<Edge> edges;
  std::size_t n = spec.n;
  using F = GeneratorSpec::Family;
  switch (spec.family) {
    case F::ErdosRenyi:
      for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v)
          if (rs.uniform() < spec.density) edges.push_back({u, v, draw_p()});
      break;
    case F::Clique:
      for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) edges.push_back({u, v, draw_p()});
      break;
    case F::Path:
      for (VertexId u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1, draw_p()});
      break;
    case F::BipartiteRandom:
      if (spec.n2 < 1) throw InvalidArgument("bipartite_random needs n2 >= 1");
      for (VertexId u = 0; u < spec.n; ++u)
        for (VertexId v = 0; v < spec.n2; ++v)
          if (rs.uniform() < spec.density)
            edges.push_back({u, static_cast<VertexId>(spec.n + v), draw_p()});
      n = spec.n + spec.n2;
      break;
    case F::TwoFarComponents:
      for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i + 1 < spec.n; ++i)
          edges.push_back({static_cast<VertexId>(c * spec.n + i),
                           static_cast<VertexId>(c * spec.n + i + 1), draw_p()});
      n = 2 * spec.n;
      break;
  }
  return StochasticGraph(n, std::move(edges));
}

// ---------------------------------------------------------------------------

RatioEstimate estimate_ratio(const StochasticGraph& g, QBuilder builder, std::size_t R,
                             std::size_t outer, std::size_t inner, std::uint64_t seed) {
  if (outer < 1 || inner < 1) throw InvalidArgument("sample counts must be positive");
  RatioEstimate est;
  est.outer = outer;
  est.inner = inner;
  const std::uint64_t q_seed = hash_combine(seed, 1);
  const std::uint64_t eval_seed = hash_combine(seed, 2);
  const std::uint64_t g_seed = hash_combine(seed, 3);
  RunningStats qs, gs;
  std::optional<SubgraphQ> baseline;
  for (std::size_t o = 0; o < outer; ++o) {
    SubgraphQ q;
    if (builder == QBuilder::Algorithm1) {
      q = build_q(g, R, hash_combine(q_seed, o));
    } else {
      if (!baseline) baseline = build_baseline_iterative(g, R);
      q = *baseline;
    }
    RunningStats inner_stats;
    for (std::size_t i = 0; i < inner; ++i)
      inner_stats.add(static_cast<double>(realize_and_match_q(g, q, eval_seed, o * inner + i).mu));
    est.per_q_means.push_back(inner_stats.mean());
    qs.add(inner_stats.mean());
  }
  for (std::size_t s = 0; s < outer * inner; ++s) {
    const double v = static_cast<double>(mu(g, sample_realization(g, g_seed, {Purpose::Realization, 0, 0, s})));
    est.g_values.push_back(v);
    gs.add(v);
  }
  est.mean_q = qs.mean();
  est.se_q = qs.stderr_mean();
  est.mean_g = gs.mean();
  est.se_g = gs.stderr_mean();
  if (est.mean_g > 0.0) {
    est.ratio = est.mean_q / est.mean_g;
    const double rel_q = est.mean_q > 0.0 ? est.se_q / est.mean_q : 0.0;
    const double rel_g = est.se_g / est.mean_g;
    est.se = est.ratio * std::sqrt(rel_q * rel_q + rel_g * rel_g);
    if (est.mean_q == 0.0) est.se = est.se_q / est.mean_g;
  } else {
    est.ratio = 1.0;
  }
  return est;
}

// ---------------------------------------------------------------------------

bool ConcentrationReport::ok() const {
  for (const auto& r : rows)
    if (!r.out_of_precondition && !r.within) return false;
  return true;
}

ConcentrationReport concentration_test(const StochasticGraph& g,
                                       const std::vector<double>& fractions, std::size_t samples,
                                       std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("samples must be positive");
  ConcentrationReport rep;
  rep.samples = samples;
  std::vector<double> mus(samples);
  for (std::size_t s = 0; s < samples; ++s)
    mus[s] = static_cast<double>(mu(g, sample_realization(g, seed, {Purpose::Realization, 0, 0, s})));
  rep.opt_hat = compensated_total(mus) / static_cast<double>(samples);
  for (double f : fractions) {
    ConcentrationRow row;
    row.fraction = f;
    row.t = f * rep.opt_hat;
    std::size_t hits = 0;
    for (double m : mus) hits += std::fabs(m - rep.opt_hat) >= row.t;
    row.empirical = static_cast<double>(hits) / static_cast<double>(samples);
    row.bound = std::exp(-row.t * row.t / (2.0 * rep.opt_hat + 2.0 * row.t / 3.0));
    if (!std::isfinite(row.bound)) row.bound = 1.0;
    row.sigma = binomial_se(row.bound, samples);
    row.within = row.empirical <= row.bound + 3.0 * row.sigma;
    row.out_of_precondition = rep.opt_hat < 1.0 || row.t > rep.opt_hat;
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------

std::size_t IndependenceReport::far_pairs() const {
  std::size_t k = 0;
  for (const auto& p : pairs) k += !p.control;
  return k;
}

bool IndependenceReport::far_ok() const {
  for (const auto& p : pairs)
    if (!p.control && !p.passed) return false;
  return true;
}

bool IndependenceReport::controls_ok() const {
  for (const auto& p : pairs)
    if (p.control && !p.passed) return false;
  return true;
}

namespace {

std::pair<double, double> covariance(const std::vector<char>& x, const std::vector<char>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  RunningStats prod;
  for (std::size_t i = 0; i < n; ++i) prod.add((x[i] - mx) * (y[i] - my));
  const double cov = n > 1 ? prod.mean() * static_cast<double>(n) / static_cast<double>(n - 1) : 0.0;
  return {cov, prod.stderr_mean()};
}

}  // namespace

IndependenceReport independence_test(VimContext& ctx, std::size_t depth, double lambda,
                                     std::size_t samples, std::uint64_t seed,
                                     std::size_t max_pairs) {
  const StochasticGraph& g = ctx.graph();
  const CrucialGraph& c = ctx.crucial();
  IndependenceReport rep;
  rep.samples = samples;
  rep.lambda = lambda;
  std::vector<std::vector<char>> x(g.n(), std::vector<char>(samples, 0));
  const std::uint64_t real_seed = hash_combine(seed, 1);
  const std::uint64_t vim_seed = hash_combine(seed, 2);
  for (std::size_t s = 0; s < samples; ++s) {
    const Realization r = sample_realization(g, real_seed, {Purpose::Realization, 0, 0, s});
    const Matching z = ctx.find_matching(depth, c.project(r), VimRun{vim_seed, s});
    for (VertexId v = 0; v < g.n(); ++v) x[v][s] = z.covers(v);
  }
  rep.match_freq.resize(g.n());
  for (VertexId v = 0; v < g.n(); ++v) {
    double k = 0;
    for (char b : x[v]) k += b;
    rep.match_freq[v] = samples ? k / static_cast<double>(samples) : 0.0;
  }
  bool truncated = false;
  for (VertexId u = 0; u < g.n() && !truncated; ++u) {
    const auto dist = c.distances_from(u);
    for (VertexId v = u + 1; v < g.n(); ++v) {
      if (dist[v] != kUnreachable && static_cast<double>(dist[v]) < lambda) continue;
      if (rep.pairs.size() >= max_pairs) {
        truncated = true;
        break;
      }
      PairCovariance pc;
      pc.u = u;
      pc.v = v;
      pc.distance = dist[v];
      std::tie(pc.cov, pc.sigma) = covariance(x[u], x[v]);
      pc.passed = std::fabs(pc.cov) <= 3.0 * pc.sigma + 1e-12;
      rep.pairs.push_back(pc);
    }
  }
  for (std::uint32_t e = 0; e < c.m(); ++e) {
    PairCovariance pc;
    pc.u = c.edge(e).u;
    pc.v = c.edge(e).v;
    pc.distance = 1;
    pc.control = true;
    std::tie(pc.cov, pc.sigma) = covariance(x[pc.u], x[pc.v]);
    pc.passed = pc.cov > 3.0 * pc.sigma;
    rep.pairs.push_back(pc);
  }
  if (rep.far_pairs() == 0) rep.notice = "no vertex pair at crucial distance >= lambda";
  if (truncated) rep.notice = "far pairs truncated at " + std::to_string(max_pairs);
  return rep;
}

// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (q_samples < 1 || runs < 1 || gamma_samples < 1)
    throw InvalidArgument("sample counts must be positive");
  if (!graph_file && !generator) throw InvalidArgument("experiment needs a graph file or generator");
  if (R && *R < 1) throw InvalidArgument("R must be positive");
  if (walk_cap && *walk_cap < 1) throw InvalidArgument("walk_cap must be positive");
}

bool ExperimentReport::ok() const {
  for (const Check& c : checks)
    if (!c.informational && !c.passed) return false;
  return true;
}

std::pair<double, double> paired_ratio(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("paired samples must match");
  const double n = static_cast<double>(a.size());
  RunningStats sa, sb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa.add(a[i]);
    sb.add(b[i]);
  }
  const double A = sa.mean(), B = sb.mean();
  if (B == 0.0) return {1.0, 0.0};
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cov += (a[i] - A) * (b[i] - B);
  cov = a.size() > 1 ? cov / (n - 1.0) : 0.0;
  const double r = A / B;
  const double var = (sa.variance() - 2.0 * r * cov + r * r * sb.variance()) / (B * B * n);
  return {r, std::sqrt(std::max(0.0, var))};
}

namespace {

class StageTimer {
 public:
  StageTimer(ExperimentReport& rep, std::string name)
      : rep_(rep), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
    rep_.timings.emplace_back(name_, d.count());
  }

 private:
  ExperimentReport& rep_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

template <class F>
auto stage(ExperimentReport& rep, const std::string& name, F&& body) {
  StageTimer timer(rep, name);
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void add_check(ExperimentReport& rep, std::string name, bool passed, std::string detail,
               bool informational = false) {
  rep.checks.push_back({std::move(name), passed, informational, std::move(detail)});
}

}  // namespace

ExperimentReport run_pipeline(const ExperimentConfig& config) {
  ExperimentReport rep;
  rep.epsilon = config.epsilon;
  rep.seed = config.seed;
  rep.paper_faithful = config.paper_faithful;
  const double eps = config.epsilon;

  const VimParams params = stage(rep, "config", [&] {
    config.validate();
    VimParams p = config.paper_faithful ? VimParams::paper_faithful(eps, config.force)
                                        : VimParams::desk(eps);
    if (config.alpha) p.alpha = *config.alpha;
    if (config.depth) p.depth = *config.depth;
    if (config.walk_cap) p.walk_cap = *config.walk_cap;
    p.gamma_samples = config.gamma_samples;
    p.validate();
    return p;
  });
  rep.vim = params;

  const StochasticGraph g = stage(rep, "load", [&] {
    return config.graph_file ? read_graph_file(*config.graph_file)
                             : generate(*config.generator, hash_combine(config.seed, 5));
  });
  rep.n = g.n();
  rep.m = g.m();

  // decompose
  const QEstimate qe = stage(rep, "decompose", [&] {
    return estimate_q(g, config.q_samples, hash_combine(config.seed, 11));
  });
  rep.opt_hat = qe.opt_hat;
  rep.opt_se = qe.opt_se;
  std::optional<ExactStats> exact;
  if (g.m() <= kDefaultOracleEdgeCap) {
    exact = stage(rep, "oracle", [&] { return exact_stats(g); });
    rep.opt_exact = exact->opt;
    const double dev = std::fabs(qe.opt_hat - exact->opt);
    add_check(rep, "opt_hat_matches_oracle", dev <= 3.0 * qe.opt_se + 1e-12,
              "|opt_hat - opt| = " + fmt(dev) + ", 3se = " + fmt(3.0 * qe.opt_se), true);
  }
  {
    std::uint64_t total = 0;
    for (auto c : qe.counts) total += c;
    add_check(rep, "sum_q_hat_equals_opt_hat", total == qe.matched_total,
              std::to_string(total) + " vs " + std::to_string(qe.matched_total));
  }
  const EdgeClassification cls = stage(rep, "decompose", [&] {
    ScheduleShape shape = config.paper_faithful
                              ? ScheduleShape::paper_faithful()
                              : ScheduleShape::geometric(config.t0.value_or(0.5), config.gamma.value_or(0.5));
    rep.thresholds = threshold_schedule(qe.q_hat, qe.opt_hat, eps, g.p_min(), shape);
    LambdaRule rule;
    rule.paper_faithful = config.paper_faithful;
    if (config.c_lambda) rule.c_lambda = *config.c_lambda;
    return classify(g, qe.q_hat, rep.thresholds.tau_minus, rep.thresholds.tau_plus, eps, rule);
  });
  rep.crucial = cls.crucial.size();
  for (auto l : cls.labels) {
    rep.noncrucial += l == EdgeLabel::NonCrucial;
    rep.ignored += l == EdgeLabel::Ignored;
  }
  rep.delta_C = cls.delta_C;
  rep.lambda = cls.lambda;
  {
    const std::size_t bound = static_cast<std::size_t>(std::ceil(1.0 / eps * (1.0 - 1e-12))) + 1;
    add_check(rep, "threshold_index_bound", rep.thresholds.j <= bound,
              "j = " + std::to_string(rep.thresholds.j) + ", bound = " + std::to_string(bound));
    double kept = 0.0;
    for (EdgeId e = 0; e < g.m(); ++e)
      if (cls.labels[e] != EdgeLabel::Ignored) kept += qe.q_hat[e];
    add_check(rep, "crucial_plus_noncrucial_mass", kept >= (1.0 - eps) * qe.opt_hat - 1e-9,
              "q(C)+q(N) = " + fmt(kept) + ", (1-eps) opt_hat = " + fmt((1.0 - eps) * qe.opt_hat));
  }
  add_check(rep, "assumption_opt_linear_in_n", qe.opt_hat >= 0.1 * eps * static_cast<double>(g.n()),
            qe.opt_hat >= 0.1 * eps * static_cast<double>(g.n())
                ? "opt_hat >= 0.1 eps n"
                : "opt_hat < 0.1 eps n; consider running with --contract",
            true);

  if (config.contract) {
    stage(rep, "contract", [&] {
      const Contraction ct = contract(g, eps, std::max(qe.opt_hat, 1e-9), hash_combine(config.seed, 29));
      rep.contraction_k = ct.k;
      RunningStats st;
      for (std::size_t i = 0; i < config.runs; ++i)
        st.add(static_cast<double>(mu(ct.merged, sample_realization(ct.merged, hash_combine(config.seed, 31),
                                                                    {Purpose::ReductionCheck, 0, 0, i}))));
      rep.contraction_mu_mean = st.mean();
      rep.contraction_mu_se = st.stderr_mean();
      const bool pre = reduction_precondition(qe.opt_hat, eps);
      const double target = (1.0 - 3.0 * eps) * qe.opt_hat;
      add_check(rep, "contraction_preserves_opt", st.mean() >= target - 3.0 * st.stderr_mean(),
                "E[mu(H)] = " + fmt(st.mean()) + ", (1-3eps) opt_hat = " + fmt(target) +
                    (pre ? "" : " (opt <= 3/eps^3, out of precondition)"),
                !pre);
      return 0;
    });
  }

  const SubgraphQ q = stage(rep, "sparsify", [&] {
    rep.R = config.R ? *config.R : default_R(rep.thresholds.tau_minus);
    return build_q(g, rep.R, hash_combine(config.seed, 13));
  });
  rep.q_size = q.size();
  rep.q_max_degree = q.max_degree(g);
  add_check(rep, "q_degree_at_most_R", rep.q_max_degree <= rep.R,
            "max degree " + std::to_string(rep.q_max_degree) + ", R = " + std::to_string(rep.R));

  VimContext ctx(g, cls, params, hash_combine(config.seed, 17));
  stage(rep, "vim", [&] {
    rep.matched_prob = ctx.gamma(params.depth).mean;
    return 0;
  });

  const auto dist = crucial_distances(g, cls);
  const FValues f = compute_f(g, q, cls, eps);
  const std::size_t blossom_size =
      std::min<std::size_t>(static_cast<std::size_t>(std::ceil(1.0 / eps * (1.0 - 1e-12))), kMaxBlossomSetSize);

  std::size_t z_bad = 0, identity_bad = 0, support_bad = 0, exclusive_bad = 0, x_blossom_bad = 0;
  std::size_t cap_runs = 0, cap_bad = 0;
  std::vector<RunningStats> xv(g.n());
  std::vector<CertificateRun> runs;
  stage(rep, "runs", [&] {
    const std::uint64_t real_seed = hash_combine(config.seed, 19);
    const std::uint64_t vim_seed = hash_combine(config.seed, 23);
    double max_prob = 0.0;
    for (double pr : rep.matched_prob) max_prob = std::max(max_prob, pr);
    const double x_cap = 1.0 / (g.p_min() * std::pow(eps, 4.0));
    for (std::size_t i = 0; i < config.runs; ++i) {
      const Realization real = sample_realization(g, real_seed, {Purpose::Realization, 0, 0, i});
      rep.mu_g.push_back(mu(g, real));
      std::vector<LevelTrace> trace;
      const Matching z = ctx.find_matching(params.depth, ctx.crucial().project(real),
                                           VimRun{vim_seed, i}, &trace);
      bool z_ok = is_matching(g, z.edges);
      for (EdgeId e : z.edges) z_ok = z_ok && cls.is_crucial(e) && real.present[e];
      z_bad += !z_ok;
      for (const LevelTrace& t : trace) identity_bad += t.d_after != t.d_before + 2 * t.independent;
      rep.z_sizes.push_back(z.size());

      const FractionalAssignment x = build_x(g, q, z, real, cls, f, rep.matched_prob, dist);
      const FractionalAssignment y = build_y(g, x, eps);
      for (EdgeId e : x.support()) support_bad += !(q.member[e] && real.present[e]);
      for (EdgeId e : x.support()) {
        if (!cls.is_crucial(e)) continue;
        for (VertexId w : {g.edge(e).u, g.edge(e).v})
          for (EdgeId o : x.support())
            if (o != e && (g.edge(o).u == w || g.edge(o).v == w)) ++exclusive_bad;
      }
      for (VertexId v = 0; v < g.n(); ++v) xv[v].add(x.vertex_sum[v]);
      if (max_prob <= 1.0 - eps * eps) {
        ++cap_runs;
        cap_bad += x.max_vertex_sum() > x_cap;
      }
      const BlossomReport yb = check_blossom(g, y, blossom_size);
      x_blossom_bad += !check_blossom(g, x, blossom_size).ok();

      CertificateRun cr;
      cr.x_size = x.total();
      cr.y_size = y.total();
      for (EdgeId e : x.support())
        if (cls.is_crucial(e)) cr.x_crucial += x.values[e];
      cr.z_size = z.size();
      cr.mu_q = realize_and_match_q(g, q, real).mu;
      rep.mu_q.push_back(cr.mu_q);
      cr.max_y_vertex = y.max_vertex_sum();
      cr.blossom_ok = yb.ok();
      runs.push_back(cr);
    }
    return 0;
  });

  rep.certificate = certificate_size_report(runs, eps);
  const std::string of_runs = " of " + std::to_string(config.runs) + " runs";
  add_check(rep, "z_is_matching_of_realized_crucial", z_bad == 0, std::to_string(z_bad) + " bad" + of_runs);
  add_check(rep, "counting_identity", identity_bad == 0, std::to_string(identity_bad) + " bad levels");
  add_check(rep, "x_support_in_realized_q", support_bad == 0, std::to_string(support_bad) + " edges");
  add_check(rep, "x_crucial_exclusivity", exclusive_bad == 0, std::to_string(exclusive_bad) + " clashes");
  add_check(rep, "y_vertex_sums_at_most_1", rep.certificate.y_valid == runs.size(),
            std::to_string(runs.size() - rep.certificate.y_valid) + " bad" + of_runs);
  add_check(rep, "y_blossom_inequalities", rep.certificate.blossom_ok == runs.size(),
            "|U| <= " + std::to_string(blossom_size) + ", " +
                std::to_string(runs.size() - rep.certificate.blossom_ok) + " bad" + of_runs);
  add_check(rep, "x_blossom_inequalities", x_blossom_bad == 0,
            std::to_string(x_blossom_bad) + " bad" + of_runs, true);
  {
    std::size_t bad = 0;
    double worst = 0.0;
    for (const RunningStats& s : xv) {
      const double excess = s.mean() - 1.0 - 3.0 * s.stderr_mean();
      worst = std::max(worst, s.mean());
      bad += excess > 1e-12;
    }
    add_check(rep, "x_vertex_mean_at_most_1", bad == 0,
              std::to_string(bad) + " vertices above 1 + 3se; max mean " + fmt(worst));
  }
  add_check(rep, "x_deterministic_cap", cap_bad == 0,
            std::to_string(cap_bad) + " of " + std::to_string(cap_runs) + " eligible runs", true);
  {
    double fmax = 0.0;
    for (double fv : f.vertex) fmax = std::max(fmax, fv);
    add_check(rep, "f_vertex_sums_at_most_1", fmax <= 1.0, "max f_v = " + fmt(fmax));
  }
  add_check(rep, "rounding_mu_q_vs_y", rep.certificate.rounding_ok == runs.size(),
            std::to_string(rep.certificate.rounding_ok) + of_runs + " with mu(Q) >= (1-eps)|y|", true);
  if (exact) {
    const CrucialSplit split = exact_crucial_split(g, *exact, cls.tau_minus, cls.tau_plus);
    const GammaEstimate& gm = ctx.gamma(params.depth);
    std::size_t bad = 0;
    for (VertexId v = 0; v < g.n(); ++v) {
      const double limit = std::max(split.c[v] - eps * eps, 0.0);
      bad += gm.mean[v] > limit + 3.0 * gm.se[v] + 1e-12;
    }
    add_check(rep, "saturation_cap_vs_oracle", bad == 0,
              std::to_string(bad) + " vertices above max(c_v - eps^2, 0) + 3se", true);
  }
  {
    std::vector<double> a(rep.mu_q.begin(), rep.mu_q.end()), b(rep.mu_g.begin(), rep.mu_g.end());
    std::tie(rep.ratio, rep.ratio_se) = paired_ratio(a, b);
    add_check(rep, "approximation_ratio", true,
              "E[mu(Q)]/E[mu(G)] = " + fmt(rep.ratio) + " +- " + fmt(rep.ratio_se), true);
  }
  if (config.raw_dump) rep.raw_runs = runs;
  return rep;
}

}  // namespace stochmatch
