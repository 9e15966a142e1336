// Command-line front end for the stochastic matching sparsifier toolkit.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "stochmatch/certificate.hpp"
#include "stochmatch/decomposition.hpp"
#include "stochmatch/harness.hpp"
#include "stochmatch/oracle.hpp"
#include "stochmatch/random.hpp"
#include "stochmatch/reduction.hpp"
#include "stochmatch/report.hpp"
#include "stochmatch/sparsifier.hpp"
#include "stochmatch/stats.hpp"
#include "stochmatch/vim.hpp"

using namespace stochmatch;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  double epsilon = 0.3;
  std::optional<std::size_t> samples;
  std::string out = "json";
  bool force = false;
  bool paper = false;
};

// Pass/fail state of the current command; informational results never fail.
struct Outcome {
  bool ok = true;
  void require(bool c) { ok = ok && c; }
};

void emit(const Globals& g, const json& doc) {
  if (g.out == "csv")
    std::cout << json_to_csv(doc);
  else
    std::cout << doc.dump(2) << '\n';
}

json checks_json(const std::vector<Check>& checks) {
  json a = json::array();
  for (const Check& c : checks)
    a.push_back({{"name", c.name}, {"passed", c.passed}, {"informational", c.informational},
                 {"detail", c.detail}});
  return a;
}

std::string labels_string(const std::vector<EdgeLabel>& labels) {
  std::string s;
  for (auto l : labels) s += l == EdgeLabel::Crucial ? 'C' : l == EdgeLabel::NonCrucial ? 'N' : '-';
  return s;
}

ScheduleShape make_shape(bool paper, const std::string& kind, double t0, double gamma, double k,
                         const std::vector<double>& values) {
  if (paper) return ScheduleShape::paper_faithful();
  if (kind == "geometric") return ScheduleShape::geometric(t0, gamma);
  if (kind == "power") return ScheduleShape::power(t0, k);
  if (kind == "explicit") return ScheduleShape::explicit_values(values);
  if (kind == "paper") return ScheduleShape::paper_faithful();
  throw InvalidArgument("unknown schedule '" + kind + "'");
}

struct Decomposed {
  QEstimate qe;
  ThresholdChoice thresholds;
  EdgeClassification cls;
};

Decomposed decompose(const StochasticGraph& g, const Globals& gl, std::size_t q_samples,
                     const ScheduleShape& shape, double c_lambda) {
  Decomposed d;
  d.qe = estimate_q(g, q_samples, hash_combine(gl.seed, 11));
  d.thresholds = threshold_schedule(d.qe.q_hat, d.qe.opt_hat, gl.epsilon, g.p_min(), shape);
  LambdaRule rule{c_lambda, gl.paper};
  d.cls = classify(g, d.qe.q_hat, d.thresholds.tau_minus, d.thresholds.tau_plus, gl.epsilon, rule);
  return d;
}

VimParams make_vim(const Globals& gl, std::optional<std::size_t> alpha, std::optional<std::size_t> depth,
                   std::optional<std::size_t> walk_cap, std::size_t gamma_samples) {
  VimParams p = gl.paper ? VimParams::paper_faithful(gl.epsilon, gl.force) : VimParams::desk(gl.epsilon);
  if (alpha) p.alpha = *alpha;
  if (depth) p.depth = *depth;
  if (walk_cap) p.walk_cap = *walk_cap;
  p.gamma_samples = gamma_samples;
  p.validate();
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic matching sparsifiers: generation, oracles, Algorithm 1, certificates"};
  app.require_subcommand(1);
  Globals gl;
  app.add_option("--seed", gl.seed, "Master seed")->capture_default_str();
  app.add_option("--epsilon", gl.epsilon, "Accuracy parameter in (0,1)")->capture_default_str();
  app.add_option("--samples", gl.samples, "Monte Carlo sample count (meaning depends on command)");
  app.add_option("--out", gl.out, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_flag("--force-paper-constants", gl.force, "Run the asymptotic constants past their size guards");
  app.add_flag("--paper-faithful", gl.paper, "Use the full asymptotic constants instead of desk defaults");

  Outcome outcome;
  std::function<void()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a stochastic graph");
  GeneratorSpec spec;
  std::string family = "erdos_renyi", gen_out;
  std::optional<double> p_max;
  gen->add_option("--family", family, "erdos_renyi|clique|path|bipartite_random|two_far_components")->capture_default_str();
  gen->add_option("--n", spec.n, "Vertices (per component for two_far_components)")->capture_default_str();
  gen->add_option("--n2", spec.n2, "Second side size for bipartite_random");
  gen->add_option("--density", spec.density, "Edge density of random families")->capture_default_str();
  gen->add_option("--p", spec.p, "Edge probability (lower end with --p-max)")->capture_default_str();
  gen->add_option("--p-max", p_max, "Upper end of a uniform probability range");
  gen->add_option("--output,-o", gen_out, "Write to file instead of stdout");
  gen->callback([&] {
    action = [&] {
      spec.family = GeneratorSpec::parse_family(family);
      spec.p_max = p_max;
      const StochasticGraph g = generate(spec, gl.seed);
      if (gen_out.empty()) {
        write_graph(std::cout, g);
      } else {
        std::ofstream f(gen_out);
        if (!f) throw Error("cannot write " + gen_out);
        write_graph(f, g);
      }
    };
  });

  std::string graph_file;
  auto add_graph = [&](CLI::App* sub) { sub->add_option("--graph", graph_file, "Graph file")->required(); };

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact q_e and opt by enumerating all realizations");
  add_graph(orc);
  std::optional<double> o_tm, o_tp;
  std::size_t o_cap = kDefaultOracleEdgeCap;
  orc->add_option("--tau-minus", o_tm, "Also report the exact crucial split");
  orc->add_option("--tau-plus", o_tp);
  orc->add_option("--max-edges", o_cap, "Enumeration cap")->capture_default_str();
  orc->callback([&] {
    action = [&] {
      const StochasticGraph g = read_graph_file(graph_file);
      const ExactStats st = exact_stats(g, o_cap);
      json j{{"opt", st.opt}, {"q", st.q}, {"matched_prob", st.matched_prob}};
      if (o_tm || o_tp) {
        if (!o_tm || !o_tp) throw InvalidArgument("--tau-minus and --tau-plus go together");
        const CrucialSplit sp = exact_crucial_split(g, st, *o_tm, *o_tp);
        j["labels"] = labels_string(sp.labels);
        j["c"] = sp.c;
        j["n"] = sp.n;
      }
      emit(gl, j);
    };
  });

  // decompose
  auto* dec = app.add_subcommand("decompose", "Estimate q, pick thresholds, classify edges");
  add_graph(dec);
  std::string sched = "geometric";
  double t0 = 0.5, gamma = 0.5, power_k = 2.0, c_lambda = 2.0;
  std::vector<double> sched_values;
  dec->add_option("--schedule", sched, "geometric|power|explicit|paper")->capture_default_str();
  dec->add_option("--t0", t0)->capture_default_str();
  dec->add_option("--gamma", gamma)->capture_default_str();
  dec->add_option("--power", power_k)->capture_default_str();
  dec->add_option("--values", sched_values, "Explicit threshold values")->delimiter(',');
  dec->add_option("--c-lambda", c_lambda)->capture_default_str();
  dec->callback([&] {
    action = [&] {
      const StochasticGraph g = read_graph_file(graph_file);
      const Decomposed d = decompose(g, gl, gl.samples.value_or(20000),
                                     make_shape(gl.paper, sched, t0, gamma, power_k, sched_values), c_lambda);
      std::uint64_t total = 0;
      for (auto c : d.qe.counts) total += c;
      double kept = 0;
      for (EdgeId e = 0; e < g.m(); ++e)
        if (d.cls.labels[e] != EdgeLabel::Ignored) kept += d.qe.q_hat[e];
      const std::size_t jb = static_cast<std::size_t>(std::ceil(1.0 / gl.epsilon * (1.0 - 1e-12))) + 1;
      std::vector<Check> checks{
          {"sum_q_hat_equals_opt_hat", total == d.qe.matched_total, false, ""},
          {"threshold_index_bound", d.thresholds.j <= jb, false, "bound " + std::to_string(jb)},
          {"crucial_plus_noncrucial_mass", kept >= (1 - gl.epsilon) * d.qe.opt_hat - 1e-9, false, ""}};
      for (const Check& c : checks) outcome.require(c.passed);
      emit(gl, json{{"opt_hat", d.qe.opt_hat}, {"opt_se", d.qe.opt_se}, {"q_hat", d.qe.q_hat},
                    {"q_se", d.qe.q_se}, {"thresholds", to_json(d.thresholds)},
                    {"labels", labels_string(d.cls.labels)}, {"c", d.cls.c}, {"n", d.cls.n},
                    {"delta_C", d.cls.delta_C}, {"lambda", d.cls.lambda}, {"checks", checks_json(checks)}});
    };
  });

  // sparsify
  auto* spa = app.add_subcommand("sparsify", "Build Q by Algorithm 1 (or the iterative baseline)");
  add_graph(spa);
  std::optional<std::size_t> R;
  std::optional<double> s_tm;
  std::string builder = "algorithm1";
  spa->add_option("--R", R, "Number of sampled realizations");
  spa->add_option("--tau-minus", s_tm, "Derive R = ceil(1/(2 tau_minus))");
  spa->add_option("--baseline", builder, "Q builder: algorithm1 or iterative")
      ->check(CLI::IsMember({"algorithm1", "iterative"}));
  spa->callback([&] {
    action = [&] {
      const StochasticGraph g = read_graph_file(graph_file);
      std::size_t r;
      if (R)
        r = *R;
      else if (s_tm)
        r = default_R(*s_tm);
      else
        r = default_R(decompose(g, gl, 20000, ScheduleShape::geometric(0.5, 0.5), 2.0).thresholds.tau_minus);
      const bool baseline = builder == "iterative";
      const SubgraphQ q = baseline ? build_baseline_iterative(g, r) : build_q(g, r, hash_combine(gl.seed, 13));
      const std::size_t evals = gl.samples.value_or(200);
      const RatioEstimate est = estimate_ratio(g, baseline ? QBuilder::BaselineIterative : QBuilder::Algorithm1,
                                               r, 1, evals, gl.seed);
      json edges = json::array();
      for (EdgeId e : q.member_edges()) edges.push_back({{"id", e}, {"u", g.edge(e).u}, {"v", g.edge(e).v}, {"t", q.t[e]}});
      const std::size_t deg = q.max_degree(g);
      outcome.require(baseline || deg <= r);
      emit(gl, json{{"R", r}, {"size", q.size()}, {"max_degree", deg}, {"degree_ok", deg <= r},
                    {"edges", edges}, {"ratio", est.ratio}, {"ratio_se", est.se},
                    {"mean_mu_q", est.mean_q}, {"mean_mu_g", est.mean_g}});
    };
  });

  // contract
  auto* con = app.add_subcommand("contract", "Random bucket contraction");
  add_graph(con);
  double opt_est = 0;
  std::string merged_out;
  con->add_option("--opt", opt_est, "opt estimate")->required();
  con->add_option("--merged-out", merged_out, "Also write the merged graph to this file");
  con->callback([&] {
    action = [&] {
      const StochasticGraph g = read_graph_file(graph_file);
      const Contraction c = contract(g, gl.epsilon, opt_est, gl.seed);
      std::ostringstream gs;
      write_graph(gs, c.merged);
      if (!merged_out.empty()) {
        std::ofstream f(merged_out);
        if (!f) throw Error("cannot write " + merged_out);
        f << gs.str();
      }
      emit(gl, json{{"k", c.k}, {"bucket", c.bucket}, {"merged_graph", gs.str()}, {"origin", c.origin},
                    {"precondition_opt_gt_3_eps3", reduction_precondition(opt_est, gl.epsilon)}});
    };
  });

  // vim
  auto* vim = app.add_subcommand("vim", "Vertex-independent matching of the crucial graph");
  add_graph(vim);
  std::optional<std::size_t> alpha, depth, walk_cap;
  std::size_t gamma_samples = 200, q_samples = 20000;
  vim->add_option("--alpha", alpha);
  vim->add_option("--depth", depth);
  vim->add_option("--walk-cap", walk_cap);
  vim->add_option("--gamma-samples", gamma_samples)->capture_default_str();
  vim->add_option("--q-samples", q_samples)->capture_default_str();
  vim->callback([&] {
    action = [&] {
      const StochasticGraph g = read_graph_file(graph_file);
      const VimParams params = make_vim(gl, alpha, depth, walk_cap, gamma_samples);
      const Decomposed d = decompose(g, gl, q_samples, make_shape(gl.paper, "geometric", 0.5, 0.5, 2, {}), 2.0);
      VimContext ctx(g, d.cls, params, hash_combine(gl.seed, 17));
      const std::size_t S = gl.samples.value_or(200);
      json sizes = json::array();
      std::size_t bad = 0;
      for (std::size_t r = 0; r <= params.depth; ++r) {
        RunningStats st;
        for (std::size_t s = 0; s < S; ++s) {
          const Realization real = sample_realization(g, hash_combine(gl.seed, 19), {Purpose::Realization, 0, 0, s});
          std::vector<LevelTrace> trace;
          const Matching z = ctx.find_matching(r, ctx.crucial().project(real), VimRun{hash_combine(gl.seed, 23), s}, &trace);
          bool ok = is_matching(g, z.edges);
          for (EdgeId e : z.edges) ok = ok && d.cls.is_crucial(e) && real.present[e];
          for (const LevelTrace& t : trace) ok = ok && t.d_after == t.d_before + 2 * t.independent;
          bad += !ok;
          st.add(static_cast<double>(z.size()));
        }
        sizes.push_back({{"depth", r}, {"mean", st.mean()}, {"se", st.stderr_mean()}});
      }
      outcome.require(bad == 0);
      const Realization real0 = sample_realization(g, hash_combine(gl.seed, 19), {Purpose::Realization, 0, 0, 0});
      const Matching z0 = ctx.find_matching(params.depth, ctx.crucial().project(real0), VimRun{hash_combine(gl.seed, 23), 0});
      const IndependenceReport ind = independence_test(ctx, params.depth, d.cls.lambda, S, gl.seed);
      json pairs = json::array();
      for (const PairCovariance& p : ind.pairs)
        pairs.push_back({{"u", p.u}, {"v", p.v}, {"distance", p.distance == kUnreachable ? json(nullptr) : json(p.distance)},
                         {"cov", p.cov}, {"sigma", p.sigma}, {"control", p.control}, {"passed", p.passed}});
      emit(gl, json{{"params", to_json(params)}, {"crucial_edges", d.cls.crucial.size()}, {"lambda", d.cls.lambda},
                    {"Z_edges", z0.edges}, {"per_vertex_match_freq", ind.match_freq}, {"size_by_depth", sizes},
                    {"validity_failures", bad}, {"independence_pairs", pairs}, {"independence_notice", ind.notice},
                    {"far_pairs_ok", ind.far_ok()}, {"controls_ok", ind.controls_ok()}});
    };
  });

  // certify
  auto* cert = app.add_subcommand("certify", "Fractional matching certificate and f-property checks");
  add_graph(cert);
  cert->callback([&] {
    action = [&] {
      ExperimentConfig cfg;
      cfg.graph_file = graph_file;
      cfg.epsilon = gl.epsilon;
      cfg.seed = gl.seed;
      cfg.runs = gl.samples.value_or(200);
      cfg.paper_faithful = gl.paper;
      cfg.force = gl.force;
      const ExperimentReport rep = run_pipeline(cfg);
      const StochasticGraph g = read_graph_file(graph_file);
      const Decomposed d = decompose(g, gl, cfg.q_samples, make_shape(gl.paper, "geometric", 0.5, 0.5, 2, {}), 2.0);
      std::vector<FValues> batch;
      for (std::size_t b = 0; b < std::min<std::size_t>(cfg.runs, 200); ++b)
        batch.push_back(compute_f(g, build_q(g, rep.R, hash_combine(hash_combine(gl.seed, 37), b)), d.cls, gl.epsilon));
      const FPropertyReport fr = test_f_properties(g, d.cls, gl.epsilon, d.qe.q_hat, d.cls.n, batch, rep.R);
      outcome.require(rep.ok() && fr.vertex_sums_ok);
      json fe = json::array();
      for (const FEdgeCheck& c : fr.edges)
        fe.push_back({{"edge", c.edge}, {"q_hat", c.q}, {"mean_f", c.mean}, {"sigma", c.sigma},
                      {"upper_ok", c.upper_ok}, {"lower_ok", c.lower_ok}});
      emit(gl, json{{"mean_x", rep.certificate.x.mean}, {"mean_y", rep.certificate.y.mean},
                    {"mean_mu_Q", rep.certificate.mu_q.mean},
                    {"blossom_ok", rep.certificate.blossom_ok == rep.certificate.runs},
                    {"f_checks", {{"vertex_sums_ok", fr.vertex_sums_ok}, {"worst_vertex_sum", fr.worst_vertex_sum},
                                  {"edges_ok_vs_q_hat", fr.ok()}, {"edges", fe}}},
                    {"checks", checks_json(rep.checks)}});
    };
  });

  // experiment
  auto* exp = app.add_subcommand("experiment", "End-to-end pipeline from a JSON config or flags");
  std::string config_file, exp_graph, exp_family;
  std::size_t exp_n = 0;
  double exp_p = 0.5, exp_density = 0.5;
  bool contract_flag = false, raw = false, no_timings = false;
  exp->add_option("--config", config_file, "JSON config file");
  exp->add_option("--graph", exp_graph, "Graph file (instead of a config)");
  exp->add_option("--family", exp_family, "Generator family (instead of a config)");
  exp->add_option("--n", exp_n);
  exp->add_option("--p", exp_p);
  exp->add_option("--density", exp_density);
  exp->add_flag("--contract", contract_flag, "Also run the vertex reduction stage");
  exp->add_flag("--raw-dump", raw, "Include per-run values");
  exp->add_flag("--no-timings", no_timings, "Omit wall-clock timings");
  exp->callback([&] {
    action = [&] {
      ExperimentConfig cfg;
      if (!config_file.empty()) {
        std::ifstream f(config_file);
        if (!f) throw Error("cannot read " + config_file);
        json doc;
        try {
          doc = json::parse(f);
        } catch (const json::exception& e) {
          throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = config_from_json(doc);
      } else {
        cfg.epsilon = gl.epsilon;
        cfg.seed = gl.seed;
        cfg.paper_faithful = gl.paper;
        if (!exp_graph.empty()) cfg.graph_file = exp_graph;
        if (!exp_family.empty()) {
          GeneratorSpec gs;
          gs.family = GeneratorSpec::parse_family(exp_family);
          gs.n = exp_n ? exp_n : gs.n;
          gs.p = exp_p;
          gs.density = exp_density;
          cfg.generator = gs;
        }
      }
      // Command-line globals win over the file only where given explicitly.
      if (app.count("--seed")) cfg.seed = gl.seed;
      if (app.count("--epsilon")) cfg.epsilon = gl.epsilon;
      if (gl.samples) cfg.runs = *gl.samples;
      if (gl.paper) cfg.paper_faithful = true;
      cfg.force = cfg.force || gl.force;
      cfg.contract = cfg.contract || contract_flag;
      cfg.raw_dump = cfg.raw_dump || raw;
      const ExperimentReport rep = run_pipeline(cfg);
      outcome.require(rep.ok());
      json j = to_json(rep, !no_timings);
      j["config"] = to_json(cfg);
      emit(gl, j);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 2;
  }
  try {
    if (action) action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return outcome.ok ? 0 : 1;
}
