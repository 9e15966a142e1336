#include <doctest.h>

#include <cmath>

#include "stochmatch/decomposition.hpp"
#include "stochmatch/error.hpp"
#include "stochmatch/harness.hpp"
#include "stochmatch/oracle.hpp"
#include "stochmatch/report.hpp"
#include "stochmatch/stats.hpp"

using namespace stochmatch;
using nlohmann::json;

namespace {

GeneratorSpec spec(GeneratorSpec::Family f, std::size_t n, double p, double density = 0.5) {
  GeneratorSpec s;
  s.family = f;
  s.n = n;
  s.p = p;
  s.density = density;
  return s;
}

ExperimentConfig small_config(GeneratorSpec g) {
  ExperimentConfig c;
  c.generator = g;
  c.q_samples = 5000;
  c.runs = 60;
  c.gamma_samples = 60;
  c.raw_dump = true;
  return c;
}

const Check* find_check(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("generators") {
  using F = GeneratorSpec::Family;
  auto k4 = generate(spec(F::Clique, 4, 1.0), 1);
  CHECK(k4.m() == 6);
  for (EdgeId e = 0; e < 6; ++e) CHECK(k4.edge(e).p == 1.0);
  auto path = generate(spec(F::Path, 3, 0.5), 1);
  CHECK(path.m() == 2);
  CHECK(exact_stats(path).opt == 0.75);
  auto a = generate(spec(F::ErdosRenyi, 50, 0.5, 0.2), 9);
  auto b = generate(spec(F::ErdosRenyi, 50, 0.5, 0.2), 9);
  REQUIRE(a.m() == b.m());
  for (EdgeId e = 0; e < a.m(); ++e) {
    CHECK(a.edge(e).u == b.edge(e).u);
    CHECK(a.edge(e).v == b.edge(e).v);
  }
  auto far = generate(spec(F::TwoFarComponents, 4, 0.5), 1);
  CHECK(far.n() == 8);
  CHECK(far.m() == 6);
  auto bip = spec(F::BipartiteRandom, 3, 0.5, 1.0);
  bip.n2 = 4;
  CHECK(generate(bip, 2).m() == 12);
  auto ranged = spec(F::Clique, 6, 0.2);
  ranged.p_max = 0.4;
  auto rg = generate(ranged, 3);
  for (const auto& e : rg.edges()) CHECK((e.p >= 0.2 && e.p <= 0.4));
  CHECK_THROWS_AS(generate(spec(F::Path, 3, 1.5), 1), InvalidArgument);
  CHECK(GeneratorSpec::parse_family("two_far_components") == F::TwoFarComponents);
  CHECK_THROWS_AS(GeneratorSpec::parse_family("grid"), InvalidArgument);
}

TEST_CASE("ratio estimates") {
  SUBCASE("Q contains everything") {
    StochasticGraph tri(3, {{0, 1, 0.5}, {1, 2, 0.5}, {0, 2, 0.5}});
    auto r = estimate_ratio(tri, QBuilder::Algorithm1, 200, 30, 200, 3);
    CHECK(std::fabs(r.ratio - 1.0) <= 3 * r.se);
  }
  SUBCASE("single edge, R = 1") {
    StochasticGraph g(2, {{0, 1, 0.5}});
    auto r = estimate_ratio(g, QBuilder::Algorithm1, 1, 400, 50, 4);
    CHECK(std::fabs(r.ratio - 0.5) <= 3 * r.se);
    CHECK(std::fabs(r.mean_q - 0.25) <= 3 * r.se_q);
  }
  SUBCASE("baseline on a deterministic graph") {
    StochasticGraph g(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
    auto r = estimate_ratio(g, QBuilder::BaselineIterative, 1, 30, 10, 5);
    CHECK(r.ratio == 1.0);
  }
}

TEST_CASE("paired ratio") {
  auto [r, se] = paired_ratio({1, 2, 3}, {2, 4, 6});
  CHECK(r == doctest::Approx(0.5));
  CHECK(se == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("concentration") {
  StochasticGraph det(4, {{0, 1, 1}, {2, 3, 1}});
  auto d = concentration_test(det, {0.25, 0.5}, 1000, 1);
  for (const auto& row : d.rows) CHECK(row.empirical == 0.0);
  CHECK(d.ok());

  StochasticGraph single(2, {{0, 1, 0.5}});
  auto s = concentration_test(single, {0.8}, 2000, 2);
  REQUIRE(s.rows.size() == 1);
  CHECK(s.rows[0].empirical == 1.0);
  CHECK(s.rows[0].out_of_precondition);
  CHECK(s.ok());

  auto er = generate(spec(GeneratorSpec::Family::ErdosRenyi, 40, 0.5, 0.3), 6);
  auto e = concentration_test(er, {0.5}, 2000, 3);
  CHECK_FALSE(e.rows[0].out_of_precondition);
  CHECK(e.rows[0].within);
  const double t = e.rows[0].t;
  CHECK(e.rows[0].bound == doctest::Approx(std::exp(-t * t / (2 * e.opt_hat + 2 * t / 3))));
}

TEST_CASE("independence test") {
  StochasticGraph g(6, {{0, 1, 0.6}, {2, 3, 0.6}, {4, 5, 0.2}});
  std::vector<double> q{0.6, 0.6, 0.05};
  auto cls = classify(g, q, 0.1, 0.5, 0.3);
  VimParams p;
  p.alpha = 1;
  p.depth = 1;
  p.gamma_samples = 100;
  VimContext ctx(g, cls, p, 1);
  auto rep = independence_test(ctx, 1, 2.0, 3000, 7);
  CHECK(rep.far_pairs() > 0);
  CHECK(rep.far_ok());
  CHECK(rep.controls_ok());
  CHECK(rep.match_freq[4] == 0.0);
  for (const auto& pc : rep.pairs)
    if (pc.u == 4 || pc.v == 4 || pc.u == 5 || pc.v == 5) CHECK(pc.cov == 0.0);
  for (const auto& pc : rep.pairs)
    if (pc.control)  // unbiased sample covariance of two identical indicators
      CHECK(pc.cov == doctest::Approx(rep.match_freq[pc.u] * (1 - rep.match_freq[pc.u]) * 3000 / 2999));

  StochasticGraph one(2, {{0, 1, 0.6}});
  auto cls1 = classify(one, std::vector<double>{0.6}, 0.1, 0.5, 0.3);
  VimContext ctx1(one, cls1, p, 1);
  auto none = independence_test(ctx1, 1, 5.0, 200, 7);
  CHECK(none.far_pairs() == 0);
  CHECK_FALSE(none.notice.empty());
}

TEST_CASE("pipeline on the two-edge path") {
  auto cfg = small_config(spec(GeneratorSpec::Family::Path, 3, 0.5));
  auto rep = run_pipeline(cfg);
  for (const auto& c : rep.checks) {
    INFO(c.name << ": " << c.detail);
    if (!c.informational) CHECK(c.passed);
  }
  CHECK(rep.ok());
  REQUIRE(rep.opt_exact);
  CHECK(*rep.opt_exact == 0.75);
  REQUIRE(find_check(rep, "assumption_opt_linear_in_n"));
  CHECK(find_check(rep, "assumption_opt_linear_in_n")->informational);

  // raw dump reproduces the reported means exactly
  RunningStats x;
  for (const auto& r : rep.raw_runs) x.add(r.x_size);
  CHECK(rep.raw_runs.size() == cfg.runs);
  CHECK(x.mean() == rep.certificate.x.mean);

  // identical config gives an identical report apart from timings
  auto again = run_pipeline(cfg);
  CHECK(to_json(rep, false).dump() == to_json(again, false).dump());
}

TEST_CASE("pipeline guards and stage errors") {
  auto cfg = small_config(spec(GeneratorSpec::Family::Path, 3, 0.5));
  cfg.epsilon = 0.1;
  cfg.paper_faithful = true;
  try {
    run_pipeline(cfg);
    FAIL("expected a refusal");
  } catch (const StageError& e) {
    CHECK(e.stage() == "config");
    CHECK(std::string(e.what()).find("depth=") != std::string::npos);
  }
  auto missing = small_config(spec(GeneratorSpec::Family::Path, 3, 0.5));
  missing.generator.reset();
  missing.graph_file = "/nonexistent/graph.txt";
  try {
    run_pipeline(missing);
    FAIL("expected a load error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "load");
  }
}

TEST_CASE("assumption check flags sparse instances") {
  auto cfg = small_config(spec(GeneratorSpec::Family::ErdosRenyi, 40, 0.3, 0.02));
  cfg.runs = 30;
  auto rep = run_pipeline(cfg);
  const Check* c = find_check(rep, "assumption_opt_linear_in_n");
  REQUIRE(c);
  CHECK(c->passed == (rep.opt_hat >= 0.1 * 0.3 * 40));
  if (!c->passed) CHECK(c->detail.find("--contract") != std::string::npos);
}

TEST_CASE("config files") {
  auto doc = json::parse(R"({"generator": {"family": "clique", "n": 5, "p": 0.4},
                             "epsilon": 0.4, "seed": 3, "runs": 50, "mode": "desk",
                             "overrides": {"R": 4, "alpha": 3, "t0": 0.6}})");
  auto c = config_from_json(doc);
  CHECK(c.generator->family == GeneratorSpec::Family::Clique);
  CHECK(c.epsilon == 0.4);
  CHECK(*c.R == 4);
  CHECK(*c.alpha == 3);
  CHECK(*c.t0 == 0.6);
  auto round = config_from_json(to_json(c));
  CHECK(to_json(round) == to_json(c));
  CHECK_THROWS(config_from_json(json::parse(R"({"generator": {"family": "path", "n": 3}, "bogus": 1})")));
  CHECK_THROWS(config_from_json(json::parse(R"({"graph_file": "a", "mode": "fast"})")));
}

TEST_CASE("csv flattening") {
  auto csv = json_to_csv(json::parse(R"({"a": 1, "b": {"c": [true, "x,y"]}})"));
  CHECK(csv.find("a,1") != std::string::npos);
  CHECK(csv.find("b.c.0,true") != std::string::npos);
  CHECK(csv.find("b.c.1,\"x,y\"") != std::string::npos);
}
