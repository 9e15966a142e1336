#pragma once

// Experiment orchestration: generators, ratio and concentration estimates,
// independence tests and the end-to-end pipeline.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochmatch/certificate.hpp"
#include "stochmatch/decomposition.hpp"
#include "stochmatch/error.hpp"
#include "stochmatch/graph.hpp"
#include "stochmatch/vim.hpp"

namespace stochmatch {

/// Error raised inside a pipeline stage; the message is prefixed with the stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct GeneratorSpec {
  enum class Family { ErdosRenyi, Clique, Path, BipartiteRandom, TwoFarComponents };
  Family family = Family::ErdosRenyi;
  std::size_t n = 10;        // vertices (per component for two_far_components)
  std::size_t n2 = 0;        // second side for bipartite_random
  double density = 0.5;      // edge probability of the random families
  double p = 0.5;            // edge existence probability (lower end if p_max is set)
  std::optional<double> p_max;

  static Family parse_family(const std::string& name);
  static std::string family_name(Family f);
};

/// Deterministic given the seed. two_far_components is two disjoint paths on
/// n vertices each.
StochasticGraph generate(const GeneratorSpec& spec, std::uint64_t seed);

enum class QBuilder { Algorithm1, BaselineIterative };

struct RatioEstimate {
  double ratio = 0.0;
  double se = 0.0;
  double mean_q = 0.0, se_q = 0.0;  // E[mu(Q realized)]
  double mean_g = 0.0, se_g = 0.0;  // E[mu(G realized)]
  std::size_t outer = 0, inner = 0;
  std::vector<double> per_q_means;  // one per outer seed
  std::vector<double> g_values;
};

/// One Q per outer seed, `inner` evaluation realizations per Q; the
/// denominator uses outer * inner fresh realizations of G.
RatioEstimate estimate_ratio(const StochasticGraph& g, QBuilder builder, std::size_t R,
                             std::size_t outer, std::size_t inner, std::uint64_t seed);

struct ConcentrationRow {
  double fraction = 0.0;
  double t = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
  double sigma = 0.0;
  bool within = true;
  bool out_of_precondition = false;  // opt < 1 or t > opt
};

struct ConcentrationReport {
  double opt_hat = 0.0;
  std::size_t samples = 0;
  std::vector<ConcentrationRow> rows;
  bool ok() const;  // ignores out-of-precondition rows
};

/// Tail of |mu(G) - opt_hat| against exp(-t^2 / (2 opt + 2t/3)), t = fraction * opt_hat.
ConcentrationReport concentration_test(const StochasticGraph& g,
                                       const std::vector<double>& fractions, std::size_t samples,
                                       std::uint64_t seed);

struct PairCovariance {
  VertexId u = kNoVertex, v = kNoVertex;
  std::uint32_t distance = 0;  // kUnreachable if disconnected in C
  double cov = 0.0;
  double sigma = 0.0;
  bool control = false;  // adjacent crucial endpoints
  bool passed = true;    // far: |cov| <= 3 sigma; control: cov > 3 sigma
};

struct IndependenceReport {
  std::size_t samples = 0;
  double lambda = 0.0;
  std::vector<PairCovariance> pairs;
  std::vector<double> match_freq;  // per vertex
  std::string notice;

  std::size_t far_pairs() const;
  bool far_ok() const;
  bool controls_ok() const;
};

/// Runs FindMatching(depth) on `samples` realizations and tests covariance of
/// matched indicators for every pair at crucial distance >= lambda, plus
/// the endpoints of every crucial edge as a negative control.
IndependenceReport independence_test(VimContext& ctx, std::size_t depth, double lambda,
                                     std::size_t samples, std::uint64_t seed,
                                     std::size_t max_pairs = 20000);

struct ExperimentConfig {
  std::optional<std::string> graph_file;
  std::optional<GeneratorSpec> generator;
  double epsilon = 0.3;
  std::uint64_t seed = 1;
  std::size_t q_samples = 20000;  // estimate_q
  std::size_t runs = 200;         // pipeline runs (realizations of G)
  std::size_t gamma_samples = 200;
  bool paper_faithful = false;
  bool force = false;
  bool contract = false;
  bool raw_dump = false;
  // overrides
  std::optional<std::size_t> R, alpha, depth, walk_cap;
  std::optional<double> c_lambda, t0, gamma;

  void validate() const;
};

struct Check {
  std::string name;
  bool passed = true;
  bool informational = false;
  std::string detail;
};

struct ExperimentReport {
  std::size_t n = 0, m = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  bool paper_faithful = false;
  double opt_hat = 0.0, opt_se = 0.0;
  std::optional<double> opt_exact;
  ThresholdChoice thresholds;
  std::size_t crucial = 0, noncrucial = 0, ignored = 0;
  std::size_t delta_C = 0;
  double lambda = 0.0;
  std::size_t R = 0;
  std::size_t q_size = 0, q_max_degree = 0;
  VimParams vim;
  std::vector<double> matched_prob;  // Pr[X_v] at the final depth
  std::vector<std::size_t> z_sizes;  // per run
  std::vector<std::size_t> mu_q, mu_g;  // per run
  CertificateSummary certificate;
  double ratio = 0.0, ratio_se = 0.0;
  std::optional<double> contraction_mu_mean, contraction_mu_se;
  std::size_t contraction_k = 0;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
  std::vector<CertificateRun> raw_runs;                 // filled when raw_dump

  bool ok() const;  // every non-informational check passed
};

ExperimentReport run_pipeline(const ExperimentConfig& config);

/// Ratio of means a/b with its delta-method standard error from paired samples.
std::pair<double, double> paired_ratio(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace stochmatch
