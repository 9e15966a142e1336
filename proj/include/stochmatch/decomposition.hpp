#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stochmatch/graph.hpp"
#include "stochmatch/thresholds.hpp"

namespace stochmatch {

/// Monte Carlo estimate of q_e = Pr[e in MM(G)] and opt = E[mu(G)].
struct QEstimate {
  std::size_t samples = 0;
  std::vector<std::uint64_t> counts;  // occurrences of e in the sampled matchings
  std::uint64_t matched_total = 0;    // sum of mu over samples; equals sum of counts
  std::vector<double> q_hat;
  std::vector<double> q_se;
  double opt_hat = 0.0;
  double opt_se = 0.0;
};

QEstimate estimate_q(const StochasticGraph& g, std::size_t samples, std::uint64_t seed);

/// Shape of the strictly decreasing threshold sequence t_0 > t_1 > ...
struct ScheduleShape {
  enum class Kind {
    Geometric,      // t_i = t0 * gamma^i
    Power,          // t_i = t_{i-1}^k
    PaperFaithful,  // t0 = (eps p)^50, t_i = t_{i-1}^(10 g), g = eps^-20 log(1/t_{i-1})
    Explicit,       // caller-provided values
  };
  Kind kind = Kind::Geometric;
  double t0 = 0.5;
  double gamma = 0.5;
  double k = 2.0;
  std::vector<double> values;

  static ScheduleShape geometric(double t0, double gamma) { return {Kind::Geometric, t0, gamma, 2.0, {}}; }
  static ScheduleShape power(double t0, double k) { return {Kind::Power, t0, 0.5, k, {}}; }
  static ScheduleShape paper_faithful() { return {Kind::PaperFaithful, 0.0, 0.5, 2.0, {}}; }
  static ScheduleShape explicit_values(std::vector<double> v) {
    return {Kind::Explicit, 0.0, 0.5, 2.0, std::move(v)};
  }
};

struct ThresholdChoice {
  double tau_minus = 0.0;
  double tau_plus = 0.0;
  std::size_t j = 0;
  std::vector<double> schedule;     // t_0 .. t_j
  std::vector<double> bucket_mass;  // q_1 .. q_j, q_i = mass of q in (t_i, t_{i-1}]
};

/// Returns the first j with q_j <= eps * opt and (tau_plus, tau_minus) = (t_{j-1}, t_j).
/// Throws ParameterOverflow when a needed t_i underflows double precision.
ThresholdChoice threshold_schedule(std::span<const double> q, double opt, double epsilon,
                                   double p_min, const ScheduleShape& shape);

struct LambdaRule {
  double c_lambda = 2.0;
  bool paper_faithful = false;  // eps^-20 * log2(Delta_C)
};

struct EdgeClassification {
  double epsilon = 0.0;
  double tau_minus = 0.0;
  double tau_plus = 0.0;
  std::vector<EdgeLabel> labels;
  std::vector<EdgeId> crucial;
  std::size_t delta_C = 0;
  std::vector<double> c;  // per vertex, crucial mass
  std::vector<double> n;  // per vertex, non-crucial mass
  double lambda = 0.0;

  bool is_crucial(EdgeId e) const { return labels[e] == EdgeLabel::Crucial; }
  bool is_noncrucial(EdgeId e) const { return labels[e] == EdgeLabel::NonCrucial; }
};

EdgeClassification classify(const StochasticGraph& g, std::span<const double> q, double tau_minus,
                            double tau_plus, double epsilon, const LambdaRule& lambda = {});

/// Hop distances in the crucial graph from every vertex (kUnreachable if none).
std::vector<std::vector<std::uint32_t>> crucial_distances(const StochasticGraph& g,
                                                          const EdgeClassification& cls);

}  // namespace stochmatch
