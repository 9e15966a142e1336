#include "stochmatch/decomposition.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

#include "stochmatch/error.hpp"
#include "stochmatch/matching.hpp"
#include "stochmatch/stats.hpp"

namespace stochmatch {

QEstimate estimate_q(const StochasticGraph& g, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("sample count must be positive");
  QEstimate est;
  est.samples = samples;
  est.counts.assign(g.m(), 0);
  RunningStats mu_stats;
  for (std::size_t s = 0; s < samples; ++s) {
    Realization r = sample_realization(g, seed, {Purpose::EstimateQ, 0, 0, s});
    Matching mm = max_matching(g, r);
    for (EdgeId e : mm.edges) ++est.counts[e];
    est.matched_total += mm.size();
    mu_stats.add(static_cast<double>(mm.size()));
  }
  const double S = static_cast<double>(samples);
  est.q_hat.resize(g.m());
  est.q_se.resize(g.m());
  for (EdgeId e = 0; e < g.m(); ++e) {
    est.q_hat[e] = static_cast<double>(est.counts[e]) / S;
    est.q_se[e] = binomial_se(est.q_hat[e], samples);
  }
  est.opt_hat = static_cast<double>(est.matched_total) / S;
  est.opt_se = mu_stats.stderr_mean();
  return est;
}

namespace {

// Produces t_0, t_1, ... on demand. The paper-faithful shape runs in log space.
class ScheduleGenerator {
 public:
  ScheduleGenerator(const ScheduleShape& shape, double epsilon, double p_min)
      : shape_(shape), epsilon_(epsilon) {
    switch (shape.kind) {
      case ScheduleShape::Kind::Geometric:
        if (!(shape.t0 > 0 && shape.t0 < 1 && shape.gamma > 0 && shape.gamma < 1))
          throw InvalidArgument("geometric schedule needs t0, gamma in (0,1)");
        value_ = shape.t0;
        break;
      case ScheduleShape::Kind::Power:
        if (!(shape.t0 > 0 && shape.t0 < 1 && shape.k > 1))
          throw InvalidArgument("power schedule needs t0 in (0,1) and k > 1");
        value_ = shape.t0;
        break;
      case ScheduleShape::Kind::PaperFaithful:
        log_t_ = 50.0 * std::log(epsilon * p_min);
        value_ = std::exp(log_t_);
        break;
      case ScheduleShape::Kind::Explicit:
        if (shape.values.empty()) throw InvalidArgument("explicit schedule is empty");
        for (std::size_t i = 0; i < shape.values.size(); ++i) {
          double v = shape.values[i];
          if (!(v > 0 && v < 1) || (i > 0 && !(v < shape.values[i - 1])))
            throw InvalidArgument("explicit schedule must be strictly decreasing in (0,1)");
        }
        value_ = shape.values[0];
        break;
    }
    check();
  }

  double current() const { return value_; }

  void advance() {
    ++index_;
    switch (shape_.kind) {
      case ScheduleShape::Kind::Geometric:
        value_ *= shape_.gamma;
        break;
      case ScheduleShape::Kind::Power:
        value_ = std::pow(value_, shape_.k);
        break;
      case ScheduleShape::Kind::PaperFaithful: {
        // f(x) = x^(10 g(x)), g(x) = eps^-20 log(1/x)
        const double g = std::pow(epsilon_, -20.0) * (-log_t_);
        log_t_ = 10.0 * g * log_t_;
        value_ = std::exp(log_t_);
        break;
      }
      case ScheduleShape::Kind::Explicit:
        if (index_ >= shape_.values.size())
          throw InvalidArgument("explicit schedule exhausted before a light bucket was found");
        value_ = shape_.values[index_];
        break;
    }
    check();
  }

 private:
  void check() const {
    // Below the smallest normal double the threshold would silently become 0.
    const bool under = shape_.kind == ScheduleShape::Kind::PaperFaithful
                           ? !(log_t_ >= std::log(DBL_MIN))
                           : !(value_ >= DBL_MIN);
    if (under)
      throw ParameterOverflow("threshold t_" + std::to_string(index_) +
                              " underflows double precision (log t = " +
                              std::to_string(shape_.kind == ScheduleShape::Kind::PaperFaithful
                                                 ? log_t_
                                                 : std::log(value_)) +
                              "); use a desk-scale schedule");
  }

  ScheduleShape shape_;
  double epsilon_;
  double value_ = 0.0;
  double log_t_ = 0.0;
  std::size_t index_ = 0;
};

}  // namespace

ThresholdChoice threshold_schedule(std::span<const double> q, double opt, double epsilon,
                                   double p_min, const ScheduleShape& shape) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  ScheduleGenerator gen(shape, epsilon, p_min);
  ThresholdChoice out;
  out.schedule.push_back(gen.current());
  const std::size_t j_bound = static_cast<std::size_t>(std::ceil(1.0 / epsilon)) + 1;
  const double light = epsilon * opt;
  for (std::size_t j = 1;; ++j) {
    gen.advance();
    const double hi = out.schedule.back();
    const double lo = gen.current();
    out.schedule.push_back(lo);
    CompensatedSum mass;
    for (double qe : q)
      if (qe > lo && qe <= hi) mass.add(qe);
    out.bucket_mass.push_back(mass.value());
    if (mass.value() <= light) {
      out.j = j;
      out.tau_plus = hi;
      out.tau_minus = lo;
      break;
    }
    // Buckets are disjoint, so their masses sum to at most opt.
    if (j >= j_bound)
      throw Error("threshold schedule exceeded j <= ceil(1/eps)+1; q does not sum to opt");
  }
  return out;
}

EdgeClassification classify(const StochasticGraph& g, std::span<const double> q, double tau_minus,
                            double tau_plus, double epsilon, const LambdaRule& lambda) {
  validate_thresholds(tau_minus, tau_plus);
  if (q.size() != g.m()) throw InvalidArgument("q must have one entry per edge");
  EdgeClassification cls;
  cls.epsilon = epsilon;
  cls.tau_minus = tau_minus;
  cls.tau_plus = tau_plus;
  cls.labels.resize(g.m());
  cls.c.assign(g.n(), 0.0);
  cls.n.assign(g.n(), 0.0);
  std::vector<std::size_t> deg(g.n(), 0);
  for (EdgeId e = 0; e < g.m(); ++e) {
    cls.labels[e] = label_for(q[e], tau_minus, tau_plus);
    const Edge& ed = g.edge(e);
    if (cls.labels[e] == EdgeLabel::Crucial) {
      cls.crucial.push_back(e);
      cls.c[ed.u] += q[e];
      cls.c[ed.v] += q[e];
      cls.delta_C = std::max({cls.delta_C, ++deg[ed.u], ++deg[ed.v]});
    } else if (cls.labels[e] == EdgeLabel::NonCrucial) {
      cls.n[ed.u] += q[e];
      cls.n[ed.v] += q[e];
    }
  }
  if (lambda.paper_faithful) {
    cls.lambda = cls.delta_C > 1
                     ? std::pow(epsilon, -20.0) * std::log2(static_cast<double>(cls.delta_C))
                     : 0.0;
    if (!std::isfinite(cls.lambda)) throw ParameterOverflow("lambda overflows double precision");
  } else {
    cls.lambda = lambda.c_lambda * std::log2(static_cast<double>(cls.delta_C) + 2.0);
  }
  return cls;
}

std::vector<std::vector<std::uint32_t>> crucial_distances(const StochasticGraph& g,
                                                          const EdgeClassification& cls) {
  std::vector<Edge> edges;
  for (EdgeId e : cls.crucial) edges.push_back(g.edge(e));
  std::vector<std::vector<std::uint32_t>> out(g.n());
  for (VertexId v = 0; v < g.n(); ++v) out[v] = bfs_distances(g.n(), edges, v);
  return out;
}

}  // namespace stochmatch
