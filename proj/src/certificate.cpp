#include "stochmatch/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochmatch/error.hpp"
#include "stochmatch/stats.hpp"

namespace stochmatch {

FValues compute_f(const StochasticGraph& g, const SubgraphQ& q, const EdgeClassification& cls,
                  double epsilon) {
  if (q.t.size() != g.m() || cls.labels.size() != g.m())
    throw InvalidArgument("sparsifier or classification does not match graph");
  if (q.R == 0) throw InvalidArgument("R must be positive");
  FValues f;
  f.edge.assign(g.m(), 0.0);
  f.vertex.assign(g.n(), 0.0);
  const double R = static_cast<double>(q.R);
  const double cap = 1.0 / std::sqrt(epsilon * R);
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (!cls.is_noncrucial(e)) continue;
    const double ratio = static_cast<double>(q.t[e]) / R;
    if (ratio <= cap) f.edge[e] = ratio;
  }
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (f.edge[e] == 0.0) continue;
    f.vertex[g.edge(e).u] += f.edge[e];
    f.vertex[g.edge(e).v] += f.edge[e];
  }
  return f;
}

FractionalAssignment FractionalAssignment::from_values(const StochasticGraph& g,
                                                       std::vector<double> values) {
  if (values.size() != g.m()) throw InvalidArgument("assignment size does not match graph");
  FractionalAssignment a;
  a.values = std::move(values);
  a.vertex_sum.assign(g.n(), 0.0);
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (a.values[e] < 0.0) throw InvalidArgument("fractional values must be non-negative");
    a.vertex_sum[g.edge(e).u] += a.values[e];
    a.vertex_sum[g.edge(e).v] += a.values[e];
  }
  return a;
}

double FractionalAssignment::total() const { return compensated_total(values); }

double FractionalAssignment::max_vertex_sum() const {
  return vertex_sum.empty() ? 0.0 : *std::max_element(vertex_sum.begin(), vertex_sum.end());
}

std::vector<EdgeId> FractionalAssignment::support() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < values.size(); ++e)
    if (values[e] > 0.0) out.push_back(e);
  return out;
}

FractionalAssignment build_x(const StochasticGraph& g, const SubgraphQ& q, const Matching& z,
                             const Realization& realization, const EdgeClassification& cls,
                             const FValues& f, std::span<const double> matched_prob,
                             const std::vector<std::vector<std::uint32_t>>& crucial_dist,
                             const XOptions& options) {
  if (matched_prob.size() != g.n() || z.mate.size() != g.n() ||
      realization.present.size() != g.m())
    throw InvalidArgument("build_x inputs do not match graph");
  std::vector<double> x(g.m(), 0.0);
  for (EdgeId e : z.edges)
    if (cls.is_crucial(e) && q.member[e]) x[e] = 1.0;
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (!cls.is_noncrucial(e) || f.edge[e] == 0.0 || !realization.present[e]) continue;
    const Edge& ed = g.edge(e);
    if (z.covers(ed.u) || z.covers(ed.v)) continue;
    const std::uint32_t d = crucial_dist[ed.u][ed.v];
    if (d != kUnreachable && static_cast<double>(d) < cls.lambda) continue;
    const double su = 1.0 - matched_prob[ed.u];
    const double sv = 1.0 - matched_prob[ed.v];
    if (su <= options.division_floor || sv <= options.division_floor)
      throw DivisionGuard("1 - Pr[X_v] reached the division floor at edge " + std::to_string(e));
    x[e] = f.edge[e] / (ed.p * su * sv);
  }
  return FractionalAssignment::from_values(g, std::move(x));
}

FractionalAssignment build_y(const StochasticGraph& g, const FractionalAssignment& x,
                             double epsilon) {
  std::vector<double> y(g.m(), 0.0);
  const double limit = 1.0 + epsilon;
  for (EdgeId e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    if (x.values[e] > 0.0 && x.vertex_sum[ed.u] <= limit && x.vertex_sum[ed.v] <= limit)
      y[e] = x.values[e] / limit;
  }
  return FractionalAssignment::from_values(g, std::move(y));
}

namespace {

// ESU enumeration of connected vertex sets of the support graph.
class BlossomScan {
 public:
  BlossomScan(const StochasticGraph& g, const FractionalAssignment& a, std::size_t max_size,
              double tol, std::size_t max_subsets, BlossomReport& rep)
      : g_(g), a_(a), k_(max_size), tol_(tol), max_subsets_(max_subsets), rep_(rep),
        adj_(g.n()), in_set_(g.n(), 0) {
    for (EdgeId e : a.support()) {
      adj_[g.edge(e).u].push_back({g.edge(e).v, e});
      adj_[g.edge(e).v].push_back({g.edge(e).u, e});
    }
  }

  void run() {
    for (VertexId v = 0; v < g_.n(); ++v) {
      if (adj_[v].empty()) continue;
      std::vector<VertexId> ext;
      for (auto [w, e] : adj_[v])
        if (w > v) ext.push_back(w);
      std::sort(ext.begin(), ext.end());
      ext.erase(std::unique(ext.begin(), ext.end()), ext.end());
      set_.push_back(v);
      in_set_[v] = 1;
      extend(ext, v, 0.0);
      in_set_[v] = 0;
      set_.pop_back();
    }
  }

 private:
  void visit(double value) {
    if (++rep_.subsets_checked > max_subsets_)
      throw Error("blossom check exceeded " + std::to_string(max_subsets_) + " subsets");
    const double limit = static_cast<double>(set_.size() / 2);
    rep_.worst_excess = std::max(rep_.worst_excess, value - limit);
    if (value > limit + tol_) {
      ++rep_.violations;
      if (rep_.examples.size() < 10) {
        std::vector<VertexId> s = set_;
        std::sort(s.begin(), s.end());
        rep_.examples.push_back({std::move(s), value});
      }
    }
  }

  double gain(VertexId w) const {
    double add = 0.0;
    for (auto [u, e] : adj_[w])
      if (in_set_[u]) add += a_.values[e];
    return add;
  }

  void extend(std::vector<VertexId> ext, VertexId root, double value) {
    if (set_.size() >= 2) visit(value);
    if (set_.size() == k_) return;
    while (!ext.empty()) {
      const VertexId w = ext.back();
      ext.pop_back();
      // Exclusive neighbors of w: above root, not in or next to the current set.
      std::vector<VertexId> next = ext;
      for (auto [u, e] : adj_[w]) {
        if (u <= root || in_set_[u]) continue;
        if (std::find(next.begin(), next.end(), u) != next.end()) continue;
        if (touches_set(u)) continue;
        next.push_back(u);
      }
      const double v2 = value + gain(w);
      set_.push_back(w);
      in_set_[w] = 1;
      extend(std::move(next), root, v2);
      in_set_[w] = 0;
      set_.pop_back();
    }
  }

  bool touches_set(VertexId u) const {
    for (auto [w, e] : adj_[u])
      if (in_set_[w]) return true;
    return false;
  }

  const StochasticGraph& g_;
  const FractionalAssignment& a_;
  std::size_t k_;
  double tol_;
  std::size_t max_subsets_;
  BlossomReport& rep_;
  std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj_;
  std::vector<VertexId> set_;
  std::vector<char> in_set_;
};

}  // namespace

BlossomReport check_blossom(const StochasticGraph& g, const FractionalAssignment& a,
                            std::size_t max_size, double tolerance, std::size_t max_subsets) {
  if (max_size > kMaxBlossomSetSize)
    throw InvalidArgument("blossom set size above " + std::to_string(kMaxBlossomSetSize));
  if (a.values.size() != g.m()) throw InvalidArgument("assignment size does not match graph");
  BlossomReport rep;
  rep.max_size = max_size;
  if (max_size < 2) return rep;
  BlossomScan(g, a, max_size, tolerance, max_subsets, rep).run();
  return rep;
}

CertificateSummary certificate_size_report(std::span<const CertificateRun> runs, double epsilon) {
  RunningStats x, y, xc, z, mu;
  CertificateSummary s;
  s.runs = runs.size();
  for (const CertificateRun& r : runs) {
    x.add(r.x_size);
    y.add(r.y_size);
    xc.add(r.x_crucial);
    z.add(static_cast<double>(r.z_size));
    mu.add(static_cast<double>(r.mu_q));
    const double m = static_cast<double>(r.mu_q);
    s.rounding_ok += m >= (1.0 - epsilon) * r.y_size - 1e-9;
    s.rounding_strict_ok += m >= r.y_size / (1.0 + epsilon) - 1e-9;
    s.y_valid += r.max_y_vertex <= 1.0 + 1e-12;
    s.blossom_ok += r.blossom_ok;
  }
  auto ci = [](const RunningStats& st) { return MeanCI{st.mean(), st.stderr_mean(), st.count()}; };
  s.x = ci(x);
  s.y = ci(y);
  s.x_crucial = ci(xc);
  s.z = ci(z);
  s.mu_q = ci(mu);
  return s;
}

bool FPropertyReport::ok() const {
  if (!vertex_sums_ok) return false;
  for (const FEdgeCheck& c : edges)
    if (!c.upper_ok || !c.lower_ok) return false;
  return true;
}

FPropertyReport test_f_properties(const StochasticGraph& g, const EdgeClassification& cls,
                                  double epsilon, std::span<const double> q_ref,
                                  std::span<const double> n_ref, std::span<const FValues> batch,
                                  std::size_t R) {
  if (q_ref.size() != g.m() || n_ref.size() != g.n())
    throw InvalidArgument("reference values do not match graph");
  FPropertyReport rep;
  rep.runs = batch.size();
  const double N = static_cast<double>(batch.size());
  std::vector<RunningStats> per_edge(g.m());
  std::vector<std::size_t> tail_hits(g.n(), 0);
  for (const FValues& f : batch) {
    for (EdgeId e = 0; e < g.m(); ++e) per_edge[e].add(f.edge[e]);
    for (VertexId v = 0; v < g.n(); ++v) {
      rep.worst_vertex_sum = std::max(rep.worst_vertex_sum, f.vertex[v]);
      if (f.vertex[v] > 1.0) rep.vertex_sums_ok = false;
      if (f.vertex[v] > n_ref[v] + 0.1 * epsilon) ++tail_hits[v];
    }
  }
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (!cls.is_noncrucial(e)) continue;
    FEdgeCheck c;
    c.edge = e;
    c.q = q_ref[e];
    c.mean = per_edge[e].mean();
    const double model_var = q_ref[e] * (1.0 - q_ref[e]) / static_cast<double>(R);
    c.sigma = std::sqrt(std::max(per_edge[e].variance(), model_var) / N);
    c.upper_ok = c.mean <= c.q + 3.0 * c.sigma + 1e-12;
    c.lower_ok = c.mean >= (1.0 - epsilon) * c.q - 3.0 * c.sigma - 1e-12;
    rep.edges.push_back(c);
  }
  const double bound = std::pow(epsilon * g.p_min(), 10.0);
  for (VertexId v = 0; v < g.n(); ++v) {
    FTailCheck t;
    t.vertex = v;
    t.frequency = N > 0 ? static_cast<double>(tail_hits[v]) / N : 0.0;
    t.bound = bound;
    t.within = t.frequency <= bound + 3.0 * binomial_se(bound, batch.size());
    rep.tails.push_back(t);
  }
  return rep;
}

}  // namespace stochmatch
