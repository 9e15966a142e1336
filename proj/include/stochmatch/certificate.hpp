#pragma once

// Expected fractional matching certificate built from a sparsifier Q, the
// vertex-independent matching Z and the f-values of non-crucial edges.

#include <cstddef>
#include <span>
#include <vector>

#include "stochmatch/decomposition.hpp"
#include "stochmatch/graph.hpp"
#include "stochmatch/matching.hpp"
#include "stochmatch/sparsifier.hpp"

namespace stochmatch {

struct FValues {
  std::vector<double> edge;    // f_e
  std::vector<double> vertex;  // sum of f over incident non-crucial edges
};

/// f_e = t_e / R for non-crucial edges with t_e / R <= 1 / sqrt(eps R); 0 otherwise.
FValues compute_f(const StochasticGraph& g, const SubgraphQ& q, const EdgeClassification& cls,
                  double epsilon);

struct FractionalAssignment {
  std::vector<double> values;      // per edge
  std::vector<double> vertex_sum;  // per vertex

  static FractionalAssignment from_values(const StochasticGraph& g, std::vector<double> values);
  double total() const;
  double max_vertex_sum() const;
  std::vector<EdgeId> support() const;
};

struct XOptions {
  double division_floor = 1e-6;
};

/// Crucial edges: 1 iff in Z and in Q. Non-crucial {u,v}: f_e / (p_e (1-Pu)(1-Pv))
/// when realized, u and v are unmatched by Z and d_C(u,v) >= lambda. Ignored: 0.
/// Throws DivisionGuard when a needed 1 - P_w falls to the floor.
FractionalAssignment build_x(const StochasticGraph& g, const SubgraphQ& q, const Matching& z,
                             const Realization& realization, const EdgeClassification& cls,
                             const FValues& f, std::span<const double> matched_prob,
                             const std::vector<std::vector<std::uint32_t>>& crucial_dist,
                             const XOptions& options = {});

/// y_e = x_e / (1+eps) if both endpoint sums are at most 1+eps, else 0.
FractionalAssignment build_y(const StochasticGraph& g, const FractionalAssignment& x,
                             double epsilon);

inline constexpr std::size_t kMaxBlossomSetSize = 9;

struct BlossomViolation {
  std::vector<VertexId> set;
  double value = 0.0;
};

struct BlossomReport {
  std::size_t max_size = 0;
  std::size_t subsets_checked = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  // max of x(U) - floor(|U|/2) over checked sets
  std::vector<BlossomViolation> examples;  // first few

  bool ok() const { return violations == 0; }
};

/// Checks x(U) <= floor(|U|/2) for every vertex set U with 2 <= |U| <= max_size
/// that is connected in the support. Disconnected violators always contain a
/// violating component, so this is exhaustive.
BlossomReport check_blossom(const StochasticGraph& g, const FractionalAssignment& a,
                            std::size_t max_size, double tolerance = 1e-9,
                            std::size_t max_subsets = 50'000'000);

struct CertificateRun {
  double x_size = 0.0;
  double y_size = 0.0;
  double x_crucial = 0.0;
  std::size_t z_size = 0;
  std::size_t mu_q = 0;
  double max_y_vertex = 0.0;
  bool blossom_ok = true;
};

struct MeanCI {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

struct CertificateSummary {
  std::size_t runs = 0;
  MeanCI x, y, x_crucial, z, mu_q;
  std::size_t rounding_ok = 0;         // runs with mu(Q) >= (1-eps)|y|
  std::size_t rounding_strict_ok = 0;  // runs with mu(Q) >= |y|/(1+eps)
  std::size_t y_valid = 0;             // runs with max y_v <= 1
  std::size_t blossom_ok = 0;
};

CertificateSummary certificate_size_report(std::span<const CertificateRun> runs, double epsilon);

struct FEdgeCheck {
  EdgeId edge = kNoEdge;
  double q = 0.0;
  double mean = 0.0;
  double sigma = 0.0;
  bool upper_ok = true;
  bool lower_ok = true;
};

struct FTailCheck {
  VertexId vertex = kNoVertex;
  double frequency = 0.0;  // Pr[f_v > n_v + 0.1 eps]
  double bound = 0.0;      // (eps p)^10
  bool within = true;
};

struct FPropertyReport {
  std::size_t runs = 0;
  std::vector<FEdgeCheck> edges;
  std::vector<FTailCheck> tails;  // informational
  bool vertex_sums_ok = true;
  double worst_vertex_sum = 0.0;

  bool ok() const;
};

/// Batch checks of f against reference q: mean f_e within
/// [(1-eps) q_e - 3 sigma, q_e + 3 sigma] for non-crucial edges and
/// per-run vertex sums at most 1. sigma is the larger of the empirical
/// standard error and the binomial one implied by q_e and R.
FPropertyReport test_f_properties(const StochasticGraph& g, const EdgeClassification& cls,
                                  double epsilon, std::span<const double> q_ref,
                                  std::span<const double> n_ref, std::span<const FValues> batch,
                                  std::size_t R);

}  // namespace stochmatch
