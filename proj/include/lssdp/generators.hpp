#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lssdp/instance.hpp"

namespace lssdp {

// Simple undirected graph with optional edge weights (1-indexed storage
// is avoided; vertices are 0..nv-1).
struct Graph {
  int nv = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, no duplicates, no loops
  std::vector<double> weights;             // empty means unit weights

  void validate() const;
};

// Binary quadratic relaxation: variable [Y x; x^T 1], diag(Y) = x, corner
// fixed to 1, X >= 0.
LssdpInstance gen_biq(const Mat& q, const Vec& c, const std::string& name = "biq");

// Extended version with the three pairwise valid inequalities for each
// 1 <= i < j <= n-1 encoded as interval rows of A_I.
LssdpInstance gen_biq_ext(const Mat& q, const Vec& c, const std::string& name = "biq-ext");

// theta_+ relaxation of the maximum stable set problem.
LssdpInstance gen_theta_plus(const Graph& g, const std::string& name = "theta");

// QAP relaxation over n^2 x n^2 matrices. One redundant equality row is
// dropped so that A_E stays surjective (see gen_qap_redundant_row).
LssdpInstance gen_qap(const Mat& a, const Mat& b, const std::string& name = "qap");

// Clustering relaxation: Xe = e, <I,X> = K, X >= 0, G = W.
LssdpInstance gen_rcp(const Mat& affinity, int k_clusters, const std::string& name = "rcp");

// Gaussian-kernel affinity from row vectors, bandwidth = median pairwise
// distance. Convenience for building clustering instances.
Mat gaussian_affinity(const Mat& points);

// Frequency assignment relaxation: diag(X) = e, box bounds -1/(k-1) on
// edges (lower) and on the subset u_set (upper).
LssdpInstance gen_fap(const Graph& g, double k_param,
                      const std::vector<std::pair<int, int>>& u_set,
                      const std::string& name = "fap");

// Random strictly feasible instance with orthonormalized equality rows and
// b_E = A_E(X0) for a positive definite X0 strictly inside P.
LssdpInstance gen_random(int n, int m_e, int m_i, std::uint64_t seed,
                         const std::string& name = "random");

// Deterministic pseudo-random fixtures for the desk suite.
Mat random_sym(int n, std::uint64_t seed, double scale = 1.0);
Graph random_graph(int nv, double edge_prob, std::uint64_t seed);

// The seeded 21-instance benchmark suite spanning all six families.
std::vector<LssdpInstance> desk_suite();

}  // namespace lssdp
