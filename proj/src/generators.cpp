#include "lssdp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace lssdp {

void Graph::validate() const {
  require(nv >= 1, "graph: need at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (const auto& [i, j] : edges) {
    require(i >= 0 && j >= 0 && i < nv && j < nv, "graph: vertex out of range");
    require(i != j, "graph: self-loops are not allowed");
    require(i < j, "graph: edges must be stored with i < j");
    require(seen.insert({i, j}).second, "graph: duplicate edge");
  }
  if (!weights.empty())
    require(weights.size() == edges.size(), "graph: weight count mismatch");
}

namespace {

// <E_ii, X> = X_ii
SparseSymMat unit_diag(int n, int i) { return SparseSymMat(n, {{i, i, 1.0}}); }

// row for X_ij (i < j) with coefficient c on the symmetric pair
SparseSymMat offdiag(int n, int i, int j, double c) {
  return SparseSymMat(n, {{i, j, c}});
}

}  // namespace

LssdpInstance gen_biq(const Mat& q, const Vec& c, const std::string& name) {
  const int nb = static_cast<int>(q.rows());  // number of binary variables
  require(q.rows() == q.cols() && is_symmetric(q, 1e-10), "gen_biq: Q must be symmetric");
  require(c.size() == nb, "gen_biq: c length mismatch");
  const int n = nb + 1;

  // objective <C, X> = 1/2 <Q, Y> + <c, x>
  Mat cmat = Mat::Zero(n, n);
  cmat.topLeftCorner(nb, nb) = 0.5 * q;
  cmat.block(0, nb, nb, 1) = 0.5 * c;
  cmat.block(nb, 0, 1, nb) = 0.5 * c.transpose();

  std::vector<SparseSymMat> rows;
  Vec b = Vec::Zero(n);
  for (int i = 0; i < nb; ++i) {
    // Y_ii - x_i = 0
    rows.emplace_back(n, std::vector<Triplet>{{i, i, 1.0}, {i, nb, -0.5}});
    b(i) = 0.0;
  }
  rows.push_back(unit_diag(n, nb));  // alpha = 1
  b(nb) = 1.0;

  return from_sdp(cmat, ConstraintStack(n, std::move(rows)), b, ConstraintStack(),
                  MatBox::nonneg(n), VecBox{Vec::Zero(0), Vec::Zero(0)}, name, "biq");
}

LssdpInstance gen_biq_ext(const Mat& q, const Vec& c, const std::string& name) {
  const int nb = static_cast<int>(q.rows());
  require(q.rows() == q.cols() && is_symmetric(q, 1e-10), "gen_biq_ext: Q must be symmetric");
  require(c.size() == nb, "gen_biq_ext: c length mismatch");
  const int n = nb + 1;

  Mat cmat = Mat::Zero(n, n);
  cmat.topLeftCorner(nb, nb) = 0.5 * q;
  cmat.block(0, nb, nb, 1) = 0.5 * c;
  cmat.block(nb, 0, 1, nb) = 0.5 * c.transpose();

  std::vector<SparseSymMat> erows;
  Vec b = Vec::Zero(n);
  for (int i = 0; i < nb; ++i)
    erows.emplace_back(n, std::vector<Triplet>{{i, i, 1.0}, {i, nb, -0.5}});
  erows.push_back(unit_diag(n, nb));
  b(nb) = 1.0;

  // three interval rows per pair: 0 <= -Y_ij + x_i <= 1, 0 <= -Y_ij + x_j <= 1,
  // -1 <= Y_ij - x_i - x_j <= 0
  std::vector<SparseSymMat> irows;
  std::vector<double> lo, hi;
  for (int i = 0; i < nb; ++i) {
    for (int j = i + 1; j < nb; ++j) {
      irows.emplace_back(n, std::vector<Triplet>{{i, j, -0.5}, {i, nb, 0.5}});
      lo.push_back(0.0);
      hi.push_back(1.0);
      irows.emplace_back(n, std::vector<Triplet>{{i, j, -0.5}, {j, nb, 0.5}});
      lo.push_back(0.0);
      hi.push_back(1.0);
      irows.emplace_back(n, std::vector<Triplet>{{i, j, 0.5}, {i, nb, -0.5}, {j, nb, -0.5}});
      lo.push_back(-1.0);
      hi.push_back(0.0);
    }
  }
  VecBox kbox;
  kbox.lower = Eigen::Map<Vec>(lo.data(), static_cast<Eigen::Index>(lo.size()));
  kbox.upper = Eigen::Map<Vec>(hi.data(), static_cast<Eigen::Index>(hi.size()));

  return from_sdp(cmat, ConstraintStack(n, std::move(erows)), b,
                  ConstraintStack(n, std::move(irows)), MatBox::nonneg(n), kbox, name,
                  "biq-ext");
}

LssdpInstance gen_theta_plus(const Graph& g, const std::string& name) {
  g.validate();
  const int n = g.nv;
  std::vector<SparseSymMat> rows;
  Vec b = Vec::Zero(static_cast<int>(g.edges.size()) + 1);
  for (const auto& [i, j] : g.edges) rows.push_back(offdiag(n, i, j, 1.0));
  {
    std::vector<Triplet> diag;
    for (int i = 0; i < n; ++i) diag.push_back({i, i, 1.0});
    rows.emplace_back(n, std::move(diag));  // <I, X> = 1
  }
  b(b.size() - 1) = 1.0;

  const Mat cmat = -Mat::Ones(n, n);  // max <ee^T, X>  ->  C = -ee^T
  return from_sdp(cmat, ConstraintStack(n, std::move(rows)), b, ConstraintStack(),
                  MatBox::nonneg(n), VecBox{Vec::Zero(0), Vec::Zero(0)}, name, "theta");
}

LssdpInstance gen_qap(const Mat& a, const Mat& b, const std::string& name) {
  const int n = static_cast<int>(a.rows());
  require(a.rows() == a.cols() && is_symmetric(a, 1e-10), "gen_qap: A must be symmetric");
  require(b.rows() == b.cols() && is_symmetric(b, 1e-10), "gen_qap: B must be symmetric");
  require(b.rows() == n, "gen_qap: A and B must have equal dimension");
  const int nn = n * n;
  auto idx = [n](int blk, int off) { return blk * n + off; };

  std::vector<SparseSymMat> rows;
  std::vector<double> rhs;
  // sum_i Y^{ii} = I: one row per a0 <= b0
  for (int a0 = 0; a0 < n; ++a0) {
    for (int b0 = a0; b0 < n; ++b0) {
      std::vector<Triplet> tri;
      for (int i = 0; i < n; ++i) {
        tri.push_back({idx(i, a0), idx(i, b0), a0 == b0 ? 1.0 : 0.5});
      }
      rows.emplace_back(nn, std::move(tri));
      rhs.push_back(a0 == b0 ? 1.0 : 0.0);
    }
  }
  // <I, Y^{ij}> = delta_ij for i <= j; the (n-1, n-1) row is implied by the
  // block-sum family above, so it is dropped to keep A_E onto
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (i == n - 1 && j == n - 1) continue;
      std::vector<Triplet> tri;
      for (int a0 = 0; a0 < n; ++a0) {
        if (i == j) {
          tri.push_back({idx(i, a0), idx(j, a0), 1.0});
        } else {
          tri.push_back({idx(i, a0), idx(j, a0), 0.5});
        }
      }
      rows.emplace_back(nn, std::move(tri));
      rhs.push_back(i == j ? 1.0 : 0.0);
    }
  }
  // <E, Y^{ij}> = 1 for i <= j; the (n-1, n-1) row is likewise redundant
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (i == n - 1 && j == n - 1) continue;
      std::vector<Triplet> tri;
      for (int a0 = 0; a0 < n; ++a0) {
        for (int b0 = 0; b0 < n; ++b0) {
          const int r = idx(i, a0), c = idx(j, b0);
          if (i == j && a0 > b0) continue;
          tri.push_back({r, c, (i == j && a0 == b0) ? 1.0 : 0.5});
        }
      }
      rows.emplace_back(nn, std::move(tri));
      rhs.push_back(1.0);
    }
  }

  Vec bvec = Eigen::Map<Vec>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  // C = B (x) A
  Mat cmat(nn, nn);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cmat.block(i * n, j * n, n, n) = b(i, j) * a;

  return from_sdp(cmat, ConstraintStack(nn, std::move(rows)), bvec, ConstraintStack(),
                  MatBox::nonneg(nn), VecBox{Vec::Zero(0), Vec::Zero(0)}, name, "qap");
}

LssdpInstance gen_rcp(const Mat& affinity, int k_clusters, const std::string& name) {
  const int n = static_cast<int>(affinity.rows());
  require(affinity.rows() == affinity.cols() && is_symmetric(affinity, 1e-10),
          "gen_rcp: affinity matrix must be symmetric");
  require(k_clusters >= 1, "gen_rcp: need at least one cluster");

  std::vector<SparseSymMat> rows;
  Vec b = Vec::Ones(n + 1);
  for (int i = 0; i < n; ++i) {
    // (Xe)_i = 1: row matrix with 1 at (i,i) and 1/2 elsewhere in row i
    std::vector<Triplet> tri;
    for (int j = 0; j < n; ++j) tri.push_back({std::min(i, j), std::max(i, j), i == j ? 1.0 : 0.5});
    rows.emplace_back(n, std::move(tri));
  }
  {
    std::vector<Triplet> diag;
    for (int i = 0; i < n; ++i) diag.push_back({i, i, 1.0});
    rows.emplace_back(n, std::move(diag));
  }
  b(n) = static_cast<double>(k_clusters);

  return from_sdp(-affinity, ConstraintStack(n, std::move(rows)), b, ConstraintStack(),
                  MatBox::nonneg(n), VecBox{Vec::Zero(0), Vec::Zero(0)}, name, "rcp");
}

Mat gaussian_affinity(const Mat& points) {
  const int n = static_cast<int>(points.rows());
  require(n >= 2, "gaussian_affinity: need at least two points");
  std::vector<double> dists;
  Mat d2(n, n);
  for (int i = 0; i < n; ++i) {
    d2(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d = (points.row(i) - points.row(j)).squaredNorm();
      d2(i, j) = d2(j, i) = d;
      dists.push_back(std::sqrt(d));
    }
  }
  std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
  const double bw = std::max(dists[dists.size() / 2], 1e-12);
  return (-d2 / (2.0 * bw * bw)).array().exp();
}

LssdpInstance gen_fap(const Graph& g, double k_param,
                      const std::vector<std::pair<int, int>>& u_set, const std::string& name) {
  g.validate();
  require(k_param > 1.0, "gen_fap: k must be > 1");
  const int n = g.nv;
  std::set<std::pair<int, int>> edge_set(g.edges.begin(), g.edges.end());
  for (auto [i, j] : u_set) {
    if (i > j) std::swap(i, j);
    require(edge_set.count({i, j}) == 1, "gen_fap: U must be a subset of the edge set");
  }

  // W, L(W) = Diag(We) - W
  Mat w = Mat::Zero(n, n);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const double we = g.weights.empty() ? 1.0 : g.weights[e];
    const auto& [i, j] = g.edges[e];
    w(i, j) = w(j, i) = we;
  }
  const Vec we = w.rowwise().sum();
  Mat lap = Mat(we.asDiagonal()) - w;

  // max <(k-1)/(2k) L(W) - 1/2 Diag(We), X>  ->  C is the negation
  Mat cmat = -((k_param - 1.0) / (2.0 * k_param) * lap - 0.5 * Mat(we.asDiagonal()));

  std::vector<SparseSymMat> rows;
  for (int i = 0; i < n; ++i) rows.push_back(unit_diag(n, i));
  Vec b = Vec::Ones(n);

  MatBox p = MatBox::free(n);
  const double bound = -1.0 / (k_param - 1.0);
  for (const auto& [i, j] : g.edges) {
    p.lower(i, j) = p.lower(j, i) = bound;
  }
  for (auto [i, j] : u_set) {
    if (i > j) std::swap(i, j);
    p.upper(i, j) = p.upper(j, i) = bound;
  }

  return from_sdp(cmat, ConstraintStack(n, std::move(rows)), b, ConstraintStack(), p,
                  VecBox{Vec::Zero(0), Vec::Zero(0)}, name, "fap");
}

Mat random_sym(int n, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = scale * unif(rng);
  return m;
}

Graph random_graph(int nv, double edge_prob, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Graph g;
  g.nv = nv;
  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j)
      if (unif(rng) < edge_prob) g.edges.push_back({i, j});
  // keep at least one edge so the generators have something to chew on
  if (g.edges.empty()) g.edges.push_back({0, 1});
  return g;
}

std::vector<LssdpInstance> desk_suite() {
  std::vector<LssdpInstance> suite;
  auto random_vec = [](int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Vec c(n);
    for (int i = 0; i < n; ++i) c(i) = unif(rng);
    return c;
  };
  // flow/distance style data: nonnegative, zero diagonal
  auto qap_data = [](int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 10.0);
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m(i, j) = m(j, i) = unif(rng);
    m.diagonal().setZero();
    return m;
  };
  // weighted graph with a 2-coloring; U is a random subset of the
  // bichromatic edges, so the simplex Gram matrix certifies feasibility
  auto fap_case = [](int nv, double p, std::uint64_t seed, const std::string& name) {
    Graph g = random_graph(nv, p, seed);
    std::mt19937_64 rng(seed ^ 0xc01);
    std::uniform_real_distribution<double> unif(0.5, 2.0);
    g.weights.clear();
    for (size_t e = 0; e < g.edges.size(); ++e) g.weights.push_back(unif(rng));
    const int k = 2;
    std::vector<int> color(nv);
    for (int i = 0; i < nv; ++i) color[i] = static_cast<int>(rng() % k);
    std::vector<std::pair<int, int>> u_set;
    for (const auto& e : g.edges)
      if (color[e.first] != color[e.second] && rng() % 2 == 0) u_set.push_back(e);
    return gen_fap(g, k, u_set, name);
  };

  for (int nb : {10, 20, 40, 50}) {
    suite.push_back(gen_biq(random_sym(nb, 100 + nb), random_vec(nb, 200 + nb),
                            "biq-" + std::to_string(nb + 1)));
  }
  suite.push_back(gen_biq(random_sym(30, 5302), random_vec(30, 3032), "biq-31"));
  for (int nv : {15, 25, 40}) {
    suite.push_back(
        gen_theta_plus(random_graph(nv, 0.4, 300 + nv), "theta-" + std::to_string(nv)));
  }
  suite.push_back(gen_qap(qap_data(3, 603), qap_data(3, 703), "qap-3"));
  for (int n : {4, 5, 6}) {
    suite.push_back(gen_qap(qap_data(n, 1000 * n + 5), qap_data(n, 2000 * n + 5),
                            "qap-" + std::to_string(n)));
  }
  for (int n : {20, 30, 40}) {
    std::mt19937_64 rng(600 + n);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat pts(n, 3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 3; ++j) pts(i, j) = gauss(rng) + (i % 2 ? 2.0 : -2.0);
    suite.push_back(gen_rcp(gaussian_affinity(pts), 2, "rcp-" + std::to_string(n)));
  }
  suite.push_back(fap_case(15, 0.8, 7160, "fap-15"));
  suite.push_back(fap_case(25, 0.5, 7257, "fap-25"));
  suite.push_back(fap_case(40, 0.8, 7410, "fap-40"));
  for (int nb : {10, 15, 20}) {
    suite.push_back(gen_biq_ext(random_sym(nb, 800 + nb), random_vec(nb, 900 + nb),
                                "biqext-" + std::to_string(nb + 1)));
  }
  return suite;
}

LssdpInstance gen_random(int n, int m_e, int m_i, std::uint64_t seed, const std::string& name) {
  require(n >= 2, "gen_random: n too small");
  require(m_e >= 1 && m_e <= n * (n + 1) / 2, "gen_random: m_E out of range");
  require(m_i >= 0, "gen_random: m_I negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  auto draw_sym = [&]() {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m(i, j) = m(j, i) = unif(rng);
    return m;
  };

  // dense random symmetric constraint matrices, Gram-Schmidt in S^n
  std::vector<Mat> basis;
  while (static_cast<int>(basis.size()) < m_e) {
    Mat m = draw_sym();
    for (const auto& q : basis) m -= inner(q, m) * q;
    const double nm = m.norm();
    if (nm < 1e-8) continue;
    basis.push_back(m / nm);
  }
  auto to_sparse = [n](const Mat& m) {
    std::vector<Triplet> tri;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (m(i, j) != 0.0) tri.push_back({i, j, m(i, j)});
    return SparseSymMat(n, tri);
  };
  std::vector<SparseSymMat> erows;
  for (const auto& m : basis) erows.push_back(to_sparse(m));

  std::vector<SparseSymMat> irows;
  for (int r = 0; r < m_i; ++r) irows.push_back(to_sparse(draw_sym()));

  // strictly positive, positive definite X0 inside P = {X >= 0}
  Mat x0 = 0.5 * Mat::Ones(n, n);
  for (int i = 0; i < n; ++i) x0(i, i) += 1.0 + 0.5 * std::abs(unif(rng));

  LssdpInstance inst;
  inst.name = name;
  inst.family = "random";
  inst.a_e = ConstraintStack(n, std::move(erows));
  inst.a_i = m_i > 0 ? ConstraintStack(n, std::move(irows)) : ConstraintStack();
  inst.b_e = inst.a_e.apply(x0);
  inst.big_g = x0 + random_sym(n, seed ^ 0x9e3779b97f4a7c15ull, 0.5);
  inst.p_box = MatBox::nonneg(n);
  if (m_i > 0) {
    const Vec s0 = inst.a_i.apply(x0);
    Vec noise(m_i);
    for (int r = 0; r < m_i; ++r) noise(r) = 0.1 * unif(rng);
    inst.small_g = s0 + noise;
    inst.k_box.lower = s0.array() - 1.0;
    inst.k_box.upper = s0.array() + 1.0;
  } else {
    inst.small_g = Vec::Zero(0);
    inst.k_box = VecBox{Vec::Zero(0), Vec::Zero(0)};
  }
  inst.validate();
  return rescale(inst);
}

}  // namespace lssdp
