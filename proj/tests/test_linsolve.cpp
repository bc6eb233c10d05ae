#include <doctest.h>

#include <cmath>
#include <random>

#include "lssdp/linsolve.hpp"
#include "test_util.hpp"

using namespace lssdp;

namespace {

// stack of pairwise-orthogonal diagonal matrices: B = diag(scales^2) + shift
GramOperator diag_gram(const Vec& scales, double shift, int threshold = 4000) {
  const int m = static_cast<int>(scales.size());
  std::vector<SparseSymMat> mats;
  for (int i = 0; i < m; ++i) mats.emplace_back(m, std::vector<Triplet>{{i, i, scales(i)}});
  return GramOperator(ConstraintStack(m, mats), shift, threshold);
}

GramOperator random_gram(int n, int m, double shift, std::mt19937_64& rng,
                         int threshold = 4000) {
  std::vector<SparseSymMat> mats;
  for (int i = 0; i < m; ++i) mats.push_back(test::random_sparse_sym(n, 2 * n, rng));
  return GramOperator(ConstraintStack(n, mats), shift, threshold);
}

}  // namespace

TEST_CASE("build_preconditioner on diag(4,2,1) with k=2") {
  Vec s(3);
  s << 2.0, std::sqrt(2.0), 1.0;
  GramOperator b = diag_gram(s, 0.0);
  SpectralPreconditioner pc = build_preconditioner(b, 2);
  CHECK(pc.lambdas(0) == doctest::Approx(4.0));
  CHECK(pc.lambdas(1) == doctest::Approx(2.0));
  Mat bt = assemble_precond_dense(pc, 3);
  Mat expect = Mat::Zero(3, 3);
  expect(0, 0) = 4.0;
  expect(1, 1) = 2.0;
  expect(2, 2) = 2.0;
  CHECK((bt - expect).norm() <= 1e-10);
  // closed-form inverse: Btilde^{-1} [4,2,2] = [1,1,1]
  Vec v(3);
  v << 4.0, 2.0, 2.0;
  CHECK((apply_precond_inverse(pc, v) - Vec::Ones(3)).norm() <= 1e-12);
}

TEST_CASE("full-rank preconditioner makes PCG converge in one iteration") {
  std::mt19937_64 rng(89);
  GramOperator b = random_gram(6, 5, 0.5, rng);
  SpectralPreconditioner pc = build_preconditioner(b, 5);
  Vec r = test::random_vec(5, rng);
  PcgOptions opts;
  opts.tol_abs = 1e-11;
  opts.precond = &pc;
  CertifiedSolve cs = pcg_solve(b, r, opts);
  CHECK(cs.certified);
  CHECK(cs.iterations <= 2);
  CHECK((b.apply(cs.solution) - r).norm() <= 1e-11);
}

TEST_CASE("apply_precond_inverse: k=1 collapses to scaling") {
  std::mt19937_64 rng(97);
  GramOperator b = random_gram(5, 4, 1.0, rng);
  SpectralPreconditioner pc = build_preconditioner(b, 1);
  Vec v = test::random_vec(4, rng);
  CHECK((apply_precond_inverse(pc, v) - v / pc.lambdas(0)).norm() <= 1e-13);
}

TEST_CASE("apply_precond_inverse inverts the dense assembly") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    GramOperator b = random_gram(6, 6, 0.3, rng);
    SpectralPreconditioner pc = build_preconditioner(b, 3);
    Mat bt = assemble_precond_dense(pc, 6);
    Vec v = test::random_vec(6, rng);
    CHECK((apply_precond_inverse(pc, Vec(bt * v)) - v).norm() <= 1e-10 * (1.0 + v.norm()));
  }
}

TEST_CASE("preconditioner agrees with B on the retained eigenspace") {
  std::mt19937_64 rng(103);
  GramOperator b = random_gram(7, 7, 0.2, rng);
  SpectralPreconditioner pc = build_preconditioner(b, 4);
  Mat bt = assemble_precond_dense(pc, 7);
  for (int i = 0; i < 4; ++i) {
    const Vec p = pc.vectors.col(i);
    CHECK((bt * p - b.apply(p)).norm() <= 1e-9 * (1.0 + pc.lambdas(0)));
  }
  // Btilde >= lambda_k I
  EigenDecomp d = sym_eig(bt);
  CHECK(d.values(d.values.size() - 1) >= pc.lambdas(3) - 1e-10);
}

TEST_CASE("pcg trivial cases") {
  std::mt19937_64 rng(107);
  GramOperator b = random_gram(5, 4, 1.0, rng);
  PcgOptions opts;
  opts.tol_abs = 1e-12;
  CertifiedSolve cs = pcg_solve(b, Vec::Zero(4), opts);
  CHECK(cs.iterations == 0);
  CHECK(cs.solution.norm() == 0.0);

  // two-cluster spectrum: diagonal gram + shift has two distinct eigenvalues
  Vec s(4);
  s << 2.0, 2.0, 1.0, 1.0;
  GramOperator b2 = diag_gram(s, 1.0);
  Vec r = test::random_vec(4, rng);
  CertifiedSolve cs2 = pcg_solve(b2, r, opts);
  CHECK(cs2.certified);
  CHECK(cs2.iterations <= 2);
}

TEST_CASE("pcg certificate is a fresh residual evaluation") {
  std::mt19937_64 rng(109);
  GramOperator b = random_gram(8, 8, 0.1, rng);
  Vec r = test::random_vec(8, rng);
  PcgOptions opts;
  opts.tol_abs = 1e-9;
  CertifiedSolve cs = pcg_solve(b, r, opts);
  CHECK(cs.certified);
  const Vec recomputed = r - b.apply(cs.solution);
  CHECK((recomputed - cs.residual).norm() <= 1e-14 * (1.0 + r.norm()));
}

TEST_CASE("preconditioned PCG beats plain CG on i^-2 spectral decay") {
  std::mt19937_64 rng(113);
  const int m = 40;
  Vec scales(m);
  for (int i = 0; i < m; ++i) scales(i) = 1.0 / (i + 1.0);  // lambda_i = i^-2
  long pcg_total = 0, cg_total = 0;
  for (int trial = 0; trial < 20; ++trial) {
    GramOperator b = diag_gram(scales, 0.0);
    SpectralPreconditioner pc = build_preconditioner(b, 10);
    Vec r = test::random_vec(m, rng);
    PcgOptions with, without;
    with.tol_abs = 1e-10;
    with.precond = &pc;
    without.tol_abs = 1e-10;
    CertifiedSolve a = pcg_solve(b, r, with);
    CertifiedSolve c = pcg_solve(b, r, without);
    CHECK(a.certified);
    CHECK(c.certified);
    pcg_total += a.iterations;
    cg_total += c.iterations;
  }
  CHECK(pcg_total < cg_total);
}

TEST_CASE("warm starting a drifting rhs never costs more than one extra iteration") {
  std::mt19937_64 rng(127);
  GramOperator b = random_gram(10, 10, 0.5, rng);
  SpectralPreconditioner pc = build_preconditioner(b, 4);
  Vec r = test::random_vec(10, rng);
  Vec u = test::random_vec(10, rng);
  Vec prev = Vec::Zero(10);
  bool have_prev = false;
  for (int k = 0; k < 12; ++k) {
    Vec rk = r + (k * 1e-3) * u;
    PcgOptions cold, warm;
    cold.tol_abs = warm.tol_abs = 1e-10;
    cold.precond = warm.precond = &pc;
    warm.warm_start = have_prev ? &prev : nullptr;
    CertifiedSolve w = pcg_solve(b, rk, warm);
    CertifiedSolve c = pcg_solve(b, rk, cold);
    CHECK(w.iterations <= c.iterations + 1);
    prev = w.solution;
    have_prev = true;
  }
}

TEST_CASE("solve_certified strategies") {
  std::mt19937_64 rng(131);
  GramOperator b = random_gram(4, 3, 0.5, rng);
  Vec r = test::random_vec(3, rng);

  CertifiedSolve direct = solve_certified(b, r, 1e-10, SolveStrategy::kAuto);
  CHECK(direct.iterations == 0);
  CHECK(direct.residual.norm() == 0.0);  // exactly zero by convention
  CHECK((b.apply(direct.solution) - r).norm() <= 1e-12 * (1.0 + r.norm()));

  CertifiedSolve viapcg = solve_certified(b, r, 1e-10, SolveStrategy::kPcg);
  CHECK(viapcg.certified);
  CHECK((direct.solution - viapcg.solution).norm() <= 1e-8);

  // operator-only Gram (threshold 0) auto-routes to PCG
  GramOperator op_only = random_gram(4, 3, 0.5, rng, /*threshold=*/0);
  CHECK(!op_only.has_factorization());
  CertifiedSolve auto_pcg = solve_certified(op_only, r, 1e-10, SolveStrategy::kAuto);
  CHECK(auto_pcg.certified);
  CHECK(auto_pcg.iterations > 0);
}

TEST_CASE("forced direct on a singular operator fails loudly") {
  // duplicate rows make A A* singular
  std::vector<SparseSymMat> mats = {SparseSymMat(2, {{0, 0, 1.0}}),
                                    SparseSymMat(2, {{0, 0, 1.0}})};
  GramOperator b(ConstraintStack(2, mats), 0.0);
  CHECK(!b.has_factorization());
  CHECK_THROWS_AS(solve_certified(b, Vec::Ones(2), 1e-10, SolveStrategy::kDirect), Error);
}

TEST_CASE("Lanczos path matches the dense eigenpath") {
  std::mt19937_64 rng(137);
  GramOperator b = random_gram(12, 30, 0.4, rng);
  SpectralPreconditioner dense = build_preconditioner(b, 6, /*dense_threshold=*/500);
  SpectralPreconditioner lanczos = build_preconditioner(b, 6, /*dense_threshold=*/1);
  CHECK(lanczos.rank() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(lanczos.lambdas(i) ==
          doctest::Approx(dense.lambdas(i)).epsilon(1e-7).scale(dense.lambdas(0)));
    const Vec v = lanczos.vectors.col(i);
    CHECK((b.apply(v) - lanczos.lambdas(i) * v).norm() <= 1e-6 * dense.lambdas(0));
  }
}
