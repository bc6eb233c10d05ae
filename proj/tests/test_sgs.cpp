#include <doctest.h>

#include <random>

#include "lssdp/cones.hpp"
#include "lssdp/sgs.hpp"
#include "test_util.hpp"

using namespace lssdp;

namespace {

struct DenseProblem {
  Mat q;
  std::vector<int> dims;
  BlockVec r;
  BlockQuadratic bq;
};

DenseProblem random_problem(std::mt19937_64& rng, int s, bool exact_solves) {
  std::vector<int> dims;
  int total = 0;
  for (int i = 0; i < s; ++i) {
    const int d = 1 + static_cast<int>(rng() % 6);
    dims.push_back(d);
    total += d;
  }
  Mat q = test::random_spd(total, rng, 0.6, 3.0);
  BlockVec r;
  for (int d : dims) r.push_back(test::random_vec(d, rng));
  return {q, dims, r, make_dense_block_quadratic(q, dims, r, exact_solves)};
}

void split_q(const Mat& q, const std::vector<int>& dims, Mat& dmat, Mat& u) {
  const int total = static_cast<int>(q.rows());
  u = Mat::Zero(total, total);
  dmat = Mat::Zero(total, total);
  std::vector<int> off(dims.size(), 0);
  for (size_t i = 1; i < dims.size(); ++i) off[i] = off[i - 1] + dims[i - 1];
  for (size_t i = 0; i < dims.size(); ++i) {
    dmat.block(off[i], off[i], dims[i], dims[i]) = q.block(off[i], off[i], dims[i], dims[i]);
    for (size_t j = i + 1; j < dims.size(); ++j)
      u.block(off[i], off[j], dims[i], dims[j]) = q.block(off[i], off[j], dims[i], dims[j]);
  }
}

}  // namespace

TEST_CASE("assemble_H_dense on the 2x2 example") {
  Mat q(2, 2);
  q << 2, 1, 1, 2;
  BlockVec r = {Vec::Zero(1), Vec::Zero(1)};
  auto bq = make_dense_block_quadratic(q, {1, 1}, r);
  Mat h = assemble_H_dense(bq);
  // (D+U) D^{-1} (D+U^*) with D = diag(2,2), U_12 = 1: T adds 1/2 to H_11
  Mat expect(2, 2);
  expect << 2.5, 1, 1, 2;
  CHECK((h - expect).norm() <= 1e-14);
}

TEST_CASE("assemble_H_dense: block diagonal Q gives H = Q") {
  std::mt19937_64 rng(47);
  Mat q = Mat::Zero(5, 5);
  q.topLeftCorner(2, 2) = test::random_spd(2, rng);
  q.block(2, 2, 3, 3) = test::random_spd(3, rng);
  auto bq = make_dense_block_quadratic(q, {2, 3}, {Vec::Zero(2), Vec::Zero(3)});
  CHECK((assemble_H_dense(bq) - q).norm() <= 1e-12);
}

TEST_CASE("assemble_H_dense positive definite, matches Q + U D^{-1} U^*") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    auto prob = random_problem(rng, 3, true);
    Mat h = assemble_H_dense(prob.bq);
    EigenDecomp d = sym_eig(h);
    CHECK(d.values(d.values.size() - 1) > 0.0);
    Mat dmat, u;
    split_q(prob.q, prob.dims, dmat, u);
    Mat h2 = prob.q + u * dmat.llt().solve(u.transpose());
    CHECK((h - h2).norm() <= 1e-11 * h.norm());
  }
}

TEST_CASE("sgs_sweep with exact solves equals the dense prox minimizer (p = 0)") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 30; ++trial) {
    const int s = 2 + static_cast<int>(rng() % 2);
    auto prob = random_problem(rng, s, true);
    BlockVec y;
    for (int d : prob.dims) y.push_back(test::random_vec(d, rng));

    auto res = sgs_sweep(prob.bq, y, make_linear_prox1(prob.bq), 1e-9);
    CHECK(block_norm(res.errors.hat_delta) <= 1e-9);
    CHECK(block_norm(res.errors.delta_plus) <= 1e-9);

    const Mat h = assemble_H_dense(prob.bq);
    const Mat t = h - prob.bq.assemble_q_dense();
    const Vec c = block_flatten(prob.r) + t * block_flatten(y);
    const Vec oracle = h.llt().solve(c);
    CHECK((block_flatten(res.x_plus) - oracle).norm() <= 1e-9 * (1.0 + oracle.norm()));
  }
}

TEST_CASE("sgs_sweep fixed point: y already the minimizer") {
  std::mt19937_64 rng(61);
  auto base = random_problem(rng, 3, true);
  // pick r := Q y so that y minimizes h; the T-prox term then vanishes at y
  Vec y_flat = test::random_vec(base.bq.total_dim(), rng);
  BlockVec r = block_split(base.bq.assemble_q_dense() * y_flat, base.dims);
  auto bq = make_dense_block_quadratic(base.q, base.dims, r);
  BlockVec y = block_split(y_flat, base.dims);
  auto res = sgs_sweep(bq, y, make_linear_prox1(bq), 1e-10);
  CHECK((block_flatten(res.x_plus) - y_flat).norm() <= 1e-8 * (1.0 + y_flat.norm()));
}

TEST_CASE("sgs_sweep touch order is s..2, 1, 2..s") {
  std::mt19937_64 rng(67);
  auto prob = random_problem(rng, 3, true);
  BlockVec y = block_zero(prob.dims);
  auto res = sgs_sweep(prob.bq, y, make_linear_prox1(prob.bq), 1e-9);
  CHECK(res.touch_order == std::vector<int>{3, 2, 1, 2, 3});
}

TEST_CASE("inexact sweep output exactly minimizes the Delta-perturbed problem") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const int s = 2 + static_cast<int>(rng() % 2);
    auto prob = random_problem(rng, s, /*exact_solves=*/false);
    BlockVec y;
    for (int d : prob.dims) y.push_back(test::random_vec(d, rng));

    const double loose = 5e-2;  // leaves genuinely nonzero residuals
    auto res = sgs_sweep(prob.bq, y, make_linear_prox1(prob.bq), loose);

    auto comp = delta_composite(prob.bq, res.errors);
    const Mat h = assemble_H_dense(prob.bq);
    const Mat t = h - prob.bq.assemble_q_dense();
    const Vec c = block_flatten(prob.r) + t * block_flatten(y) + block_flatten(comp.delta);
    const Vec oracle = h.llt().solve(c);
    CHECK((block_flatten(res.x_plus) - oracle).norm() <= 1e-8 * (1.0 + oracle.norm()));
  }
}

TEST_CASE("sweep with box-support prox on block 1 beats random probes") {
  std::mt19937_64 rng(73);
  int done = 0;
  while (done < 10) {
    std::vector<int> dims = {2 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 4),
                             1 + static_cast<int>(rng() % 4)};
    const int total = dims[0] + dims[1] + dims[2];
    // identity first diagonal block, matching how the dual sweep uses it
    Mat q = test::random_spd(total, rng, 0.5, 2.5);
    q.topLeftCorner(dims[0], dims[0]) = Mat::Identity(dims[0], dims[0]);
    q.block(0, dims[0], dims[0], total - dims[0]) *= 0.3;
    q.block(dims[0], 0, total - dims[0], dims[0]) *= 0.3;
    if (sym_eig(q).values(total - 1) <= 1e-6) continue;  // rare non-PSD draw
    ++done;

    BlockVec r;
    for (int d : dims) r.push_back(test::random_vec(d, rng));
    auto bq = make_dense_block_quadratic(q, dims, r, false);

    VecBox box{Vec::Constant(dims[0], 0.0), Vec::Constant(dims[0], 1.0)};
    Prox1 prox1 = [&box](const Vec& rhs) { return prox_support_neg<Vec>(Vec(-rhs), box); };

    BlockVec y;
    for (int d : dims) y.push_back(test::random_vec(d, rng));
    auto res = sgs_sweep(bq, y, prox1, 3e-2);
    auto comp = delta_composite(bq, res.errors);

    const Mat h = assemble_H_dense(bq);
    const Vec c = block_flatten(r) + (h - q) * block_flatten(y) + block_flatten(comp.delta);
    auto objective = [&](const Vec& x) {
      return 0.5 * x.dot(h * x) - c.dot(x) + support_value<Vec>(Vec(-x.head(dims[0])), box);
    };
    const Vec x = block_flatten(res.x_plus);
    const double fx = objective(x);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int probe = 0; probe < 1000; ++probe) {
      Vec pert = x;
      for (int i = 0; i < total; ++i) pert(i) += 0.05 * gauss(rng);
      CHECK(fx <= objective(pert) + 1e-10);
    }
  }
}

TEST_CASE("delta_composite specializations") {
  std::mt19937_64 rng(79);
  auto prob = random_problem(rng, 3, true);
  ErrorVectors zero{block_zero(prob.dims), block_zero(prob.dims)};
  auto comp = delta_composite(prob.bq, zero);
  CHECK(block_norm(comp.delta) == 0.0);
  CHECK(comp.xi_bound == 0.0);

  // hat_delta = 0: Delta = dplus + U D^{-1} dplus and xi = ||D^{-1/2} dplus||
  ErrorVectors ev{block_zero(prob.dims), block_zero(prob.dims)};
  for (size_t i = 0; i < prob.dims.size(); ++i)
    ev.delta_plus[i] = test::random_vec(prob.dims[i], rng, 0.1);
  comp = delta_composite(prob.bq, ev);

  Mat dmat, u;
  split_q(prob.q, prob.dims, dmat, u);
  const Vec dp = block_flatten(ev.delta_plus);
  const Vec expect = dp + u * dmat.llt().solve(dp);
  CHECK((block_flatten(comp.delta) - expect).norm() <= 1e-11 * (1.0 + expect.norm()));
  EigenDecomp dd = sym_eig(dmat);
  Mat dinvhalf =
      dd.vectors * dd.values.cwiseSqrt().cwiseInverse().asDiagonal() * dd.vectors.transpose();
  CHECK(comp.xi_bound == doctest::Approx((dinvhalf * dp).norm()).epsilon(1e-9));
}

TEST_CASE("certificate soundness: ||H^{-1/2} Delta|| <= xi_bound") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 30; ++trial) {
    const int s = 2 + static_cast<int>(rng() % 2);
    auto prob = random_problem(rng, s, false);
    BlockVec y;
    for (int d : prob.dims) y.push_back(test::random_vec(d, rng));
    auto res = sgs_sweep(prob.bq, y, make_linear_prox1(prob.bq), 0.08);
    auto comp = delta_composite(prob.bq, res.errors);

    const Mat h = assemble_H_dense(prob.bq);
    EigenDecomp d = sym_eig(h);
    Mat hinvhalf =
        d.vectors * d.values.cwiseSqrt().cwiseInverse().asDiagonal() * d.vectors.transpose();
    const double xi = (hinvhalf * block_flatten(comp.delta)).norm();
    CHECK(xi <= comp.xi_bound * (1.0 + 1e-9) + 1e-12);
    CHECK(res.xi_bound == doctest::Approx(comp.xi_bound));
  }
}

TEST_CASE("sweep rejects a solver that cannot reach the tolerance") {
  // a diagonal solver that always returns zero has residual ||rhs||
  BlockQuadratic bq(
      {1, 1},
      [](int, const Vec& rhs, double) {
        return BlockQuadratic::DiagSolve{Vec::Zero(1), rhs};
      },
      [](int, const Vec& v) { return v; }, [](int, int, const Vec& v) { return 0.5 * v; },
      [](int, int, const Vec& v) { return 0.5 * v; }, {Vec::Ones(1), Vec::Ones(1)});
  CHECK_THROWS_AS(sgs_sweep(bq, block_zero({1, 1}), make_linear_prox1(bq), 1e-8), Error);
}
