#include <doctest.h>

#include <random>

#include "lssdp/linalg.hpp"
#include "test_util.hpp"

using namespace lssdp;

TEST_CASE("apply_map on identity constraint") {
  ConstraintStack a(2, {SparseSymMat(2, {{0, 0, 1.0}, {1, 1, 1.0}})});
  Mat x = Mat::Zero(2, 2);
  x(0, 0) = 3.0;
  x(1, 1) = 4.0;
  Vec y = a.apply(x);
  CHECK(y.size() == 1);
  CHECK(y(0) == doctest::Approx(7.0));
}

TEST_CASE("apply_map on empty stack") {
  ConstraintStack a;
  CHECK(a.size() == 0);
}

TEST_CASE("apply_map matches brute-force triplet summation") {
  std::mt19937_64 rng(7);
  const int n = 5;
  std::vector<SparseSymMat> mats;
  for (int i = 0; i < 3; ++i) mats.push_back(test::random_sparse_sym(n, 8, rng));
  ConstraintStack a(n, mats);
  Mat x = test::random_symmetric(n, rng);
  Vec got = a.apply(x);
  for (int i = 0; i < 3; ++i) {
    double expect = 0.0;  // elementwise sum over the dense completion
    Mat d = mats[i].dense();
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) expect += d(r, c) * x(r, c);
    CHECK(got(i) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("adjoint_map basics") {
  ConstraintStack a(2, {SparseSymMat(2, {{0, 0, 1.0}, {1, 1, 1.0}})});
  Vec y(1);
  y << 2.0;
  CHECK((a.adjoint(y) - 2.0 * Mat::Identity(2, 2)).norm() == doctest::Approx(0.0));
  y << 0.0;
  CHECK(a.adjoint(y).norm() == 0.0);
}

TEST_CASE("adjointness identity <A*y, X> = <y, A(X)>") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 5);
    const int m = 1 + static_cast<int>(rng() % 6);
    std::vector<SparseSymMat> mats;
    for (int i = 0; i < m; ++i) mats.push_back(test::random_sparse_sym(n, 6, rng));
    ConstraintStack a(n, mats);
    Mat x = test::random_symmetric(n, rng);
    Vec y = test::random_vec(m, rng);
    const double lhs = inner(a.adjoint(y), x);
    const double rhs = y.dot(a.apply(x));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("sym_eig on small fixed matrices") {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -2.0;
  EigenDecomp d = sym_eig(m);
  CHECK(d.values(0) == doctest::Approx(1.0));
  CHECK(d.values(1) == doctest::Approx(-2.0));

  d = sym_eig(Mat::Identity(4, 4));
  for (int i = 0; i < 4; ++i) CHECK(d.values(i) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig reconstruction and orthonormality over random matrices") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 49);
    Mat m = test::random_symmetric(n, rng);
    EigenDecomp d = sym_eig(m);
    const Mat rec = d.vectors * d.values.asDiagonal() * d.vectors.transpose();
    CHECK((m - rec).norm() <= 1e-12 * std::max(1.0, m.norm()));
    CHECK((d.vectors.transpose() * d.vectors - Mat::Identity(n, n)).norm() <= 1e-12 * n);
    for (int i = 0; i + 1 < n; ++i) CHECK(d.values(i) >= d.values(i + 1));
  }
}

TEST_CASE("gram_matrix small cases") {
  ConstraintStack a(2, {SparseSymMat(2, {{0, 0, 1.0}, {1, 1, 1.0}})});
  Mat g = a.gram(0.0);
  CHECK(g.rows() == 1);
  CHECK(g(0, 0) == doctest::Approx(2.0));

  ConstraintStack b(2, {SparseSymMat(2, {{0, 0, 1.0}}), SparseSymMat(2, {{1, 1, 1.0}})});
  Mat g2 = b.gram(1.0);
  CHECK((g2 - 2.0 * Mat::Identity(2, 2)).norm() == doctest::Approx(0.0));
}

TEST_CASE("gram_matrix matches pairwise trace-product oracle and unit-vector route") {
  std::mt19937_64 rng(17);
  const int n = 6, m = 5;
  std::vector<SparseSymMat> mats;
  for (int i = 0; i < m; ++i) mats.push_back(test::random_sparse_sym(n, 7, rng));
  ConstraintStack a(n, mats);
  Mat g = a.gram(0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      CHECK(g(i, j) == doctest::Approx(inner(mats[i].dense(), mats[j].dense())).epsilon(1e-12));
    }
    // gram column = A(A*(e_i))
    Vec e = Vec::Zero(m);
    e(i) = 1.0;
    CHECK((g.col(i) - a.apply(a.adjoint(e))).norm() <= 1e-12);
  }
}

TEST_CASE("chol_solve basics and residual") {
  CholeskyFactor id(Mat::Identity(3, 3));
  Vec r(3);
  r << 1, 2, 3;
  CHECK((id.solve(r) - r).norm() == doctest::Approx(0.0));

  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  CholeskyFactor df(d);
  Vec rhs(2);
  rhs << 2, 4;
  CHECK((df.solve(rhs) - Vec::Ones(2)).norm() == doctest::Approx(0.0));

  std::mt19937_64 rng(19);
  Mat spd = test::random_spd(8, rng);
  CholeskyFactor f(spd);
  Vec b = test::random_vec(8, rng);
  Vec x = f.solve(b);
  CHECK((spd * x - b).norm() <= 1e-12 * (1.0 + b.norm()));
}

TEST_CASE("chol_solve rejects indefinite matrices") {
  Mat m = Mat::Identity(2, 2);
  m(1, 1) = -1.0;
  CHECK_THROWS_AS(CholeskyFactor{m}, Error);
}

TEST_CASE("SparseSymMat dedupes and validates") {
  SparseSymMat a(3, {{0, 1, 1.0}, {1, 0, 2.0}, {2, 2, 1.0}});
  CHECK(a.triplets().size() == 2);  // (0,1) summed
  CHECK(a.triplets()[0].value == doctest::Approx(3.0));
  CHECK_THROWS_AS(SparseSymMat(2, {{0, 5, 1.0}}), Error);
}

TEST_CASE("dimension mismatches throw") {
  ConstraintStack a(2, {SparseSymMat(2, {{0, 0, 1.0}})});
  CHECK_THROWS_AS(a.apply(Mat::Zero(3, 3)), Error);
  CHECK_THROWS_AS(a.adjoint(Vec::Zero(2)), Error);
}
