#include <doctest.h>

#include <random>

#include "lssdp/cones.hpp"
#include "test_util.hpp"

using namespace lssdp;

TEST_CASE("project_psd clips negative eigenvalues") {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = -1.0;
  auto [x, d] = project_psd(m);
  CHECK(x(0, 0) == doctest::Approx(3.0));
  CHECK(x(1, 1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("project_psd is the identity on PSD matrices") {
  std::mt19937_64 rng(23);
  Mat spd = test::random_spd(5, rng);
  auto [x, d] = project_psd(spd);
  CHECK((x - spd).norm() <= 1e-12 * spd.norm());
}

TEST_CASE("Moreau decomposition and complementarity") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 12);
    Mat m = test::random_symmetric(n, rng, 2.0);
    Mat plus = project_psd(m).first;
    Mat minus = project_psd(Mat(-m)).first;
    CHECK((m - (plus - minus)).norm() <= 1e-11 * std::max(1.0, m.norm()));
    CHECK(std::abs(inner(plus, minus)) <= 1e-10 * std::max(1.0, m.squaredNorm()));
    CHECK(std::abs(inner(plus - m, plus)) <= 1e-10 * std::max(1.0, m.squaredNorm()));
  }
}

TEST_CASE("projections are nonexpansive") {
  std::mt19937_64 rng(31);
  MatBox box = MatBox::nonneg(6);
  box.upper.setConstant(1.5);
  for (int trial = 0; trial < 50; ++trial) {
    Mat a = test::random_symmetric(6, rng, 2.0);
    Mat b = test::random_symmetric(6, rng, 2.0);
    CHECK((project_psd(a).first - project_psd(b).first).norm() <= (a - b).norm() + 1e-12);
    CHECK((project_box<Mat>(a, box) - project_box<Mat>(b, box)).norm() <=
          (a - b).norm() + 1e-12);
  }
}

TEST_CASE("project_box with one-sided and free bounds") {
  MatBox nonneg = MatBox::nonneg(2);
  Mat m(2, 2);
  m << 1, -2, -2, 3;
  Mat p = project_box<Mat>(m, nonneg);
  CHECK(p(0, 0) == 1.0);
  CHECK(p(0, 1) == 0.0);
  CHECK(p(1, 1) == 3.0);

  MatBox free = MatBox::free(2);
  CHECK((project_box<Mat>(m, free) - m).norm() == 0.0);

  // FAP-style mixed bounds clamp only the constrained entries
  MatBox fap = MatBox::free(2);
  fap.lower(0, 1) = fap.lower(1, 0) = -0.5;
  Mat q = project_box<Mat>(m, fap);
  CHECK(q(0, 1) == -0.5);
  CHECK(q(0, 0) == 1.0);
}

TEST_CASE("prox_support_neg closed form") {
  MatBox nonneg = MatBox::nonneg(2);
  Mat r(2, 2);
  r << 1, -2, -2, 3;
  Mat z = prox_support_neg<Mat>(r, nonneg);
  CHECK(z(0, 0) == 0.0);
  CHECK(z(0, 1) == 2.0);
  CHECK(z(1, 0) == 2.0);
  CHECK(z(1, 1) == 0.0);

  // R inside the box: Z = 0
  Mat inside = Mat::Ones(2, 2);
  CHECK(prox_support_neg<Mat>(inside, nonneg).norm() == 0.0);
}

TEST_CASE("prox_support_neg optimal by 1-D grid search") {
  // scalar box [0, 1], R = 2 -> Z = -1
  VecBox box{Vec::Zero(1), Vec::Ones(1)};
  Vec r(1);
  r << 2.0;
  Vec z = prox_support_neg<Vec>(r, box);
  CHECK(z(0) == doctest::Approx(-1.0));

  auto objective = [&](double zv) {
    Vec cand(1);
    cand << zv;
    return support_value<Vec>(-cand, box) + 0.5 * (zv + r(0)) * (zv + r(0));
  };
  const double fz = objective(z(0));
  for (double g = -3.0; g <= 3.0; g += 1e-3) {
    CHECK(fz <= objective(g) + 1e-6);
  }
}

TEST_CASE("prox_support_neg_scaled optimal by grid search on random scalar boxes") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    double lo = unif(rng), hi = unif(rng);
    if (lo > hi) std::swap(lo, hi);
    VecBox box{Vec::Constant(1, lo), Vec::Constant(1, hi)};
    const double sigma = 0.25 + std::abs(unif(rng));
    Vec r(1);
    r << unif(rng);
    Vec z = prox_support_neg_scaled<Vec>(r, box, sigma);
    auto objective = [&](double zv) {
      Vec cand(1);
      cand << zv;
      return support_value<Vec>(-cand, box) + 0.5 * sigma * (zv - r(0)) * (zv - r(0));
    };
    const double fz = objective(z(0));
    for (double g = -6.0; g <= 6.0; g += 1e-3) CHECK(fz <= objective(g) + 1e-5);
  }
}

TEST_CASE("support_value formula and infinities") {
  MatBox nonneg = MatBox::nonneg(2);
  Mat y = -Mat::Ones(2, 2);
  CHECK(support_value<Mat>(y, nonneg) == 0.0);  // Y <= 0 with box [0, inf)

  VecBox unit{Vec::Zero(1), Vec::Ones(1)};
  Vec y1(1);
  y1 << 3.0;
  CHECK(support_value<Vec>(y1, unit) == doctest::Approx(3.0));

  VecBox two{Vec::Constant(1, -1.0), Vec::Constant(1, 2.0)};
  Vec y2(1);
  y2 << -4.0;
  CHECK(support_value<Vec>(y2, two) == doctest::Approx(4.0));
  // grid-search oracle over W in [-1, 2]
  double best = -kInf;
  for (double w = -1.0; w <= 2.0; w += 1e-4) best = std::max(best, y2(0) * w);
  CHECK(support_value<Vec>(y2, two) == doctest::Approx(best).epsilon(1e-3));

  // infinite bound times a matching-sign coefficient
  Mat ypos = Mat::Ones(2, 2);
  CHECK(std::isinf(support_value<Mat>(ypos, nonneg)));
}

TEST_CASE("Fenchel-Young with equality at the supporting point") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    VecBox box{Vec::Constant(3, -1.0), Vec::Constant(3, 2.0)};
    Vec y = test::random_vec(3, rng, 3.0);
    Vec w = test::random_vec(3, rng);
    w = project_box<Vec>(w, box);
    const double sup = support_value<Vec>(y, box);
    CHECK(sup + 0.0 >= y.dot(w) - 1e-12);  // delta_B(w) = 0 inside the box
    // equality at the box-projected supporter
    Vec supporter(3);
    for (int i = 0; i < 3; ++i) supporter(i) = y(i) >= 0 ? box.upper(i) : box.lower(i);
    CHECK(sup == doctest::Approx(y.dot(supporter)).epsilon(1e-12));
  }
}

TEST_CASE("box validation") {
  MatBox bad = MatBox::nonneg(2);
  bad.upper(0, 0) = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);

  MatBox asym = MatBox::free(2);
  asym.lower(0, 1) = 0.0;  // pattern not symmetric
  CHECK_THROWS_AS(asym.validate(), Error);
}
