#include "lssdp/linsolve.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace lssdp {

GramOperator::GramOperator(ConstraintStack stack, double shift, int explicit_threshold)
    : stack_(std::move(stack)), shift_(shift) {
  require(shift_ >= 0.0, "GramOperator: shift must be nonnegative");
  if (stack_.size() >= 1 && stack_.size() <= explicit_threshold) {
    gram_ = stack_.gram(shift_);
    // Factorization may legitimately fail when shift = 0 and A is not
    // surjective; leave the operator usable for applications.
    try {
      chol_.emplace(*gram_);
    } catch (const Error&) {
      chol_.reset();
    }
  }
}

Vec GramOperator::apply(const Vec& y) const {
  require(y.size() == stack_.size(), "GramOperator::apply: length mismatch");
  if (gram_) return *gram_ * y;
  return stack_.apply(stack_.adjoint(y)) + shift_ * y;
}

Vec GramOperator::solve_direct(const Vec& r) const {
  require(chol_.has_value(), "GramOperator: no Cholesky factorization available");
  return chol_->solve(r);
}

Vec apply_precond_inverse(const SpectralPreconditioner& pc, const Vec& v) {
  const int k = pc.rank();
  require(k >= 1, "apply_precond_inverse: empty preconditioner");
  const double lam_k = pc.lambdas(k - 1);
  Vec w = v / lam_k;
  if (k > 1) {
    Vec coef = pc.vectors.leftCols(k - 1).transpose() * v;
    for (int i = 0; i < k - 1; ++i) coef(i) *= 1.0 / lam_k - 1.0 / pc.lambdas(i);
    w -= pc.vectors.leftCols(k - 1) * coef;
  }
  return w;
}

Mat assemble_precond_dense(const SpectralPreconditioner& pc, int m) {
  const int k = pc.rank();
  const double lam_k = pc.lambdas(k - 1);
  Mat b = lam_k * Mat::Identity(m, m);
  for (int i = 0; i < k; ++i) {
    b += (pc.lambdas(i) - lam_k) * pc.vectors.col(i) * pc.vectors.col(i).transpose();
  }
  return b;
}

namespace {

// Thick-restart Lanczos with full reorthogonalization. Returns the top-k
// eigenpairs of the operator with true residuals <= tol * lambda_1.
bool lanczos_topk(const GramOperator& b, int k, double tol, Vec& values, Mat& vectors) {
  const int m = b.size();
  const int ncv = std::min(m, std::max(2 * k + 12, 40));
  const int max_restarts = 80;

  std::mt19937_64 rng(0x5df2a1u);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Mat v(m, ncv + 1);
  Mat t = Mat::Zero(ncv, ncv);
  int kept = 0;  // leading columns of v hold ritz vectors after a restart

  Vec w(m);
  for (int i = 0; i < m; ++i) w(i) = gauss(rng);
  v.col(0) = w / w.norm();

  values.resize(0);
  vectors.resize(m, 0);

  for (int restart = 0; restart < max_restarts; ++restart) {
    double beta_last = 0.0;
    for (int j = kept; j < ncv; ++j) {
      w = b.apply(v.col(j));
      t(j, j) = v.col(j).dot(w);
      // full reorthogonalization, two passes; records live in t already
      for (int pass = 0; pass < 2; ++pass)
        w -= v.leftCols(j + 1) * (v.leftCols(j + 1).transpose() * w);
      double beta = w.norm();
      if (beta < 1e-13) {  // invariant subspace hit; refresh randomly
        for (int i = 0; i < m; ++i) w(i) = gauss(rng);
        for (int pass = 0; pass < 2; ++pass)
          w -= v.leftCols(j + 1) * (v.leftCols(j + 1).transpose() * w);
        beta = w.norm();
        if (beta < 1e-300) break;
        v.col(j + 1) = w / beta;
        beta_last = 0.0;
        if (j + 1 < ncv) t(j, j + 1) = t(j + 1, j) = 0.0;
        continue;
      }
      v.col(j + 1) = w / beta;
      beta_last = beta;
      if (j + 1 < ncv) t(j, j + 1) = t(j + 1, j) = beta;
    }

    Eigen::SelfAdjointEigenSolver<Mat> es(t);
    if (es.info() != Eigen::Success) return false;
    Vec theta = es.eigenvalues().reverse();
    Mat s(ncv, ncv);
    for (int c = 0; c < ncv; ++c) s.col(c) = es.eigenvectors().col(ncv - 1 - c);

    const double scale = std::max(std::abs(theta(0)), 1e-30);
    const int want = std::min(k, m);
    const int nr = std::min(ncv, want + 8);
    Mat ritz = v.leftCols(ncv) * s.leftCols(nr);
    int converged = 0;
    while (converged < want) {
      const double res =
          (b.apply(ritz.col(converged)) - theta(converged) * ritz.col(converged)).norm();
      if (res > tol * scale) break;
      ++converged;
    }
    if (converged >= want) {
      values = theta.head(want);
      vectors = ritz.leftCols(want);
      return true;
    }
    values = theta.head(std::max(converged, 1));
    vectors = ritz.leftCols(std::max(converged, 1));

    // thick restart: keep leading ritz vectors plus the residual direction
    kept = std::min(nr, ncv - 2);
    Vec arrow = beta_last * s.row(ncv - 1).head(kept).transpose();
    v.leftCols(kept) = ritz.leftCols(kept);
    v.col(kept) = v.col(ncv);  // unit residual vector of the factorization
    t.setZero();
    for (int i = 0; i < kept; ++i) {
      t(i, i) = theta(i);
      t(i, kept) = t(kept, i) = arrow(i);
    }
  }
  return false;
}

}  // namespace

SpectralPreconditioner build_preconditioner(const GramOperator& b, int k, int dense_threshold) {
  const int m = b.size();
  require(k >= 1, "build_preconditioner: k must be >= 1");
  k = std::min(k, m);

  Vec values;
  Mat vectors;
  if (m <= dense_threshold) {
    Mat bm;
    if (b.explicit_matrix()) {
      bm = *b.explicit_matrix();
    } else {
      bm.resize(m, m);
      for (int i = 0; i < m; ++i) {
        Vec e = Vec::Zero(m);
        e(i) = 1.0;
        bm.col(i) = b.apply(e);
      }
    }
    EigenDecomp d = sym_eig(bm);
    values = d.values.head(k);
    vectors = d.vectors.leftCols(k);
  } else {
    if (!lanczos_topk(b, k, 1e-8, values, vectors)) {
      require(values.size() >= 1,
              "build_preconditioner: eigen-iteration produced no converged pair");
      const int k_small = static_cast<int>(values.size());
      std::fprintf(stderr,
                   "build_preconditioner: eigen-iteration unconverged, shrinking k to %d\n",
                   k_small);
      k = k_small;
      values = values.head(k).eval();
      vectors = vectors.leftCols(k).eval();
    }
  }
  // drop trailing non-positive eigenvalues
  int keep = 0;
  while (keep < values.size() && values(keep) > 0.0) ++keep;
  if (keep < k) {
    std::fprintf(stderr, "build_preconditioner: lambda_%d <= 0, shrinking k to %d\n", keep + 1,
                 keep);
    require(keep >= 1, "build_preconditioner: operator has no positive eigenvalue");
  }
  SpectralPreconditioner pc;
  pc.lambdas = values.head(std::max(keep, 1));
  pc.vectors = vectors.leftCols(std::max(keep, 1));
  return pc;
}

CertifiedSolve pcg_solve(const GramOperator& b, const Vec& r, const PcgOptions& opts) {
  const int m = b.size();
  require(r.size() == m, "pcg_solve: rhs length mismatch");
  require(opts.tol_abs > 0.0, "pcg_solve: tol_abs must be positive");
  const int cap = opts.max_iter > 0 ? opts.max_iter : 5 * m;

  CertifiedSolve out;
  out.solution = opts.warm_start ? *opts.warm_start : Vec::Zero(m);
  Vec res = r - b.apply(out.solution);
  if (res.norm() <= opts.tol_abs) {
    out.residual = res;
    out.iterations = 0;
    return out;
  }

  Vec z = opts.precond ? apply_precond_inverse(*opts.precond, res) : res;
  Vec p = z;
  double rz = res.dot(z);
  int it = 0;
  while (it < cap) {
    const Vec bp = b.apply(p);
    const double pbp = p.dot(bp);
    if (!(pbp > 0.0)) {
      if (p.norm() <= 1e-14 * (1.0 + out.solution.norm())) break;  // stagnated at solution
      throw Error("pcg_solve: operator is not positive definite");
    }
    const double step = rz / pbp;
    out.solution += step * p;
    res -= step * bp;
    ++it;
    if (res.norm() <= opts.tol_abs) {
      // recurrence residual can drift; certify against a fresh evaluation
      Vec exact = r - b.apply(out.solution);
      if (exact.norm() <= opts.tol_abs) break;
      res = exact;
    }
    z = opts.precond ? apply_precond_inverse(*opts.precond, res) : res;
    const double rz_new = res.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  out.residual = r - b.apply(out.solution);
  out.iterations = it;
  out.certified = out.residual.norm() <= opts.tol_abs;
  return out;
}

CertifiedSolve solve_certified(const GramOperator& b, const Vec& r, double tol_abs,
                               SolveStrategy strategy, const SpectralPreconditioner* pc,
                               const Vec* warm_start) {
  if (strategy == SolveStrategy::kAuto)
    strategy = b.has_factorization() ? SolveStrategy::kDirect : SolveStrategy::kPcg;
  if (strategy == SolveStrategy::kDirect) {
    CertifiedSolve out;
    out.solution = b.solve_direct(r);  // throws when B has no factorization
    out.residual = Vec::Zero(r.size());
    out.iterations = 0;
    return out;
  }
  PcgOptions opts;
  opts.tol_abs = tol_abs;
  opts.precond = pc;
  opts.warm_start = warm_start;
  return pcg_solve(b, r, opts);
}

}  // namespace lssdp
