#pragma once

#include <optional>

#include "lssdp/linalg.hpp"
#include "lssdp/types.hpp"

namespace lssdp {

// A linear-system solution paired with its exact residual vector.
struct CertifiedSolve {
  Vec solution;
  Vec residual;  // r - B y; exactly zero by convention on the direct path
  int iterations = 0;
  bool certified = true;
};

enum class SolveStrategy { kAuto, kDirect, kPcg };

// B = A A* + shift I. The Gram matrix is formed explicitly and Cholesky
// factored when m <= explicit_threshold; above it only operator
// application is available and solves go through PCG.
class GramOperator {
 public:
  GramOperator(ConstraintStack stack, double shift, int explicit_threshold = 4000);

  int size() const { return stack_.size(); }
  double shift() const { return shift_; }
  const ConstraintStack& stack() const { return stack_; }
  bool has_factorization() const { return chol_.has_value(); }
  const Mat* explicit_matrix() const { return gram_ ? &*gram_ : nullptr; }

  Vec apply(const Vec& y) const;
  // Direct solve; throws when no factorization is available.
  Vec solve_direct(const Vec& r) const;

 private:
  ConstraintStack stack_;
  double shift_ = 0.0;
  std::optional<Mat> gram_;
  std::optional<CholeskyFactor> chol_;
};

// Leading-eigenpair preconditioner
//   Btilde = sum_{i<=k} lambda_i P_i P_i^T + lambda_k sum_{i>k} P_i P_i^T,
// applied through the closed form
//   Btilde^{-1} = lambda_k^{-1} I - sum_{i<k} (lambda_k^{-1} - lambda_i^{-1}) P_i P_i^T.
struct SpectralPreconditioner {
  Vec lambdas;  // descending, all > 0
  Mat vectors;  // m x k, orthonormal columns

  int rank() const { return static_cast<int>(lambdas.size()); }
};

Vec apply_precond_inverse(const SpectralPreconditioner& pc, const Vec& v);
Mat assemble_precond_dense(const SpectralPreconditioner& pc, int m);

// Top-k eigenpairs of B to relative accuracy ~1e-8: dense decomposition for
// m <= dense_threshold, restarted Lanczos with full reorthogonalization
// above. Shrinks k (with a stderr warning) when trailing eigenvalues are
// not positive or the iteration stagnates.
SpectralPreconditioner build_preconditioner(const GramOperator& b, int k,
                                            int dense_threshold = 500);

struct PcgOptions {
  double tol_abs = 1e-10;
  int max_iter = -1;  // default 5m
  const SpectralPreconditioner* precond = nullptr;
  const Vec* warm_start = nullptr;
};

// Conjugate gradients on B y = r, stopping on the true residual norm.
// The returned residual is a fresh evaluation of r - B y.
CertifiedSolve pcg_solve(const GramOperator& b, const Vec& r, const PcgOptions& opts);

// Strategy dispatch: direct when a factorization is cached (residual
// reported as exactly zero), PCG otherwise. Forced strategies fail loudly
// rather than falling back.
CertifiedSolve solve_certified(const GramOperator& b, const Vec& r, double tol_abs,
                               SolveStrategy strategy = SolveStrategy::kAuto,
                               const SpectralPreconditioner* pc = nullptr,
                               const Vec* warm_start = nullptr);

}  // namespace lssdp
