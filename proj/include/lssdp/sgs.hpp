#pragma once

#include <functional>
#include <vector>

#include "lssdp/linalg.hpp"
#include "lssdp/types.hpp"

namespace lssdp {

// Block vector x = (x_1, ..., x_s).
using BlockVec = std::vector<Vec>;

BlockVec block_zero(const std::vector<int>& dims);
BlockVec block_add(const BlockVec& a, const BlockVec& b);
BlockVec block_sub(const BlockVec& a, const BlockVec& b);
double block_inner(const BlockVec& a, const BlockVec& b);
double block_norm(const BlockVec& a);
Vec block_flatten(const BlockVec& a);
BlockVec block_split(const Vec& x, const std::vector<int>& dims);

// A multi-block self-adjoint PSD quadratic h(x) = 1/2 <x, Qx> - <r, x>
// with positive definite diagonal blocks, presented operationally:
// solvers for Q_ii, applications of Q_ii, and applications of Q_ij / Q_ij^*
// for i < j. Solvers report the exact residual they achieved.
class BlockQuadratic {
 public:
  struct DiagSolve {
    Vec x;
    Vec residual;  // rhs - Q_ii x, exact
  };

  // solve(i, rhs, tol): return x with ||rhs - Q_ii x|| <= tol.
  using DiagSolver = std::function<DiagSolve(int, const Vec&, double)>;
  // apply_diag(i, v) = Q_ii v
  using DiagApply = std::function<Vec(int, const Vec&)>;
  // apply_upper(i, j, v) = Q_ij v for i < j;  apply_upper_adj(i, j, v) = Q_ij^* v
  using OffDiagApply = std::function<Vec(int, int, const Vec&)>;

  BlockQuadratic(std::vector<int> dims, DiagSolver solve, DiagApply apply_diag,
                 OffDiagApply apply_upper, OffDiagApply apply_upper_adj,
                 BlockVec linear_term);

  int blocks() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  int total_dim() const { return total_; }
  const BlockVec& linear_term() const { return r_; }

  DiagSolve solve_diag(int i, const Vec& rhs, double tol) const { return solve_(i, rhs, tol); }
  Vec apply_diag(int i, const Vec& v) const { return apply_diag_(i, v); }
  Vec apply_upper(int i, int j, const Vec& v) const { return apply_upper_(i, j, v); }
  Vec apply_upper_adj(int i, int j, const Vec& v) const { return apply_upper_adj_(i, j, v); }

  // Dense assembly of Q (test/diagnostic use; guarded by a dimension cap).
  Mat assemble_q_dense(int dim_cap = 200) const;

 private:
  std::vector<int> dims_;
  int total_ = 0;
  DiagSolver solve_;
  DiagApply apply_diag_;
  OffDiagApply apply_upper_;
  OffDiagApply apply_upper_adj_;
  BlockVec r_;
};

// Convenience: wrap a dense symmetric matrix with PD diagonal blocks.
// Diagonal solves run CG truncated at the requested tolerance so that the
// recorded residuals are genuinely nonzero when tol is loose.
BlockQuadratic make_dense_block_quadratic(const Mat& q, const std::vector<int>& dims,
                                          const BlockVec& linear_term,
                                          bool exact_diag_solves = true);

// delta_hat_1 is identically zero; delta_plus has one entry per block.
struct ErrorVectors {
  BlockVec hat_delta;
  BlockVec delta_plus;
};

struct SweepResult {
  BlockVec x_plus;
  BlockVec x_hat;  // backward-pass points (x_hat_1 unused)
  ErrorVectors errors;
  double xi_bound = 0.0;
  std::vector<int> touch_order;  // block indices in visit order, 1-based
};

// Exact prox map for the nonsmooth term p on block 1:
// prox1(rhs) = argmin_{x_1} p(x_1) + 1/2 <x_1, Q_11 x_1> - <rhs, x_1>.
using Prox1 = std::function<Vec(const Vec& rhs)>;

// Identity p = 0: plain diagonal solve (must be exact; uses tol 0 semantics).
Prox1 make_linear_prox1(const BlockQuadratic& q);

// One symmetric Gauss-Seidel pass: backward solves x_hat_s..x_hat_2, the
// exact prox on block 1, then forward solves x_2..x_s. The achieved solve
// residuals are recorded as the error vectors; the returned x_plus is the
// exact minimizer of p(x_1) + h(x) + 1/2||x-y||_T^2 - <Delta(dhat,dplus), x>
// with T = U D^{-1} U^*.
SweepResult sgs_sweep(const BlockQuadratic& q, const BlockVec& y, const Prox1& prox1,
                      double inner_tol);

// Delta(dhat, dplus) = dplus + U D^{-1} (dplus - dhat), together with the
// certificate bound  ||D^{-1/2}(dplus - dhat)|| + ||H^{-1/2} dhat||  on
// xi = ||H^{-1/2} Delta||.
struct DeltaComposite {
  BlockVec delta;
  double xi_bound = 0.0;
};
DeltaComposite delta_composite(const BlockQuadratic& q, const ErrorVectors& errors);

// H = Q + T = (D + U) D^{-1} (D + U^*), assembled densely by composing the
// block applications on unit vectors. Test use only; throws when the total
// dimension exceeds dim_cap or H is not positive definite.
Mat assemble_H_dense(const BlockQuadratic& q, int dim_cap = 200);

}  // namespace lssdp
