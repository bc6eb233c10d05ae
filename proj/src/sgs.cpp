#include "lssdp/sgs.hpp"

#include <cmath>
#include <memory>
#include <numeric>

namespace lssdp {

BlockVec block_zero(const std::vector<int>& dims) {
  BlockVec x(dims.size());
  for (size_t i = 0; i < dims.size(); ++i) x[i] = Vec::Zero(dims[i]);
  return x;
}

BlockVec block_add(const BlockVec& a, const BlockVec& b) {
  require(a.size() == b.size(), "block_add: block count mismatch");
  BlockVec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

BlockVec block_sub(const BlockVec& a, const BlockVec& b) {
  require(a.size() == b.size(), "block_sub: block count mismatch");
  BlockVec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

double block_inner(const BlockVec& a, const BlockVec& b) {
  require(a.size() == b.size(), "block_inner: block count mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

double block_norm(const BlockVec& a) { return std::sqrt(std::max(0.0, block_inner(a, a))); }

Vec block_flatten(const BlockVec& a) {
  int total = 0;
  for (const auto& v : a) total += static_cast<int>(v.size());
  Vec x(total);
  int at = 0;
  for (const auto& v : a) {
    x.segment(at, v.size()) = v;
    at += static_cast<int>(v.size());
  }
  return x;
}

BlockVec block_split(const Vec& x, const std::vector<int>& dims) {
  BlockVec a(dims.size());
  int at = 0;
  for (size_t i = 0; i < dims.size(); ++i) {
    a[i] = x.segment(at, dims[i]);
    at += dims[i];
  }
  require(at == x.size(), "block_split: dimension mismatch");
  return a;
}

BlockQuadratic::BlockQuadratic(std::vector<int> dims, DiagSolver solve, DiagApply apply_diag,
                               OffDiagApply apply_upper, OffDiagApply apply_upper_adj,
                               BlockVec linear_term)
    : dims_(std::move(dims)),
      solve_(std::move(solve)),
      apply_diag_(std::move(apply_diag)),
      apply_upper_(std::move(apply_upper)),
      apply_upper_adj_(std::move(apply_upper_adj)),
      r_(std::move(linear_term)) {
  require(dims_.size() >= 2, "BlockQuadratic: need at least two blocks");
  require(r_.size() == dims_.size(), "BlockQuadratic: linear term block count mismatch");
  for (size_t i = 0; i < dims_.size(); ++i) {
    require(dims_[i] >= 1, "BlockQuadratic: empty block");
    require(r_[i].size() == dims_[i], "BlockQuadratic: linear term dimension mismatch");
  }
  total_ = std::accumulate(dims_.begin(), dims_.end(), 0);
}

Mat BlockQuadratic::assemble_q_dense(int dim_cap) const {
  require(total_ <= dim_cap, "assemble_q_dense: dimension cap exceeded");
  const int s = blocks();
  std::vector<int> offset(s, 0);
  for (int i = 1; i < s; ++i) offset[i] = offset[i - 1] + dims_[i - 1];
  Mat q = Mat::Zero(total_, total_);
  for (int i = 0; i < s; ++i) {
    for (int k = 0; k < dims_[i]; ++k) {
      Vec e = Vec::Zero(dims_[i]);
      e(k) = 1.0;
      q.block(offset[i], offset[i] + k, dims_[i], 1) = apply_diag_(i, e);
      for (int j = i + 1; j < s; ++j) {
        // column k of Q_ij^* is row k of Q_ij
        q.block(offset[j], offset[i] + k, dims_[j], 1) = apply_upper_adj_(i, j, e);
      }
    }
  }
  // mirror lower triangle into upper
  for (int a = 0; a < total_; ++a)
    for (int b = a + 1; b < total_; ++b) q(a, b) = q(b, a);
  return q;
}

namespace {

constexpr double kTightTol = 1e-14;

Vec cg_to_tol(const Mat& a, const Vec& rhs, double tol, int max_iter) {
  Vec x = Vec::Zero(rhs.size());
  Vec res = rhs;
  if (res.norm() <= tol) return x;
  Vec p = res;
  double rr = res.squaredNorm();
  for (int it = 0; it < max_iter; ++it) {
    Vec ap = a * p;
    const double alpha = rr / p.dot(ap);
    x += alpha * p;
    res -= alpha * ap;
    const double rr_new = res.squaredNorm();
    if (std::sqrt(rr_new) <= tol) break;
    p = res + (rr_new / rr) * p;
    rr = rr_new;
  }
  return x;
}

}  // namespace

BlockQuadratic make_dense_block_quadratic(const Mat& q, const std::vector<int>& dims,
                                          const BlockVec& linear_term,
                                          bool exact_diag_solves) {
  require(is_symmetric(q, 1e-10), "make_dense_block_quadratic: Q must be symmetric");
  const int s = static_cast<int>(dims.size());
  auto offsets = std::make_shared<std::vector<int>>(s, 0);
  for (int i = 1; i < s; ++i) (*offsets)[i] = (*offsets)[i - 1] + dims[i - 1];
  require((*offsets)[s - 1] + dims[s - 1] == q.rows(),
          "make_dense_block_quadratic: block dims do not sum to matrix size");

  auto qm = std::make_shared<Mat>(symmetrize(q));
  auto diag_blocks = std::make_shared<std::vector<Mat>>();
  auto diag_llt = std::make_shared<std::vector<CholeskyFactor>>();
  for (int i = 0; i < s; ++i) {
    diag_blocks->push_back(qm->block((*offsets)[i], (*offsets)[i], dims[i], dims[i]));
    diag_llt->emplace_back(diag_blocks->back());  // throws if Q_ii not PD
  }

  auto solver = [qm, offsets, diag_blocks, diag_llt, exact_diag_solves](
                    int i, const Vec& rhs, double tol) -> BlockQuadratic::DiagSolve {
    Vec x;
    if (exact_diag_solves) {
      x = (*diag_llt)[i].solve(rhs);
    } else {
      x = cg_to_tol((*diag_blocks)[i], rhs, std::max(tol, 0.0), 40 * static_cast<int>(rhs.size()));
      if ((rhs - (*diag_blocks)[i] * x).norm() > tol) x = (*diag_llt)[i].solve(rhs);
    }
    return {x, rhs - (*diag_blocks)[i] * x};
  };
  auto apply_diag = [diag_blocks](int i, const Vec& v) -> Vec { return (*diag_blocks)[i] * v; };
  auto apply_upper = [qm, offsets, dims](int i, int j, const Vec& v) -> Vec {
    return qm->block((*offsets)[i], (*offsets)[j], dims[i], dims[j]) * v;
  };
  auto apply_upper_adj = [qm, offsets, dims](int i, int j, const Vec& v) -> Vec {
    return qm->block((*offsets)[i], (*offsets)[j], dims[i], dims[j]).transpose() * v;
  };
  return BlockQuadratic(dims, solver, apply_diag, apply_upper, apply_upper_adj, linear_term);
}

Prox1 make_linear_prox1(const BlockQuadratic& q) {
  const BlockQuadratic* qp = &q;
  return [qp](const Vec& rhs) -> Vec {
    return qp->solve_diag(0, rhs, kTightTol * (1.0 + rhs.norm())).x;
  };
}

SweepResult sgs_sweep(const BlockQuadratic& q, const BlockVec& y, const Prox1& prox1,
                      double inner_tol) {
  const int s = q.blocks();
  require(static_cast<int>(y.size()) == s, "sgs_sweep: block count mismatch");
  for (int i = 0; i < s; ++i)
    require(y[i].size() == q.dims()[i], "sgs_sweep: block dimension mismatch");
  require(inner_tol >= 0.0, "sgs_sweep: inner_tol must be nonnegative");

  SweepResult out;
  out.x_hat = y;
  out.x_plus = y;
  out.errors.hat_delta = block_zero(q.dims());
  out.errors.delta_plus = block_zero(q.dims());
  const BlockVec& r = q.linear_term();

  // backward pass: x_hat_s, ..., x_hat_2
  for (int i = s - 1; i >= 1; --i) {
    Vec rhs = r[i];
    for (int j = 0; j < i; ++j) rhs -= q.apply_upper_adj(j, i, y[j]);
    for (int j = i + 1; j < s; ++j) rhs -= q.apply_upper(i, j, out.x_hat[j]);
    auto sol = q.solve_diag(i, rhs, inner_tol);
    require(sol.residual.norm() <= inner_tol * (1.0 + 1e-9),
            "sgs_sweep: diagonal solver missed the requested tolerance");
    out.x_hat[i] = sol.x;
    out.errors.hat_delta[i] = -sol.residual;  // x_hat_i solves Q_ii x = rhs + dhat_i exactly
    out.touch_order.push_back(i + 1);
  }

  // block 1: exact prox (delta_plus_1 stays zero)
  {
    Vec rhs = r[0];
    for (int j = 1; j < s; ++j) rhs -= q.apply_upper(0, j, out.x_hat[j]);
    out.x_plus[0] = prox1(rhs);
    out.touch_order.push_back(1);
  }

  // forward pass: x_2, ..., x_s
  for (int i = 1; i < s; ++i) {
    Vec rhs = r[i];
    for (int j = 0; j < i; ++j) rhs -= q.apply_upper_adj(j, i, out.x_plus[j]);
    for (int j = i + 1; j < s; ++j) rhs -= q.apply_upper(i, j, out.x_hat[j]);
    auto sol = q.solve_diag(i, rhs, inner_tol);
    require(sol.residual.norm() <= inner_tol * (1.0 + 1e-9),
            "sgs_sweep: diagonal solver missed the requested tolerance");
    out.x_plus[i] = sol.x;
    out.errors.delta_plus[i] = -sol.residual;
    out.touch_order.push_back(i + 1);
  }

  out.xi_bound = delta_composite(q, out.errors).xi_bound;
  return out;
}

DeltaComposite delta_composite(const BlockQuadratic& q, const ErrorVectors& errors) {
  const int s = q.blocks();
  require(static_cast<int>(errors.hat_delta.size()) == s &&
              static_cast<int>(errors.delta_plus.size()) == s,
          "delta_composite: block count mismatch");
  require(errors.hat_delta[0].isZero(0.0), "delta_composite: hat_delta_1 must be zero");

  const BlockVec w = block_sub(errors.delta_plus, errors.hat_delta);
  // u = D^{-1} w
  BlockVec u(s);
  double wu = 0.0;
  for (int i = 0; i < s; ++i) {
    u[i] = q.solve_diag(i, w[i], kTightTol * (1.0 + w[i].norm())).x;
    wu += w[i].dot(u[i]);
  }
  DeltaComposite out;
  out.delta = errors.delta_plus;
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j) out.delta[i] += q.apply_upper(i, j, u[j]);

  // a = (D + U)^{-1} hat_delta via block back-substitution
  BlockVec a(s);
  double ada = 0.0;
  for (int i = s - 1; i >= 0; --i) {
    Vec rhs = errors.hat_delta[i];
    for (int j = i + 1; j < s; ++j) rhs -= q.apply_upper(i, j, a[j]);
    a[i] = q.solve_diag(i, rhs, kTightTol * (1.0 + rhs.norm())).x;
    ada += a[i].dot(q.apply_diag(i, a[i]));
  }
  out.xi_bound = std::sqrt(std::max(0.0, wu)) + std::sqrt(std::max(0.0, ada));
  return out;
}

Mat assemble_H_dense(const BlockQuadratic& q, int dim_cap) {
  require(q.total_dim() <= dim_cap, "assemble_H_dense: dimension cap exceeded");
  const int s = q.blocks();
  const int n = q.total_dim();
  std::vector<int> offset(s, 0);
  for (int i = 1; i < s; ++i) offset[i] = offset[i - 1] + q.dims()[i - 1];

  // D + U, dense
  Mat du = Mat::Zero(n, n);
  for (int i = 0; i < s; ++i) {
    for (int k = 0; k < q.dims()[i]; ++k) {
      Vec e = Vec::Zero(q.dims()[i]);
      e(k) = 1.0;
      du.block(offset[i], offset[i] + k, q.dims()[i], 1) = q.apply_diag(i, e);
    }
    for (int j = i + 1; j < s; ++j) {
      for (int k = 0; k < q.dims()[j]; ++k) {
        Vec e = Vec::Zero(q.dims()[j]);
        e(k) = 1.0;
        du.block(offset[i], offset[j] + k, q.dims()[i], 1) = q.apply_upper(i, j, e);
      }
    }
  }
  // D^{-1} (D + U^*) by block solves on the columns of (D + U)^T
  Mat rhs = du.transpose();
  Mat dinv_rhs(n, n);
  for (int i = 0; i < s; ++i) {
    for (int c = 0; c < n; ++c) {
      Vec col = rhs.block(offset[i], c, q.dims()[i], 1);
      dinv_rhs.block(offset[i], c, q.dims()[i], 1) =
          q.solve_diag(i, col, kTightTol * (1.0 + col.norm())).x;
    }
  }
  Mat h = symmetrize(du * dinv_rhs);
  Eigen::LLT<Mat> llt(h);
  require(llt.info() == Eigen::Success,
          "assemble_H_dense: H is not positive definite (some Q_ii not PD?)");
  return h;
}

}  // namespace lssdp
