#include <cmath>

#include "lssdp/solvers.hpp"

namespace lssdp {

namespace {

// Flatten (S, y_I, y_E) in the sweep's block order; the trace inner product
// on S^n matches the Euclidean one on the full n^2 vector.
Vec flatten_sweep_point(const DualPoint& pt, const LssdpInstance& inst) {
  const int n = inst.n();
  Vec x(n * n + inst.mi() + inst.me());
  for (int j = 0; j < n; ++j) x.segment(j * n, n) = pt.s.col(j);
  x.segment(n * n, inst.mi()) = pt.y_i;
  x.segment(n * n + inst.mi(), inst.me()) = pt.y_e;
  return x;
}

Mat stack_rows_dense(const ConstraintStack& stack) {
  const int n = stack.dim();
  Mat rows(stack.size(), n * n);
  for (int r = 0; r < stack.size(); ++r) {
    const Mat d = stack.mat(r).dense();
    for (int j = 0; j < n; ++j) rows.block(r, j * n, 1, n) = d.col(j).transpose();
  }
  return rows;
}

}  // namespace

Mat instance_H_dense(const LssdpInstance& inst, int dim_cap) {
  const int n2 = inst.n() * inst.n();
  const int mi = inst.mi();
  const int me = inst.me();
  const int total = n2 + mi + me;
  require(total <= dim_cap, "instance_H_dense: dimension cap exceeded");

  const Mat ae = stack_rows_dense(inst.a_e);
  const Mat ai = mi > 0 ? stack_rows_dense(inst.a_i) : Mat::Zero(0, n2);

  // blocks (S, y_I, y_E): D_1 = I, D_2 = A_I A_I^T + I, D_3 = A_E A_E^T;
  // U_12 = A_I^T, U_13 = A_E^T, U_23 = A_I A_E^T
  Mat du = Mat::Zero(total, total);
  du.topLeftCorner(n2, n2) = Mat::Identity(n2, n2);
  du.block(0, n2, n2, mi) = ai.transpose();
  du.block(0, n2 + mi, n2, me) = ae.transpose();
  if (mi > 0) {
    du.block(n2, n2, mi, mi) = ai * ai.transpose() + Mat::Identity(mi, mi);
    du.block(n2, n2 + mi, mi, me) = ai * ae.transpose();
  }
  du.block(n2 + mi, n2 + mi, me, me) = ae * ae.transpose();

  Mat d = Mat::Zero(total, total);
  d.topLeftCorner(n2, n2) = Mat::Identity(n2, n2);
  if (mi > 0) d.block(n2, n2, mi, mi) = du.block(n2, n2, mi, mi);
  d.block(n2 + mi, n2 + mi, me, me) = du.block(n2 + mi, n2 + mi, me, me);

  Eigen::LLT<Mat> dllt(d);
  require(dllt.info() == Eigen::Success, "instance_H_dense: D not positive definite");
  return symmetrize(du * dllt.solve(du.transpose()));
}

ComplexityCertificate make_certificate(const LssdpInstance& inst, const DualPoint& x0,
                                       const DualPoint& x_star, double f_star,
                                       const ToleranceSchedule& sched, int k_max, int dim_cap) {
  ComplexityCertificate cert;
  cert.f_star = f_star;

  const Mat h = instance_H_dense(inst, dim_cap);
  const Vec diff = flatten_sweep_point(x0, inst) - flatten_sweep_point(x_star, inst);
  cert.tau = 0.5 * diff.dot(h * diff);

  // ||D^{-1/2}|| and ||H^{-1/2}|| from the smallest eigenvalues
  double lmin_d = 1.0;  // S block contributes lambda_min = 1
  if (inst.mi() > 0) {
    EigenDecomp di = sym_eig(inst.a_i.gram(1.0));
    lmin_d = std::min(lmin_d, di.values(di.values.size() - 1));
  }
  EigenDecomp de = sym_eig(inst.a_e.gram(0.0));
  lmin_d = std::min(lmin_d, de.values(de.values.size() - 1));
  require(lmin_d > 0.0, "make_certificate: D is singular");

  EigenDecomp dh = sym_eig(h);
  const double lmin_h = dh.values(dh.values.size() - 1);
  require(lmin_h > 0.0, "make_certificate: H is singular");
  cert.beta_const = 2.0 / std::sqrt(lmin_d) + 1.0 / std::sqrt(lmin_h);

  cert.eps_bar.resize(k_max + 1, 0.0);
  cert.eps_tilde.resize(k_max + 1, 0.0);
  for (int k = 1; k <= k_max; ++k) {
    const double e = epsilon_at(sched, k);
    cert.eps_bar[k] = cert.eps_bar[k - 1] + e;
    cert.eps_tilde[k] = cert.eps_tilde[k - 1] + e * e;
  }
  return cert;
}

std::vector<int> complexity_check(const SolveReport& report, const ComplexityCertificate& cert,
                                  double slack) {
  std::vector<int> violations;
  for (const TracePoint& tp : report.trace) {
    if (tp.k >= static_cast<int>(cert.eps_bar.size())) break;
    const double eb = cert.eps_bar[tp.k];
    const double et = cert.eps_tilde[tp.k];
    const double root = std::sqrt(std::max(cert.tau, 0.0)) + cert.beta_const * eb;
    const double bound =
        slack * 4.0 * (root * root + 2.0 * cert.beta_const * cert.beta_const * et) /
        ((tp.k + 1.0) * (tp.k + 1.0));
    const double gap = tp.objective - cert.f_star;
    if (gap > bound) violations.push_back(tp.k);
  }
  return violations;
}

}  // namespace lssdp
