#include "lssdp/instance.hpp"

#include <cmath>

namespace lssdp {

void LssdpInstance::validate() const {
  require(n() >= 1, "instance: empty variable");
  require(me() >= 1, "instance: A_E must have at least one row");
  require(b_e.size() == me(), "instance: b_E length mismatch");
  require(big_g.rows() == n() && big_g.cols() == n(), "instance: G dimension mismatch");
  require(is_symmetric(big_g, 1e-10), "instance: G must be symmetric");
  require(p_box.lower.rows() == n(), "instance: P box dimension mismatch");
  p_box.validate();
  if (has_ineq()) {
    require(a_i.dim() == n(), "instance: A_I dimension mismatch");
    require(small_g.size() == mi(), "instance: g length mismatch");
    require(k_box.lower.size() == mi(), "instance: K box dimension mismatch");
    k_box.validate();
  } else {
    require(small_g.size() == 0, "instance: g must be empty when m_I = 0");
  }

  // A_E must be onto: check the Gram matrix is numerically PD.
  const Mat gram = a_e.gram(0.0);
  EigenDecomp d = sym_eig(gram);
  const double lmax = d.values(0);
  const double lmin = d.values(d.values.size() - 1);
  if (!(lmax > 0.0) || lmin <= 1e-10 * lmax) {
    throw Error("instance '" + name + "': A_E is not surjective (A_E A_E* rank " +
                std::to_string((d.values.array() > 1e-10 * std::max(lmax, 1e-300)).count()) +
                " of " + std::to_string(me()) + ")");
  }
}

LssdpInstance from_sdp(const Mat& c, ConstraintStack a_e, Vec b_e, ConstraintStack a_i,
                       MatBox p_box, VecBox k_box, const std::string& name,
                       const std::string& family) {
  LssdpInstance inst;
  inst.name = name;
  inst.family = family;
  inst.a_e = std::move(a_e);
  inst.a_i = std::move(a_i);
  inst.b_e = std::move(b_e);
  inst.big_g = -symmetrize(c);
  inst.small_g = Vec::Zero(inst.a_i.size());
  inst.p_box = std::move(p_box);
  inst.k_box = std::move(k_box);
  inst.validate();
  return rescale(inst);
}

LssdpInstance rescale(const LssdpInstance& inst) {
  const double gamma = std::max(inst.big_g.norm(), inst.has_ineq() ? inst.small_g.norm() : 0.0);
  if (gamma <= 1.0) return inst;
  LssdpInstance out = inst;
  out.gamma = gamma;
  out.big_g /= gamma;
  out.small_g /= gamma;
  out.b_e /= gamma;
  out.p_box.lower /= gamma;  // {X : gamma X in P}
  out.p_box.upper /= gamma;
  out.k_box.lower /= gamma;
  out.k_box.upper /= gamma;
  return out;
}

DualPoint zero_dual_point(const LssdpInstance& inst) {
  DualPoint pt;
  pt.z = Mat::Zero(inst.n(), inst.n());
  pt.s = Mat::Zero(inst.n(), inst.n());
  pt.v = Vec::Zero(inst.mi());
  pt.y_e = Vec::Zero(inst.me());
  pt.y_i = Vec::Zero(inst.mi());
  return pt;
}

double eval_dual_objective(const DualPoint& pt, const LssdpInstance& inst, bool check_s_psd) {
  if (check_s_psd) {
    EigenDecomp d = sym_eig(pt.s);
    const double lmin = d.values(d.values.size() - 1);
    if (lmin < -1e-12 * std::max(1.0, d.values(0))) return kInf;
  }
  const double sup_p = support_value<Mat>(-pt.z, inst.p_box);
  if (std::isinf(sup_p)) return kInf;
  double f = -inst.b_e.dot(pt.y_e) + sup_p - 0.5 * inst.big_g.squaredNorm();
  Mat resid = inst.a_e.adjoint(pt.y_e) + pt.s + pt.z + inst.big_g;
  if (inst.has_ineq()) {
    const double sup_k = support_value<Vec>(-pt.v, inst.k_box);
    if (std::isinf(sup_k)) return kInf;
    resid += inst.a_i.adjoint(pt.y_i);
    f += sup_k + 0.5 * (inst.small_g + pt.v - pt.y_i).squaredNorm() -
         0.5 * inst.small_g.squaredNorm();
  }
  f += 0.5 * resid.squaredNorm();
  return f;
}

KktReport kkt_residual(const DualPoint& pt, const LssdpInstance& inst) {
  KktReport rep;
  Mat m = inst.a_e.adjoint(pt.y_e) + pt.z + inst.big_g;
  if (inst.has_ineq()) m += inst.a_i.adjoint(pt.y_i);
  rep.x = project_psd(m).first;
  rep.y = project_box<Mat>(m - pt.z + pt.s, inst.p_box);

  const Vec ax = inst.a_e.apply(rep.x);
  rep.eta1 = (inst.b_e - ax).norm() / (1.0 + inst.b_e.norm());
  rep.eta2 = (rep.x - rep.y).norm() / (1.0 + rep.x.norm());
  rep.eta = std::max(rep.eta1, rep.eta2);

  rep.primal_obj = 0.5 * (rep.x - inst.big_g).squaredNorm();
  if (inst.has_ineq()) {
    rep.s = project_box<Vec>(inst.small_g - pt.y_i, inst.k_box);
    rep.eta3 = (rep.s - inst.a_i.apply(rep.x)).norm() / (1.0 + rep.s.norm());
    rep.eta = std::max(rep.eta, rep.eta3);
    rep.primal_obj += 0.5 * (rep.s - inst.small_g).squaredNorm();
  } else {
    rep.s = Vec::Zero(0);
  }

  // (D) is a minimization whose optimal value is the negative of val(P);
  // the relative gap compares the primal objective with -F so it vanishes
  // at optimality.
  rep.dual_obj = eval_dual_objective(pt, inst, /*check_s_psd=*/false);
  rep.eta_g = (rep.primal_obj + rep.dual_obj) /
              (1.0 + rep.primal_obj + std::abs(rep.dual_obj));
  return rep;
}

}  // namespace lssdp
