#pragma once

#include <string>

#include "lssdp/cones.hpp"
#include "lssdp/linalg.hpp"
#include "lssdp/types.hpp"

namespace lssdp {

// Full data of the least squares SDP pair
//   (P) min 1/2||X-G||^2 + 1/2||s-g||^2
//       s.t. A_E(X) = b_E, A_I(X) - s = 0, X PSD, X in P, s in K
// and its dual in the five blocks (Z, v, S, y_E, y_I).
struct LssdpInstance {
  std::string name;
  std::string family;

  ConstraintStack a_e;
  ConstraintStack a_i;  // size 0 when there are no inequalities
  Vec b_e;
  Mat big_g;
  Vec small_g;  // length m_I
  MatBox p_box;
  VecBox k_box;
  double gamma = 1.0;  // scale factor applied by rescale()

  int n() const { return a_e.dim(); }
  int me() const { return a_e.size(); }
  int mi() const { return a_i.size(); }
  bool has_ineq() const { return mi() > 0; }

  // Dimension/symmetry/box checks plus the A_E surjectivity rank check.
  void validate() const;
};

// G = -C, g = 0, everything else carried over; rescaling applied.
LssdpInstance from_sdp(const Mat& c, ConstraintStack a_e, Vec b_e, ConstraintStack a_i,
                       MatBox p_box, VecBox k_box, const std::string& name = "",
                       const std::string& family = "");

// Equivalent rescaled problem: when gamma = max{||G||, ||g||} > 1, divide
// G, g, b_E and both boxes' bounds by gamma. Identity otherwise.
LssdpInstance rescale(const LssdpInstance& inst);

// The dual objective F(Z, v, S, y_E, y_I); +inf encodes infeasibility
// (S not PSD, or a support function evaluating to +inf).
struct DualPoint {
  Mat z;
  Vec v;
  Mat s;
  Vec y_e;
  Vec y_i;
};

DualPoint zero_dual_point(const LssdpInstance& inst);

double eval_dual_objective(const DualPoint& pt, const LssdpInstance& inst,
                           bool check_s_psd = true);

// KKT residual eta = max{eta1, eta2, eta3} and the relative gap eta_g,
// together with the recovered primal objects.
struct KktReport {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta3 = 0.0;
  double eta = 0.0;
  double eta_g = 0.0;
  Mat x;
  Mat y;
  Vec s;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
};

KktReport kkt_residual(const DualPoint& pt, const LssdpInstance& inst);

}  // namespace lssdp
