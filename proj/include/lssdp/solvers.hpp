#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lssdp/instance.hpp"
#include "lssdp/linsolve.hpp"
#include "lssdp/sgs.hpp"

namespace lssdp {

enum class Algorithm { kAbcd, kApg, kEarbcg, kEarbcgScalar, kBcd };

std::string algorithm_name(Algorithm alg);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

// t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2, beta_k = (t_k - 1) / t_{k+1}.
// A step maps (t_k, beta_{k-1}) to (t_{k+1}, beta_k); beta climbs toward 1.
struct MomentumState {
  double t = 1.0;
  double beta = 0.0;
};
MomentumState momentum_step(const MomentumState& state);

// eps_k = base * k^{-exponent}; summable since exponent > 1.
struct ToleranceSchedule {
  double base = 1e-3;
  double exponent = 1.5;
};
double epsilon_at(const ToleranceSchedule& sched, int k);

enum class SolveStatus { kConverged, kMaxIter, kFailed };
std::string status_name(SolveStatus status);

struct TracePoint {
  int k = 0;
  double eta = 0.0;
  double eta_g = 0.0;
  double objective = 0.0;  // dual objective after a closed-form (Z, v) refresh
  double time_sec = 0.0;
};

struct SolverConfig {
  double tol = 1e-6;
  int max_iter = 25000;  // eARBCG runs q * max_iter single-block steps
  double eps_base = -1.0;  // < 0 means 1e-3 * (1 + ||G||)
  double eps_exponent = 1.5;
  SolveStrategy lin = SolveStrategy::kAuto;
  int precond_k = 20;
  bool use_precond = true;  // false runs plain CG on the PCG path
  std::uint64_t seed = 0;
  bool skip_rule_ratio = false;  // accept y = y_hat when ||delta|| <= c ||delta_hat||
  double skip_ratio_c = 10.0;
  int check_every = 1;  // KKT residual cadence (eARBCG defaults to q)
  bool record_trace = true;
};

struct SolveReport {
  std::string instance;
  std::string family;
  std::string algorithm;
  SolveStatus status = SolveStatus::kFailed;
  std::string message;
  int iterations = 0;
  double eta = kInf;
  double eta_g = kInf;
  double objective = kInf;
  double wall_sec = 0.0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  long pcg_iterations = 0;
  int pcg_solves = 0;
  int skip_hits = 0;
  std::vector<TracePoint> trace;
  DualPoint final_point;
};

// Run one algorithm on one (already rescaled) instance. `start` defaults to
// the all-zero dual point; `block_log`, when given, receives the per-pass
// block labels of the first iteration (order instrumentation).
SolveReport solve(const LssdpInstance& inst, Algorithm alg, const SolverConfig& cfg,
                  const DualPoint* start = nullptr,
                  std::vector<std::string>* block_log = nullptr);

// --- complexity certificate: O(1/k^2) objective-gap bound on toys ---

struct ComplexityCertificate {
  double tau = 0.0;         // 1/2 <x0 - x*, H (x0 - x*)>
  double beta_const = 0.0;  // 2 ||D^{-1/2}|| + ||H^{-1/2}||
  std::vector<double> eps_bar;    // running sums of eps_j
  std::vector<double> eps_tilde;  // running sums of eps_j^2
  double f_star = 0.0;
};

// Dense H = Q + U D^{-1} U^* of the (S, y_I, y_E) block quadratic of the
// instance. Guarded by a total-dimension cap (n^2 + m_I + m_E <= dim_cap).
Mat instance_H_dense(const LssdpInstance& inst, int dim_cap = 400);

ComplexityCertificate make_certificate(const LssdpInstance& inst, const DualPoint& x0,
                                       const DualPoint& x_star, double f_star,
                                       const ToleranceSchedule& sched, int k_max,
                                       int dim_cap = 400);

// Indices k whose traced objective violates
//   F(x^k) - F* <= slack * 4((sqrt(tau) + beta eps_bar_k)^2 + 2 beta^2 eps_tilde_k)/(k+1)^2.
std::vector<int> complexity_check(const SolveReport& report, const ComplexityCertificate& cert,
                                  double slack = 1.5);

// Objective after minimizing over (Z, v) at the iterate's (S, y_E, y_I).
double reduced_objective(const DualPoint& pt, const LssdpInstance& inst);

}  // namespace lssdp
