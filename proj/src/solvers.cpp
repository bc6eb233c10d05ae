#include "lssdp/solvers.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <utility>

namespace lssdp {

std::string algorithm_name(Algorithm alg) {
  switch (alg) {
    case Algorithm::kAbcd: return "abcd";
    case Algorithm::kApg: return "apg";
    case Algorithm::kEarbcg: return "earbcg";
    case Algorithm::kEarbcgScalar: return "earbcg-scalar";
    case Algorithm::kBcd: return "bcd";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
  if (name == "abcd") return Algorithm::kAbcd;
  if (name == "apg") return Algorithm::kApg;
  if (name == "earbcg") return Algorithm::kEarbcg;
  if (name == "earbcg-scalar") return Algorithm::kEarbcgScalar;
  if (name == "bcd") return Algorithm::kBcd;
  return std::nullopt;
}

std::string status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIter: return "maxiter";
    case SolveStatus::kFailed: return "failed";
  }
  return "?";
}

MomentumState momentum_step(const MomentumState& state) {
  require(state.t >= 1.0, "momentum_step: t must be >= 1");
  MomentumState next;
  next.t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * state.t * state.t));
  next.beta = (state.t - 1.0) / next.t;
  return next;
}

double epsilon_at(const ToleranceSchedule& sched, int k) {
  require(k >= 1, "epsilon_at: k must be >= 1");
  require(sched.exponent > 1.0, "epsilon_at: exponent must exceed 1 for summability");
  return sched.base * std::pow(static_cast<double>(k), -sched.exponent);
}

double reduced_objective(const DualPoint& pt, const LssdpInstance& inst) {
  DualPoint opt = pt;
  Mat r = inst.a_e.adjoint(pt.y_e) + pt.s + inst.big_g;
  if (inst.has_ineq()) r += inst.a_i.adjoint(pt.y_i);
  opt.z = prox_support_neg<Mat>(r, inst.p_box);
  if (inst.has_ineq()) {
    const Vec w = inst.small_g - pt.y_i;
    opt.v = prox_support_neg<Vec>(w, inst.k_box);
  }
  return eval_dual_objective(opt, inst, /*check_s_psd=*/false);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point& t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Linear-system side of a solver run: the two Gram operators, their
// preconditioners when PCG is in play, and solve statistics.
class LinearContext {
 public:
  LinearContext(const LssdpInstance& inst, const SolverConfig& cfg, double ai_shift)
      : strategy_(cfg.lin),
        be_(inst.a_e, 0.0, strategy_ == SolveStrategy::kPcg ? 0 : 4000) {
    if (inst.has_ineq()) bi_.emplace(inst.a_i, ai_shift,
                                     strategy_ == SolveStrategy::kPcg ? 0 : 4000);
    if (strategy_ == SolveStrategy::kAuto) {
      const bool direct_ok =
          be_.has_factorization() && (!bi_ || bi_->has_factorization());
      strategy_ = direct_ok ? SolveStrategy::kDirect : SolveStrategy::kPcg;
    }
    if (strategy_ == SolveStrategy::kPcg && cfg.use_precond) {
      pc_be_ = build_preconditioner(be_, std::min(cfg.precond_k, be_.size()));
      if (bi_) pc_bi_ = build_preconditioner(*bi_, std::min(cfg.precond_k, bi_->size()));
    }
  }

  // Solve to the absolute residual tolerance, warm starting from `warm`.
  // Returns the solution; delta receives B y - rhs (exact).
  Vec solve_e(const Vec& rhs, double tol, const Vec& warm, Vec& delta) {
    return run(be_, pc_be_ ? &*pc_be_ : nullptr, rhs, tol, warm, delta);
  }
  Vec solve_i(const Vec& rhs, double tol, const Vec& warm, Vec& delta) {
    require(bi_.has_value(), "LinearContext: no inequality operator");
    return run(*bi_, pc_bi_ ? &*pc_bi_ : nullptr, rhs, tol, warm, delta);
  }

  const GramOperator& be() const { return be_; }
  const GramOperator& bi() const { return *bi_; }
  SolveStrategy strategy() const { return strategy_; }
  long pcg_iterations = 0;
  int solves = 0;
  int outer_iteration = 0;  // for error messages

 private:
  Vec run(const GramOperator& b, const SpectralPreconditioner* pc, const Vec& rhs, double tol,
          const Vec& warm, Vec& delta) {
    CertifiedSolve cs = solve_certified(b, rhs, tol, strategy_, pc, &warm);
    if (!cs.certified)
      throw Error("iteration " + std::to_string(outer_iteration) +
                  ": linear solve missed tolerance " + std::to_string(tol) + " (" +
                  std::to_string(cs.iterations) + " PCG iterations)");
    ++solves;
    pcg_iterations += cs.iterations;
    delta = -cs.residual;
    return cs.solution;
  }

  SolveStrategy strategy_;
  GramOperator be_;
  std::optional<GramOperator> bi_;
  std::optional<SpectralPreconditioner> pc_be_;
  std::optional<SpectralPreconditioner> pc_bi_;
};

// ---------------------------------------------------------------- ABCD-1

struct AbcdState {
  DualPoint cur;             // (Z, v, S, y_E, y_I)
  Mat s_prev, s_tilde;
  Vec ye_prev, ye_tilde;
  Vec yi_prev, yi_tilde;
  MomentumState mom;
};

AbcdState abcd_init(const DualPoint& start) {
  AbcdState st;
  st.cur = start;
  st.s_prev = start.s;
  st.s_tilde = start.s;
  st.ye_prev = start.y_e;
  st.ye_tilde = start.y_e;
  st.yi_prev = start.y_i;
  st.yi_tilde = start.y_i;
  return st;
}

void abcd_iteration(AbcdState& st, const LssdpInstance& inst, double eps_cap,
                    const SolverConfig& cfg, LinearContext& lin, int& skip_hits,
                    std::vector<std::string>* block_log) {
  const bool ineq = inst.has_ineq();
  auto log = [&](const char* label) {
    if (block_log) block_log->emplace_back(label);
  };

  // (Z, v): closed form at the extrapolated point
  Mat ae_yt = inst.a_e.adjoint(st.ye_tilde);
  Mat ai_yt = ineq ? inst.a_i.adjoint(st.yi_tilde) : Mat::Zero(inst.n(), inst.n());
  Mat r_tilde = ae_yt + ai_yt + st.s_tilde + inst.big_g;
  st.cur.z = prox_support_neg<Mat>(r_tilde, inst.p_box);
  if (ineq) st.cur.v = prox_support_neg<Vec>(inst.small_g - st.yi_tilde, inst.k_box);
  log("Zv");

  const Mat zg = st.cur.z + inst.big_g;

  // backward solve for y_E_hat
  Vec delta_e_hat;
  Vec rhs_e = inst.b_e - inst.a_e.apply(ai_yt + st.s_tilde + zg);
  Vec ye_hat = lin.solve_e(rhs_e, eps_cap, st.cur.y_e, delta_e_hat);
  log("yE_hat");

  // backward solve for y_I_hat
  Vec yi_hat, delta_i_hat;
  Mat ae_yhat = inst.a_e.adjoint(ye_hat);
  if (ineq) {
    Vec rhs_i = (inst.small_g + st.cur.v) - inst.a_i.apply(ae_yhat + st.s_tilde + zg);
    yi_hat = lin.solve_i(rhs_i, eps_cap, st.cur.y_i, delta_i_hat);
    log("yI_hat");
  }

  // S: PSD projection
  Mat m_hat = ae_yhat + zg;
  if (ineq) m_hat += inst.a_i.adjoint(yi_hat);
  st.cur.s = project_psd(-m_hat).first;
  log("S");

  auto accept = [&](const Vec& delta, const Vec& delta_hat) {
    if (cfg.skip_rule_ratio) return delta.norm() <= cfg.skip_ratio_c * delta_hat.norm();
    return delta.norm() <= eps_cap;
  };

  // forward solve for y_I (skipped when y_I_hat already accurate enough)
  if (ineq) {
    Vec delta_i = delta_i_hat + inst.a_i.apply(st.cur.s - st.s_tilde);
    if (accept(delta_i, delta_i_hat)) {
      st.cur.y_i = yi_hat;
      ++skip_hits;
    } else {
      Vec rhs_i = (inst.small_g + st.cur.v) - inst.a_i.apply(ae_yhat + st.cur.s + zg);
      st.cur.y_i = lin.solve_i(rhs_i, eps_cap, yi_hat, delta_i);
    }
    log("yI");
  }

  // forward solve for y_E
  {
    Mat drift = st.cur.s - st.s_tilde;
    if (ineq) drift += inst.a_i.adjoint(st.cur.y_i - st.yi_tilde);
    Vec delta_e = delta_e_hat + inst.a_e.apply(drift);
    if (accept(delta_e, delta_e_hat)) {
      st.cur.y_e = ye_hat;
      ++skip_hits;
    } else {
      Mat w = st.cur.s + zg;
      if (ineq) w += inst.a_i.adjoint(st.cur.y_i);
      Vec rhs_e2 = inst.b_e - inst.a_e.apply(w);
      st.cur.y_e = lin.solve_e(rhs_e2, eps_cap, ye_hat, delta_e);
    }
    log("yE");
  }

  // momentum extrapolation
  const MomentumState next = momentum_step(st.mom);
  st.s_tilde = st.cur.s + next.beta * (st.cur.s - st.s_prev);
  st.ye_tilde = st.cur.y_e + next.beta * (st.cur.y_e - st.ye_prev);
  if (ineq) st.yi_tilde = st.cur.y_i + next.beta * (st.cur.y_i - st.yi_prev);
  st.s_prev = st.cur.s;
  st.ye_prev = st.cur.y_e;
  if (ineq) st.yi_prev = st.cur.y_i;
  st.mom = next;
}

// ------------------------------------------------------------ direct APG

struct ApgState {
  DualPoint cur;
  Mat z_prev, z_tilde;
  Vec ye_prev, ye_tilde;
  Vec yi_prev, yi_tilde;
  MomentumState mom;
};

ApgState apg_init(const DualPoint& start) {
  ApgState st;
  st.cur = start;
  st.z_prev = start.z;
  st.z_tilde = start.z;
  st.ye_prev = start.y_e;
  st.ye_tilde = start.y_e;
  st.yi_prev = start.y_i;
  st.yi_tilde = start.y_i;
  return st;
}

void apg_iteration(ApgState& st, const LssdpInstance& inst, double eps_cap,
                   LinearContext& lin) {
  const bool ineq = inst.has_ineq();

  Mat m_tilde = inst.a_e.adjoint(st.ye_tilde) + st.z_tilde + inst.big_g;
  if (ineq) m_tilde += inst.a_i.adjoint(st.yi_tilde);
  const Mat x_k = project_psd(m_tilde).first;

  Vec delta;
  st.cur.y_e = st.ye_tilde + lin.solve_e((inst.b_e - inst.a_e.apply(x_k)) / 3.0, eps_cap,
                                         Vec::Zero(inst.me()), delta);
  if (ineq) {
    const Vec s_k = project_box<Vec>(inst.small_g - st.yi_tilde, inst.k_box);
    st.cur.y_i =
        st.yi_tilde + lin.solve_i((s_k - inst.a_i.apply(x_k)) / 3.0, eps_cap,
                                  Vec::Zero(inst.mi()), delta);
  }
  // prox step on Z against the majorant with modulus 3
  st.cur.z = prox_support_neg_scaled<Mat>(st.z_tilde - x_k / 3.0, inst.p_box, 3.0);

  // optimal completion of (S, v) for residual/objective purposes
  Mat m = inst.a_e.adjoint(st.cur.y_e) + st.cur.z + inst.big_g;
  if (ineq) {
    m += inst.a_i.adjoint(st.cur.y_i);
    st.cur.v = prox_support_neg<Vec>(inst.small_g - st.cur.y_i, inst.k_box);
  }
  st.cur.s = project_psd(-m).first;

  const MomentumState next = momentum_step(st.mom);
  st.z_tilde = st.cur.z + next.beta * (st.cur.z - st.z_prev);
  st.ye_tilde = st.cur.y_e + next.beta * (st.cur.y_e - st.ye_prev);
  if (ineq) st.yi_tilde = st.cur.y_i + next.beta * (st.cur.y_i - st.yi_prev);
  st.z_prev = st.cur.z;
  st.ye_prev = st.cur.y_e;
  if (ineq) st.yi_prev = st.cur.y_i;
  st.mom = next;
}

// ---------------------------------------------------------------- eARBCG

struct EarbcgState {
  DualPoint x;
  DualPoint x_tilde;
  double alpha;
  int q;
  double lam_e = 0.0;  // lambda_max(A_E A_E*), scalar mode
  double lam_i = 0.0;  // lambda_max(A_I A_I* + I), scalar mode
};

EarbcgState earbcg_init(const LssdpInstance& inst, const DualPoint& start, bool scalar,
                        LinearContext& lin) {
  EarbcgState st;
  st.x = start;
  st.x_tilde = start;
  st.q = inst.has_ineq() ? 4 : 3;
  st.alpha = 1.0 / st.q;
  if (scalar) {
    st.lam_e = build_preconditioner(lin.be(), 1).lambdas(0);
    if (inst.has_ineq()) st.lam_i = build_preconditioner(lin.bi(), 1).lambdas(0);
  }
  return st;
}

void earbcg_iteration(EarbcgState& st, const LssdpInstance& inst, bool scalar,
                      LinearContext& lin, std::mt19937_64& rng) {
  const bool ineq = inst.has_ineq();
  st.alpha = 0.5 * (std::sqrt(std::pow(st.alpha, 4) + 4.0 * st.alpha * st.alpha) -
                    st.alpha * st.alpha);
  const double sigma = st.q * st.alpha;

  // hat point
  DualPoint hat;
  hat.z = (1.0 - st.alpha) * st.x.z + st.alpha * st.x_tilde.z;
  hat.s = (1.0 - st.alpha) * st.x.s + st.alpha * st.x_tilde.s;
  hat.y_e = (1.0 - st.alpha) * st.x.y_e + st.alpha * st.x_tilde.y_e;
  if (ineq) {
    hat.v = (1.0 - st.alpha) * st.x.v + st.alpha * st.x_tilde.v;
    hat.y_i = (1.0 - st.alpha) * st.x.y_i + st.alpha * st.x_tilde.y_i;
  } else {
    hat.v = Vec::Zero(0);
    hat.y_i = Vec::Zero(0);
  }

  const int pick = static_cast<int>(rng() % static_cast<std::uint64_t>(st.q));

  Mat r_hat = inst.a_e.adjoint(hat.y_e) + hat.s + hat.z + inst.big_g;
  if (ineq) r_hat += inst.a_i.adjoint(hat.y_i);
  const Vec w_hat = ineq ? Vec(inst.small_g + hat.v - hat.y_i) : Vec::Zero(0);

  DualPoint x_next = hat;  // unchosen blocks take the hat value
  switch (pick) {
    case 0: {  // (Z, v)
      Mat z_old = st.x_tilde.z;
      st.x_tilde.z = prox_support_neg_scaled<Mat>(st.x_tilde.z - r_hat / sigma, inst.p_box, sigma);
      x_next.z = hat.z + sigma * (st.x_tilde.z - z_old);
      if (ineq) {
        Vec v_old = st.x_tilde.v;
        st.x_tilde.v =
            prox_support_neg_scaled<Vec>(st.x_tilde.v - w_hat / sigma, inst.k_box, sigma);
        x_next.v = hat.v + sigma * (st.x_tilde.v - v_old);
      }
      break;
    }
    case 1: {  // S
      Mat s_old = st.x_tilde.s;
      st.x_tilde.s = project_psd(st.x_tilde.s - r_hat / sigma).first;
      x_next.s = hat.s + sigma * (st.x_tilde.s - s_old);
      break;
    }
    case 2: {  // y_E
      Vec grad = inst.a_e.apply(r_hat) - inst.b_e;
      Vec ye_old = st.x_tilde.y_e;
      if (scalar) {
        st.x_tilde.y_e = st.x_tilde.y_e - grad / (sigma * st.lam_e);
      } else {
        Vec delta;
        Vec u = lin.solve_e(grad, 1e-11 * (1.0 + grad.norm()), Vec::Zero(inst.me()), delta);
        st.x_tilde.y_e = st.x_tilde.y_e - u / sigma;
      }
      x_next.y_e = hat.y_e + sigma * (st.x_tilde.y_e - ye_old);
      break;
    }
    default: {  // y_I
      Vec grad = inst.a_i.apply(r_hat) - w_hat;
      Vec yi_old = st.x_tilde.y_i;
      if (scalar) {
        st.x_tilde.y_i = st.x_tilde.y_i - grad / (sigma * st.lam_i);
      } else {
        Vec delta;
        Vec u = lin.solve_i(grad, 1e-11 * (1.0 + grad.norm()), Vec::Zero(inst.mi()), delta);
        st.x_tilde.y_i = st.x_tilde.y_i - u / sigma;
      }
      x_next.y_i = hat.y_i + sigma * (st.x_tilde.y_i - yi_old);
      break;
    }
  }
  st.x = std::move(x_next);
}

// ------------------------------------------------------------ cyclic BCD

void bcd_iteration(DualPoint& pt, const LssdpInstance& inst, LinearContext& lin) {
  const bool ineq = inst.has_ineq();
  const auto tight = [](const Vec& rhs) { return 1e-12 * (1.0 + rhs.norm()); };

  Mat ae_y = inst.a_e.adjoint(pt.y_e);
  Mat ai_y = ineq ? inst.a_i.adjoint(pt.y_i) : Mat::Zero(inst.n(), inst.n());

  pt.z = prox_support_neg<Mat>(ae_y + ai_y + pt.s + inst.big_g, inst.p_box);
  if (ineq) pt.v = prox_support_neg<Vec>(inst.small_g - pt.y_i, inst.k_box);

  const Mat zg = pt.z + inst.big_g;
  pt.s = project_psd(-(ae_y + ai_y + zg)).first;

  Vec delta;
  Vec rhs_e = inst.b_e - inst.a_e.apply(ai_y + pt.s + zg);
  pt.y_e = lin.solve_e(rhs_e, tight(rhs_e), pt.y_e, delta);

  if (ineq) {
    Vec rhs_i = (inst.small_g + pt.v) -
                inst.a_i.apply(inst.a_e.adjoint(pt.y_e) + pt.s + zg);
    pt.y_i = lin.solve_i(rhs_i, tight(rhs_i), pt.y_i, delta);
  }
}

}  // namespace

SolveReport solve(const LssdpInstance& inst, Algorithm alg, const SolverConfig& cfg,
                  const DualPoint* start_opt, std::vector<std::string>* block_log) {
  SolveReport rep;
  rep.instance = inst.name;
  rep.family = inst.family;
  rep.algorithm = algorithm_name(alg);
  rep.tol = cfg.tol;
  rep.seed = cfg.seed;

  require(cfg.max_iter >= 1, "solve: max_iter must be >= 1");
  const DualPoint start = start_opt ? *start_opt : zero_dual_point(inst);
  ToleranceSchedule sched;
  sched.base = cfg.eps_base > 0 ? cfg.eps_base : 1e-3 * (1.0 + inst.big_g.norm());
  sched.exponent = cfg.eps_exponent;

  const auto t0 = Clock::now();
  try {
    const double ai_shift = (alg == Algorithm::kApg) ? 1.0 / 3.0 : 1.0;
    LinearContext lin(inst, cfg, ai_shift);

    const int q = inst.has_ineq() ? 4 : 3;
    const bool is_earbcg = alg == Algorithm::kEarbcg || alg == Algorithm::kEarbcgScalar;
    const int cap = is_earbcg ? cfg.max_iter * q : cfg.max_iter;
    const int check_every = is_earbcg && cfg.check_every == 1 ? q : cfg.check_every;

    AbcdState abcd;
    ApgState apg;
    EarbcgState earbcg;
    DualPoint bcd = start;
    std::mt19937_64 rng(cfg.seed);

    switch (alg) {
      case Algorithm::kAbcd: abcd = abcd_init(start); break;
      case Algorithm::kApg: apg = apg_init(start); break;
      case Algorithm::kEarbcg:
      case Algorithm::kEarbcgScalar:
        earbcg = earbcg_init(inst, start, alg == Algorithm::kEarbcgScalar, lin);
        break;
      case Algorithm::kBcd: break;
    }

    double best_eta = kInf;
    for (int k = 1; k <= cap; ++k) {
      lin.outer_iteration = k;
      double t_k = 1.0;
      if (alg == Algorithm::kAbcd) t_k = abcd.mom.t;
      if (alg == Algorithm::kApg) t_k = apg.mom.t;
      const double eps_cap = epsilon_at(sched, k) / (std::sqrt(2.0) * t_k);
      const DualPoint* pt = nullptr;
      switch (alg) {
        case Algorithm::kAbcd:
          abcd_iteration(abcd, inst, eps_cap, cfg, lin, rep.skip_hits,
                         k == 1 ? block_log : nullptr);
          pt = &abcd.cur;
          break;
        case Algorithm::kApg:
          apg_iteration(apg, inst, eps_cap, lin);
          pt = &apg.cur;
          break;
        case Algorithm::kEarbcg:
        case Algorithm::kEarbcgScalar:
          earbcg_iteration(earbcg, inst, alg == Algorithm::kEarbcgScalar, lin, rng);
          pt = &earbcg.x;
          break;
        case Algorithm::kBcd:
          bcd_iteration(bcd, inst, lin);
          pt = &bcd;
          break;
      }
      rep.iterations = k;

      if (k % check_every == 0 || k == cap) {
        KktReport kkt = kkt_residual(*pt, inst);
        const double obj = reduced_objective(*pt, inst);
        if (cfg.record_trace) {
          rep.trace.push_back({k, kkt.eta, kkt.eta_g, obj, seconds_since(t0)});
        }
        if (kkt.eta < best_eta) {  // keep the best iterate seen
          best_eta = kkt.eta;
          rep.eta = kkt.eta;
          rep.eta_g = kkt.eta_g;
          rep.objective = obj;
          rep.final_point = *pt;
        }
        if (kkt.eta < cfg.tol) {
          rep.status = SolveStatus::kConverged;
          break;
        }
      }
      if (k == cap) rep.status = SolveStatus::kMaxIter;
    }
    rep.pcg_iterations = lin.pcg_iterations;
    rep.pcg_solves = lin.solves;
  } catch (const std::exception& ex) {
    rep.status = SolveStatus::kFailed;
    rep.message = ex.what();
  }
  rep.wall_sec = seconds_since(t0);
  return rep;
}

}  // namespace lssdp
