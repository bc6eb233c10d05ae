// Command-line driver: build instances, run solver x instance matrices,
// and emit reports plus performance/tolerance profile data.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lssdp/bench.hpp"
#include "lssdp/generators.hpp"
#include "lssdp/io.hpp"
#include "lssdp/profiles.hpp"
#include "lssdp/solvers.hpp"

namespace {

using namespace lssdp;

int run_gen(const std::string& family, int n, int k, std::uint64_t seed, double edge_prob,
            const std::string& from, const std::string& out) {
  LssdpInstance inst;
  if (!from.empty()) {
    const std::string text = read_file(from);
    if (family == "biq" || family == "biq-ext") {
      auto [q, c] = parse_biqmac(text);
      inst = family == "biq" ? gen_biq(q, c, std::filesystem::path(from).stem().string())
                             : gen_biq_ext(q, c, std::filesystem::path(from).stem().string());
    } else if (family == "theta" || family == "fap") {
      Graph g = parse_rudy(text);
      if (family == "theta") {
        inst = gen_theta_plus(g, std::filesystem::path(from).stem().string());
      } else {
        inst = gen_fap(g, std::max(2, k), {}, std::filesystem::path(from).stem().string());
      }
    } else if (family == "qap") {
      auto [a, b] = parse_qaplib(text);
      inst = gen_qap(a, b, std::filesystem::path(from).stem().string());
    } else {
      std::cerr << "gen: --from is not supported for family " << family << "\n";
      return 1;
    }
  } else if (family == "biq" || family == "biq-ext") {
    const auto q = random_sym(n - 1, seed);
    Vec c(n - 1);
    std::mt19937_64 rng(seed ^ 0xc0ffee);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int i = 0; i < n - 1; ++i) c(i) = unif(rng);
    inst = family == "biq" ? gen_biq(q, c) : gen_biq_ext(q, c);
  } else if (family == "theta") {
    inst = gen_theta_plus(random_graph(n, edge_prob, seed));
  } else if (family == "qap") {
    inst = gen_qap(random_sym(n, seed).cwiseAbs(), random_sym(n, seed ^ 1).cwiseAbs());
  } else if (family == "rcp") {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat pts(n, 3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 3; ++j) pts(i, j) = gauss(rng) + (i % 2 ? 2.0 : -2.0);
    inst = gen_rcp(gaussian_affinity(pts), std::max(1, k));
  } else if (family == "fap") {
    inst = gen_fap(random_graph(n, edge_prob, seed), std::max(2, k), {});
  } else if (family == "random") {
    inst = gen_random(n, std::max(1, n / 2), std::max(0, k), seed);
  } else {
    std::cerr << "gen: unknown family " << family << "\n";
    return 1;
  }
  write_file(out, print_instance(inst));
  std::printf("wrote %s (n=%d, mE=%d, mI=%d, family=%s)\n", out.c_str(), inst.n(), inst.me(),
              inst.mi(), inst.family.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LSSDP solver suite"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  std::string g_family = "random", g_from, g_out = "instance.lssdp";
  int g_n = 10, g_k = 2;
  std::uint64_t g_seed = 1;
  double g_p = 0.4;
  gen->add_option("--family", g_family,
                  "biq|biq-ext|theta|qap|rcp|fap|random (default random)");
  gen->add_option("--n", g_n, "size parameter (default 10)");
  gen->add_option("--k", g_k, "clusters (rcp), FAP k, or m_I (random)");
  gen->add_option("--seed", g_seed, "rng seed (default 1)");
  gen->add_option("--edge-prob", g_p, "edge probability for random graphs (default 0.4)");
  gen->add_option("--from", g_from, "parse Biq Mac / rudy / QAPLIB file instead of sampling");
  gen->add_option("--out", g_out, "output path (default instance.lssdp)");

  // ---- solve ----
  auto* solve_cmd = app.add_subcommand("solve", "run one solver on one instance");
  std::string s_in, s_alg = "abcd", s_lin = "auto", s_json_out, s_trace_out;
  double s_tol = 1e-6;
  int s_max_iter = 25000, s_precond_k = 20;
  std::uint64_t s_seed = 0;
  solve_cmd->add_option("--in", s_in, "instance file")->required();
  solve_cmd->add_option("--alg", s_alg, "abcd|apg|earbcg|earbcg-scalar|bcd (default abcd)");
  solve_cmd->add_option("--tol", s_tol, "KKT residual tolerance (default 1e-6)");
  solve_cmd->add_option("--max-iter", s_max_iter, "iteration cap (default 25000; x q for eARBCG)");
  solve_cmd->add_option("--seed", s_seed, "eARBCG block-sampling seed (default 0)");
  solve_cmd->add_option("--precond-k", s_precond_k, "retained eigenpairs (default 20)");
  solve_cmd->add_option("--lin", s_lin, "auto|direct|pcg (default auto)");
  solve_cmd->add_option("--json", s_json_out, "write the report as JSON");
  solve_cmd->add_option("--trace", s_trace_out, "write per-iteration eta/eta_g/objective CSV");

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "run a solver x instance matrix");
  std::string b_suite = "desk", b_out = "bench_out", b_algs = "abcd,apg,earbcg,bcd",
              b_time_mode = "wall";
  double b_tol = 1e-6;
  int b_max_iter = 25000, b_workers = -1;
  std::uint64_t b_seed = 0;
  bench->add_option("--suite", b_suite, "desk, or a comma-separated list of instance files");
  bench->add_option("--algs", b_algs, "comma-separated algorithms (default abcd,apg,earbcg,bcd)");
  bench->add_option("--tol", b_tol, "tolerance (default 1e-6)");
  bench->add_option("--max-iter", b_max_iter, "iteration cap (default 25000)");
  bench->add_option("--seed", b_seed, "eARBCG seed (default 0)");
  bench->add_option("--workers", b_workers, "parallel workers (default $LSSDP_WORKERS or 1)");
  bench->add_option("--time-mode", b_time_mode,
                    "wall|none; none zeroes time fields for byte-reproducible output");
  bench->add_option("--out", b_out, "output directory (default bench_out)");

  // ---- profile ----
  auto* prof = app.add_subcommand("profile", "compute profile curves from a reports JSON");
  std::string p_kind = "perf", p_in, p_out = "curves.csv";
  double p_target = 1e-8;
  prof->add_option("--kind", p_kind, "perf|tol (default perf)");
  prof->add_option("--in", p_in, "reports JSON (as written by bench)")->required();
  prof->add_option("--target", p_target, "target tolerance for --kind tol (default 1e-8)");
  prof->add_option("--out", p_out, "output CSV (default curves.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(g_family, g_n, g_k, g_seed, g_p, g_from, g_out);

    if (solve_cmd->parsed()) {
      const LssdpInstance inst = parse_instance(read_file(s_in));
      const auto alg = algorithm_from_name(s_alg);
      if (!alg) {
        std::cerr << "unknown algorithm: " << s_alg << "\n";
        return 1;
      }
      SolverConfig cfg;
      cfg.tol = s_tol;
      cfg.max_iter = s_max_iter;
      cfg.seed = s_seed;
      cfg.precond_k = s_precond_k;
      cfg.lin = s_lin == "direct" ? SolveStrategy::kDirect
                                  : (s_lin == "pcg" ? SolveStrategy::kPcg : SolveStrategy::kAuto);
      const SolveReport rep = solve(inst, *alg, cfg);
      std::fputs(reports_to_table({rep}).c_str(), stdout);
      if (!rep.message.empty()) std::printf("message: %s\n", rep.message.c_str());
      if (!s_json_out.empty()) write_file(s_json_out, reports_to_json({rep}));
      if (!s_trace_out.empty()) {
        std::string csv = "k,eta,eta_g,objective,time_s\n";
        for (const auto& tp : rep.trace) {
          char buf[160];
          std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", tp.k, tp.eta, tp.eta_g,
                        tp.objective, tp.time_sec);
          csv += buf;
        }
        write_file(s_trace_out, csv);
      }
      return rep.status == SolveStatus::kFailed ? 1 : 0;
    }

    if (bench->parsed()) {
      std::vector<LssdpInstance> instances;
      if (b_suite == "desk") {
        instances = desk_suite();
      } else {
        std::string cur;
        std::istringstream ss(b_suite);
        while (std::getline(ss, cur, ','))
          if (!cur.empty()) instances.push_back(parse_instance(read_file(cur)));
      }
      std::vector<Algorithm> algs;
      std::string cur;
      std::istringstream ss(b_algs);
      while (std::getline(ss, cur, ',')) {
        const auto alg = algorithm_from_name(cur);
        if (!alg) {
          std::cerr << "unknown algorithm: " << cur << "\n";
          return 1;
        }
        algs.push_back(*alg);
      }
      SolverConfig cfg;
      cfg.tol = b_tol;
      cfg.max_iter = b_max_iter;
      cfg.seed = b_seed;
      const auto reports = run_matrix(instances, algs, cfg, b_workers);
      const TimeMode mode = b_time_mode == "none" ? TimeMode::kZero : TimeMode::kWall;
      std::filesystem::create_directories(b_out);
      write_file(b_out + "/reports.csv", reports_to_csv(reports, mode));
      write_file(b_out + "/reports.json", reports_to_json(reports, mode));
      write_file(b_out + "/summary.csv", summary_by_family(reports));
      std::fputs(reports_to_table(reports).c_str(), stdout);
      std::printf("wrote %s/reports.{csv,json} and summary.csv\n", b_out.c_str());
      return 0;
    }

    if (prof->parsed()) {
      const auto reports = reports_from_json(read_file(p_in));
      std::vector<ProfileCurve> curves;
      if (p_kind == "perf") {
        curves = performance_profile(time_table(reports));
      } else if (p_kind == "tol") {
        ProfileCurve c = tolerance_profile(reports, p_target);
        char label[32];
        std::snprintf(label, sizeof(label), "tol_%g", p_target);
        c.method = label;
        curves.push_back(std::move(c));
      } else {
        std::cerr << "unknown profile kind: " << p_kind << "\n";
        return 1;
      }
      write_file(p_out, curves_to_csv(curves));
      std::printf("wrote %s\n", p_out.c_str());
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
