#include "lssdp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace lssdp {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_hms(double sec) {
  const long total_ms = std::lround(sec * 1000.0);
  const long h = total_ms / 3600000;
  const long m = (total_ms / 60000) % 60;
  const long s = (total_ms / 1000) % 60;
  const long ms = total_ms % 1000;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%ld:%02ld:%02ld.%03ld", h, m, s, ms);
  return buf;
}

double best_eta(const SolveReport& rep) {
  double best = rep.eta;
  for (const auto& tp : rep.trace) best = std::min(best, tp.eta);
  return best;
}

// JSON has no inf/nan literals; encode non-finite values as strings.
json num(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

double as_num(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    return std::stod(s);
  }
  return j.get<double>();
}

}  // namespace

std::vector<SolveReport> run_matrix(const std::vector<LssdpInstance>& instances,
                                    const std::vector<Algorithm>& algorithms,
                                    const SolverConfig& cfg, int workers) {
  if (workers <= 0) {
    const char* env = std::getenv("LSSDP_WORKERS");
    workers = env ? std::max(1, std::atoi(env)) : 1;
  }
  struct Cell {
    const LssdpInstance* inst;
    Algorithm alg;
  };
  std::vector<Cell> cells;
  for (const auto& inst : instances)
    for (const auto alg : algorithms) cells.push_back({&inst, alg});

  std::vector<SolveReport> reports(cells.size());
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      reports[i] = solve(*cells[i].inst, cells[i].alg, cfg);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::sort(reports.begin(), reports.end(), [](const SolveReport& a, const SolveReport& b) {
    return a.instance != b.instance ? a.instance < b.instance : a.algorithm < b.algorithm;
  });
  return reports;
}

std::string reports_to_csv(const std::vector<SolveReport>& reports, TimeMode mode) {
  std::string out =
      "instance,family,algorithm,status,iterations,eta,eta_g,objective,"
      "time_s,time_hms,tol,seed,pcg_iterations,pcg_solves,skip_hits\n";
  for (const auto& r : reports) {
    const double t = mode == TimeMode::kZero ? 0.0 : r.wall_sec;
    out += r.instance + "," + r.family + "," + r.algorithm + "," + status_name(r.status) + "," +
           std::to_string(r.iterations) + "," + fmt(r.eta) + "," + fmt(r.eta_g) + "," +
           fmt(r.objective) + "," + fmt(t) + "," + fmt_hms(t) + "," + fmt(r.tol) + "," +
           std::to_string(r.seed) + "," + std::to_string(r.pcg_iterations) + "," +
           std::to_string(r.pcg_solves) + "," + std::to_string(r.skip_hits) + "\n";
  }
  return out;
}

std::vector<SolveReport> reports_from_csv(const std::string& text) {
  std::vector<SolveReport> reports;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    f.push_back(cur);
    require(f.size() == 15, "reports_from_csv: malformed row: " + line);
    SolveReport r;
    r.instance = f[0];
    r.family = f[1];
    r.algorithm = f[2];
    if (f[3] == "converged") r.status = SolveStatus::kConverged;
    else if (f[3] == "maxiter") r.status = SolveStatus::kMaxIter;
    else r.status = SolveStatus::kFailed;
    r.iterations = std::stoi(f[4]);
    r.eta = std::stod(f[5]);
    r.eta_g = std::stod(f[6]);
    r.objective = std::stod(f[7]);
    r.wall_sec = std::stod(f[8]);
    r.tol = std::stod(f[10]);
    r.seed = std::stoull(f[11]);
    r.pcg_iterations = std::stol(f[12]);
    r.pcg_solves = std::stoi(f[13]);
    r.skip_hits = std::stoi(f[14]);
    reports.push_back(std::move(r));
  }
  return reports;
}

std::string reports_to_json(const std::vector<SolveReport>& reports, TimeMode mode,
                            bool include_trace) {
  json arr = json::array();
  for (const auto& r : reports) {
    const double t = mode == TimeMode::kZero ? 0.0 : r.wall_sec;
    json j{{"instance", r.instance},
           {"family", r.family},
           {"algorithm", r.algorithm},
           {"status", status_name(r.status)},
           {"iterations", r.iterations},
           {"eta", num(r.eta)},
           {"eta_g", num(r.eta_g)},
           {"objective", num(r.objective)},
           {"time_s", t},
           {"tol", num(r.tol)},
           {"seed", r.seed},
           {"pcg_iterations", r.pcg_iterations},
           {"pcg_solves", r.pcg_solves},
           {"skip_hits", r.skip_hits}};
    if (!r.message.empty()) j["message"] = r.message;
    if (include_trace) {
      json trace = json::array();
      for (const auto& tp : r.trace) {
        trace.push_back({{"k", tp.k},
                         {"eta", num(tp.eta)},
                         {"eta_g", num(tp.eta_g)},
                         {"objective", num(tp.objective)},
                         {"time_s", mode == TimeMode::kZero ? 0.0 : tp.time_sec}});
      }
      j["trace"] = std::move(trace);
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::vector<SolveReport> reports_from_json(const std::string& text) {
  const json arr = json::parse(text);
  require(arr.is_array(), "reports_from_json: top level must be an array");
  std::vector<SolveReport> reports;
  for (const auto& j : arr) {
    SolveReport r;
    r.instance = j.at("instance").get<std::string>();
    r.family = j.at("family").get<std::string>();
    r.algorithm = j.at("algorithm").get<std::string>();
    const std::string st = j.at("status").get<std::string>();
    r.status = st == "converged" ? SolveStatus::kConverged
                                 : (st == "maxiter" ? SolveStatus::kMaxIter : SolveStatus::kFailed);
    r.iterations = j.at("iterations").get<int>();
    r.eta = as_num(j.at("eta"));
    r.eta_g = as_num(j.at("eta_g"));
    r.objective = as_num(j.at("objective"));
    r.wall_sec = as_num(j.at("time_s"));
    r.tol = as_num(j.at("tol"));
    r.seed = j.at("seed").get<std::uint64_t>();
    r.pcg_iterations = j.at("pcg_iterations").get<long>();
    r.pcg_solves = j.at("pcg_solves").get<int>();
    r.skip_hits = j.at("skip_hits").get<int>();
    if (j.contains("message")) r.message = j.at("message").get<std::string>();
    if (j.contains("trace")) {
      for (const auto& t : j.at("trace")) {
        r.trace.push_back({t.at("k").get<int>(), as_num(t.at("eta")), as_num(t.at("eta_g")),
                           as_num(t.at("objective")), as_num(t.at("time_s"))});
      }
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

std::string reports_to_table(const std::vector<SolveReport>& reports) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-24s %-14s %-9s %8s %10s %10s %12s %12s\n", "instance",
                "algorithm", "status", "iters", "eta", "eta_g", "time(s)", "time(h:m:s)");
  out += buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%-24s %-14s %-9s %8d %10.2e %10.2e %12.3f %12s\n",
                  r.instance.c_str(), r.algorithm.c_str(), status_name(r.status).c_str(),
                  r.iterations, r.eta, r.eta_g, r.wall_sec, fmt_hms(r.wall_sec).c_str());
    out += buf;
  }
  return out;
}

std::string summary_by_family(const std::vector<SolveReport>& reports,
                              const std::vector<double>& tols) {
  // rows: family x algorithm; columns: solved counts at each tolerance
  std::map<std::pair<std::string, std::string>, std::pair<int, std::vector<int>>> agg;
  for (const auto& r : reports) {
    auto& [total, solved] = agg[{r.family, r.algorithm}];
    if (solved.empty()) solved.assign(tols.size(), 0);
    ++total;
    const double eta = best_eta(r);
    for (size_t t = 0; t < tols.size(); ++t)
      if (eta < tols[t]) ++solved[t];
  }
  std::string out = "family,algorithm,total";
  for (const double t : tols) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), ",solved_%g", t);
    out += buf;
  }
  out += "\n";
  for (const auto& [key, val] : agg) {
    out += key.first + "," + key.second + "," + std::to_string(val.first);
    for (size_t t = 0; t < tols.size(); ++t) out += "," + std::to_string(val.second[t]);
    out += "\n";
  }
  return out;
}

std::string curves_to_csv(const std::vector<ProfileCurve>& curves) {
  std::string out = "method,x,fraction\n";
  for (const auto& c : curves)
    for (const auto& [x, f] : c.points) out += c.method + "," + fmt(x) + "," + fmt(f) + "\n";
  return out;
}

std::string curves_to_json(const std::vector<ProfileCurve>& curves) {
  json arr = json::array();
  for (const auto& c : curves) {
    json pts = json::array();
    for (const auto& [x, f] : c.points) pts.push_back({{"x", x}, {"fraction", f}});
    arr.push_back({{"method", c.method}, {"points", std::move(pts)}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace lssdp
