#include "lssdp/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lssdp {

TimeTable time_table(const std::vector<SolveReport>& reports) {
  TimeTable table;
  for (const auto& rep : reports) {
    const double t = rep.status == SolveStatus::kConverged ? rep.wall_sec : kInf;
    table[rep.instance][rep.algorithm] = t;
  }
  return table;
}

std::vector<ProfileCurve> performance_profile(const TimeTable& table) {
  require(!table.empty(), "performance_profile: no reports");
  std::set<std::string> methods;
  for (const auto& [inst, row] : table)
    for (const auto& [m, t] : row) methods.insert(m);
  const double total = static_cast<double>(table.size());

  // performance ratios per method
  std::map<std::string, std::vector<double>> ratios;
  for (const auto& [inst, row] : table) {
    double best = kInf;
    for (const auto& [m, t] : row) best = std::min(best, t);
    for (const auto& m : methods) {
      const auto it = row.find(m);
      const double t = it == row.end() ? kInf : it->second;
      if (std::isinf(t) || std::isinf(best)) {
        ratios[m].push_back(kInf);
      } else {
        ratios[m].push_back(std::max(1.0, t / best));
      }
    }
  }

  std::vector<ProfileCurve> curves;
  for (const auto& m : methods) {
    auto& r = ratios[m];
    std::sort(r.begin(), r.end());
    ProfileCurve curve;
    curve.method = m;
    double frac = 0.0;
    // fraction at x = 1 first, then a breakpoint per distinct finite ratio
    size_t i = 0;
    while (i < r.size() && r[i] <= 1.0) ++i;
    frac = static_cast<double>(i) / total;
    curve.points.push_back({1.0, frac});
    while (i < r.size() && !std::isinf(r[i])) {
      const double x = r[i];
      while (i < r.size() && r[i] == x) ++i;
      frac = static_cast<double>(i) / total;
      curve.points.push_back({x, frac});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

double time_to_tolerance(const SolveReport& report, double tol) {
  for (const TracePoint& tp : report.trace) {
    if (tp.eta < tol) return tp.time_sec;
  }
  return kInf;
}

ProfileCurve tolerance_profile(const std::vector<SolveReport>& reports, double target_tol,
                               double baseline_tol) {
  require(!reports.empty(), "tolerance_profile: no reports");
  std::vector<double> ratios;
  int total = 0;
  for (const auto& rep : reports) {
    require(!rep.trace.empty(), "tolerance_profile: report for '" + rep.instance +
                                    "' carries no trace");
    const double t_base = time_to_tolerance(rep, baseline_tol);
    if (std::isinf(t_base)) continue;  // never reached the baseline accuracy
    ++total;
    const double t_tgt = time_to_tolerance(rep, target_tol);
    if (std::isinf(t_tgt)) continue;  // excluded from the numerator at all x
    ratios.push_back(std::max(1.0, t_base > 0.0 ? t_tgt / t_base : 1.0));
  }
  require(total > 0, "tolerance_profile: no instance reached the baseline tolerance");

  std::sort(ratios.begin(), ratios.end());
  ProfileCurve curve;
  curve.method = "tol";
  size_t i = 0;
  while (i < ratios.size() && ratios[i] <= 1.0) ++i;
  curve.points.push_back({1.0, static_cast<double>(i) / total});
  while (i < ratios.size()) {
    const double x = ratios[i];
    while (i < ratios.size() && ratios[i] == x) ++i;
    curve.points.push_back({x, static_cast<double>(i) / total});
  }
  return curve;
}

}  // namespace lssdp
