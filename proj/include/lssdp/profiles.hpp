#pragma once

#include <map>
#include <string>
#include <vector>

#include "lssdp/solvers.hpp"

namespace lssdp {

struct ProfileCurve {
  std::string method;
  std::vector<std::pair<double, double>> points;  // (x, fraction), x >= 1, step breakpoints
};

// Times per (instance, method); +inf marks an unsolved pair.
using TimeTable = std::map<std::string, std::map<std::string, double>>;

TimeTable time_table(const std::vector<SolveReport>& reports);

// A method's curve passes through (x, y) when it solves (100y)% of all
// instances at most x times slower than the fastest method on each.
std::vector<ProfileCurve> performance_profile(const TimeTable& table);

// First trace time at which eta dropped below tol; +inf when never.
double time_to_tolerance(const SolveReport& report, double tol);

// Fraction of instances whose time-to-target is at most x times the
// time-to-1e-6 baseline. One curve per call; instances that never reach
// the target are excluded from the numerator at every x.
ProfileCurve tolerance_profile(const std::vector<SolveReport>& reports, double target_tol,
                               double baseline_tol = 1e-6);

}  // namespace lssdp
