#pragma once

#include <string>
#include <vector>

#include "lssdp/profiles.hpp"
#include "lssdp/solvers.hpp"

namespace lssdp {

// Run every (instance, algorithm) cell; failures are recorded in-report and
// never abort the matrix. Reports come back sorted by (instance, algorithm).
// workers <= 0 reads LSSDP_WORKERS from the environment (default 1).
std::vector<SolveReport> run_matrix(const std::vector<LssdpInstance>& instances,
                                    const std::vector<Algorithm>& algorithms,
                                    const SolverConfig& cfg, int workers = -1);

// kZero renders every time field as 0 so that output bytes depend only on
// inputs and seeds (reproducibility comparisons).
enum class TimeMode { kWall, kZero };

std::string reports_to_csv(const std::vector<SolveReport>& reports,
                           TimeMode mode = TimeMode::kWall);
std::vector<SolveReport> reports_from_csv(const std::string& text);

std::string reports_to_json(const std::vector<SolveReport>& reports,
                            TimeMode mode = TimeMode::kWall, bool include_trace = true);
std::vector<SolveReport> reports_from_json(const std::string& text);

std::string reports_to_table(const std::vector<SolveReport>& reports);

// Solved-count summary per family at each tolerance, judged from the best
// eta seen along the trace (final eta when no trace was recorded).
std::string summary_by_family(const std::vector<SolveReport>& reports,
                              const std::vector<double>& tols = {1e-6, 1e-7, 1e-8});

std::string curves_to_csv(const std::vector<ProfileCurve>& curves);
std::string curves_to_json(const std::vector<ProfileCurve>& curves);

}  // namespace lssdp
