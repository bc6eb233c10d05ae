#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace lssdp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Thrown on contract violations (dimension mismatches, invalid data) and on
// numerical breakdown that cannot be recovered from (failed factorizations,
// eigensolver non-convergence).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

// Frobenius / Euclidean norm helpers so call sites read like the math.
inline double norm(const Vec& v) { return v.norm(); }
inline double norm(const Mat& m) { return m.norm(); }

inline double inner(const Vec& a, const Vec& b) { return a.dot(b); }
inline double inner(const Mat& a, const Mat& b) {
  return (a.array() * b.array()).sum();
}

inline Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

inline bool is_symmetric(const Mat& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * (1.0 + m.cwiseAbs().maxCoeff());
}

}  // namespace lssdp
