#include "lssdp/cones.hpp"

#include <cmath>

namespace lssdp {

template <class T>
void Box<T>::validate() const {
  require(lower.rows() == upper.rows() && lower.cols() == upper.cols(),
          "Box: bound shapes differ");
  require((lower.array() <= upper.array()).all(), "Box: lower > upper somewhere");
  if (lower.rows() == lower.cols() && lower.rows() > 1) {
    // boxes over S^n must have a symmetric bound pattern; entrywise equality
    // comparison so that infinite bounds compare cleanly
    for (Eigen::Index i = 0; i < lower.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < lower.cols(); ++j) {
        require(lower(i, j) == lower(j, i) && upper(i, j) == upper(j, i),
                "Box: bound pattern over S^n must be symmetric");
      }
    }
  }
}

template void Box<Mat>::validate() const;

template <>
void Box<Vec>::validate() const {
  require(lower.size() == upper.size(), "Box: bound shapes differ");
  require((lower.array() <= upper.array()).all(), "Box: lower > upper somewhere");
}

std::pair<Mat, EigenDecomp> project_psd(const Mat& m) {
  EigenDecomp d = sym_eig(m);
  return {project_psd_from(d), std::move(d)};
}

Mat project_psd_from(const EigenDecomp& d) {
  const int n = static_cast<int>(d.values.size());
  Mat x = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double lam = d.values(i);
    if (lam <= 0.0) break;  // descending order, rest are non-positive
    x.noalias() += lam * d.vectors.col(i) * d.vectors.col(i).transpose();
  }
  return symmetrize(x);
}

}  // namespace lssdp
