#pragma once

#include <cmath>
#include <utility>

#include "lssdp/linalg.hpp"
#include "lssdp/types.hpp"

namespace lssdp {

// Elementwise box L <= W <= U over S^n (T = Mat) or R^m (T = Vec).
// Infinite bounds are IEEE infinities.
template <class T>
struct Box {
  T lower;
  T upper;

  static Box nonneg(int rows, int cols = -1) {
    if (cols < 0) cols = rows;
    Box b;
    b.lower = T::Constant(rows, cols, 0.0);
    b.upper = T::Constant(rows, cols, kInf);
    return b;
  }
  static Box free(int rows, int cols = -1) {
    if (cols < 0) cols = rows;
    Box b;
    b.lower = T::Constant(rows, cols, -kInf);
    b.upper = T::Constant(rows, cols, kInf);
    return b;
  }

  void validate() const;
};

template <>
inline Box<Vec> Box<Vec>::nonneg(int rows, int) {
  Box b;
  b.lower = Vec::Constant(rows, 0.0);
  b.upper = Vec::Constant(rows, kInf);
  return b;
}
template <>
inline Box<Vec> Box<Vec>::free(int rows, int) {
  Box b;
  b.lower = Vec::Constant(rows, -kInf);
  b.upper = Vec::Constant(rows, kInf);
  return b;
}

template <>
void Box<Vec>::validate() const;

using MatBox = Box<Mat>;
using VecBox = Box<Vec>;

// Clamp to the box; infinite bounds pass values through.
template <class T>
T project_box(const T& m, const Box<T>& box) {
  require(m.rows() == box.lower.rows() && m.cols() == box.lower.cols(),
          "project_box: shape mismatch");
  return m.cwiseMax(box.lower).cwiseMin(box.upper);
}

// Minimizer of delta*_B(-Z) + 1/2 ||Z + R||^2, i.e. Z = Pi_B(R) - R.
template <class T>
T prox_support_neg(const T& r, const Box<T>& box) {
  return project_box(r, box) - r;
}

// Scaled variant: minimizer of delta*_B(-Z) + (sigma/2) ||Z - R||^2.
// Reduces to Pi_B(-R) + R when B is a cone. Written as a scaled unit prox
// so the result carries exact entry signs and -Z stays inside dom delta*.
template <class T>
T prox_support_neg_scaled(const T& r, const Box<T>& box, double sigma) {
  require(sigma > 0.0, "prox_support_neg_scaled: sigma must be positive");
  return prox_support_neg<T>(T(-sigma * r), box) / sigma;
}

// Support function delta*_B(Y) = sup_{W in B} <Y, W>, with 0 * inf = 0.
// Returns +inf when an infinite bound meets a nonzero coefficient of
// matching sign.
template <class T>
double support_value(const T& y, const Box<T>& box) {
  require(y.rows() == box.lower.rows() && y.cols() == box.lower.cols(),
          "support_value: shape mismatch");
  double s = 0.0;
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      const double v = y(i, j);
      if (v > 0.0) {
        const double u = box.upper(i, j);
        if (std::isinf(u)) return kInf;
        s += u * v;
      } else if (v < 0.0) {
        const double l = box.lower(i, j);
        if (std::isinf(l)) return kInf;
        s += l * v;
      }
    }
  }
  return s;
}

// Projection onto the PSD cone. Returns the projection together with the
// eigendecomposition of the input so the caller can reuse it.
std::pair<Mat, EigenDecomp> project_psd(const Mat& m);

// Same, reusing a decomposition already computed for m.
Mat project_psd_from(const EigenDecomp& d);

}  // namespace lssdp
