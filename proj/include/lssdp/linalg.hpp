#pragma once

#include <vector>

#include "lssdp/types.hpp"

namespace lssdp {

// One entry of the upper triangle of a sparse symmetric matrix.
struct Triplet {
  int row = 0;
  int col = 0;  // row <= col
  double value = 0.0;
};

// Sparse symmetric matrix stored as upper-triangle triplets. Duplicate
// (i,j) entries are summed at construction; out-of-range indices rejected.
class SparseSymMat {
 public:
  SparseSymMat() = default;
  SparseSymMat(int n, std::vector<Triplet> entries);

  int dim() const { return n_; }
  const std::vector<Triplet>& triplets() const { return tri_; }

  // <A, X> in the trace inner product (off-diagonal entries count twice).
  double inner(const Mat& x) const;
  double inner(const SparseSymMat& other) const;

  // M += scale * A with symmetric fill-in.
  void add_scaled_to(Mat& m, double scale) const;

  Mat dense() const;
  double frob_norm() const;

 private:
  int n_ = 0;
  std::vector<Triplet> tri_;  // sorted by (row, col), deduplicated
};

// The linear map A(X) = (<A_1,X>, ..., <A_m,X>) and its adjoint.
class ConstraintStack {
 public:
  ConstraintStack() = default;
  ConstraintStack(int n, std::vector<SparseSymMat> mats);

  int dim() const { return n_; }
  int size() const { return static_cast<int>(mats_.size()); }
  const SparseSymMat& mat(int i) const { return mats_[i]; }

  Vec apply(const Mat& x) const;
  Mat adjoint(const Vec& y) const;

  // Gram matrix (A A*)_{ij} = <A_i, A_j>, plus shift on the diagonal.
  Mat gram(double shift = 0.0) const;

 private:
  int n_ = 0;
  std::vector<SparseSymMat> mats_;
};

struct EigenDecomp {
  Vec values;   // descending
  Mat vectors;  // orthonormal columns, M = V diag(values) V^T
};

// Dense symmetric eigendecomposition; throws on eigensolver breakdown.
EigenDecomp sym_eig(const Mat& m);

// Cached dense Cholesky factorization of a positive definite matrix.
// Construction fails (throws) when the matrix is not numerically PD.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(const Mat& m);
  Vec solve(const Vec& r) const;
  int dim() const { return static_cast<int>(llt_.rows()); }

 private:
  Eigen::LLT<Mat> llt_;
};

}  // namespace lssdp
