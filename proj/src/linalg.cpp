#include "lssdp/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace lssdp {

SparseSymMat::SparseSymMat(int n, std::vector<Triplet> entries) : n_(n) {
  require(n >= 1, "SparseSymMat: dimension must be >= 1");
  for (auto& t : entries) {
    require(t.row >= 0 && t.row < n && t.col >= 0 && t.col < n,
            "SparseSymMat: index out of range");
    if (t.row > t.col) std::swap(t.row, t.col);
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  // merge duplicates by summation
  tri_.reserve(entries.size());
  for (const auto& t : entries) {
    if (!tri_.empty() && tri_.back().row == t.row && tri_.back().col == t.col) {
      tri_.back().value += t.value;
    } else {
      tri_.push_back(t);
    }
  }
}

double SparseSymMat::inner(const Mat& x) const {
  double s = 0.0;
  for (const auto& t : tri_) {
    s += (t.row == t.col) ? t.value * x(t.row, t.col)
                          : 2.0 * t.value * x(t.row, t.col);
  }
  return s;
}

double SparseSymMat::inner(const SparseSymMat& other) const {
  // both triplet lists are sorted; merge
  double s = 0.0;
  auto a = tri_.begin();
  auto b = other.tri_.begin();
  while (a != tri_.end() && b != other.tri_.end()) {
    if (a->row != b->row ? a->row < b->row : a->col < b->col) {
      ++a;
    } else if (a->row != b->row ? b->row < a->row : b->col < a->col) {
      ++b;
    } else {
      s += (a->row == a->col) ? a->value * b->value : 2.0 * a->value * b->value;
      ++a;
      ++b;
    }
  }
  return s;
}

void SparseSymMat::add_scaled_to(Mat& m, double scale) const {
  for (const auto& t : tri_) {
    m(t.row, t.col) += scale * t.value;
    if (t.row != t.col) m(t.col, t.row) += scale * t.value;
  }
}

Mat SparseSymMat::dense() const {
  Mat m = Mat::Zero(n_, n_);
  add_scaled_to(m, 1.0);
  return m;
}

double SparseSymMat::frob_norm() const {
  double s = 0.0;
  for (const auto& t : tri_)
    s += (t.row == t.col) ? t.value * t.value : 2.0 * t.value * t.value;
  return std::sqrt(s);
}

ConstraintStack::ConstraintStack(int n, std::vector<SparseSymMat> mats)
    : n_(n), mats_(std::move(mats)) {
  require(n >= 1, "ConstraintStack: dimension must be >= 1");
  for (const auto& m : mats_)
    require(m.dim() == n, "ConstraintStack: member dimension mismatch");
}

Vec ConstraintStack::apply(const Mat& x) const {
  require(x.rows() == n_ && x.cols() == n_, "ConstraintStack::apply: dimension mismatch");
  Vec y(size());
  for (int i = 0; i < size(); ++i) y(i) = mats_[i].inner(x);
  return y;
}

Mat ConstraintStack::adjoint(const Vec& y) const {
  require(y.size() == size(), "ConstraintStack::adjoint: length mismatch");
  Mat m = Mat::Zero(n_, n_);
  for (int i = 0; i < size(); ++i) {
    if (y(i) != 0.0) mats_[i].add_scaled_to(m, y(i));
  }
  return m;
}

Mat ConstraintStack::gram(double shift) const {
  require(size() >= 1, "ConstraintStack::gram: empty stack");
  const int m = size();
  Mat g(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const double v = mats_[i].inner(mats_[j]);
      g(i, j) = v;
      g(j, i) = v;
    }
    g(i, i) += shift;
  }
  return g;
}

EigenDecomp sym_eig(const Mat& m) {
  require(m.rows() == m.cols(), "sym_eig: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(m));
  require(es.info() == Eigen::Success, "sym_eig: eigensolver did not converge");
  // Eigen returns ascending order; flip to descending.
  const int n = static_cast<int>(m.rows());
  EigenDecomp d;
  d.values = es.eigenvalues().reverse();
  d.vectors.resize(n, n);
  for (int i = 0; i < n; ++i) d.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  return d;
}

CholeskyFactor::CholeskyFactor(const Mat& m) {
  require(m.rows() == m.cols(), "CholeskyFactor: matrix must be square");
  llt_.compute(m);
  require(llt_.info() == Eigen::Success,
          "CholeskyFactor: matrix is not numerically positive definite");
}

Vec CholeskyFactor::solve(const Vec& r) const {
  require(r.size() == llt_.rows(), "CholeskyFactor::solve: length mismatch");
  return llt_.solve(r);
}

}  // namespace lssdp
