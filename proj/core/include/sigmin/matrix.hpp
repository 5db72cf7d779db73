#pragma once

// Dense row-major matrix and small vector helpers. Deliberately minimal:
// the toolkit needs column norms, products, transposes and little else on
// the matrix side; all heavy numerics live in linalg.hpp.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace sigmin {

using Vector = std::vector<double>;

inline double dot(const Vector& a, const Vector& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vector& a) { return dot(a, a); }
inline double norm(const Vector& a) { return std::sqrt(norm_sq(a)); }

// y += c * x
inline void axpy(double c, const Vector& x, Vector& y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline void scale(Vector& x, double c) {
  for (auto& v : x) v *= c;
}

inline Vector sub(const Vector& a, const Vector& b) {
  assert(a.size() == b.size());
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return a_[i * cols_ + j];
  }

  double* row_ptr(std::size_t i) { return a_.data() + i * cols_; }
  const double* row_ptr(std::size_t i) const { return a_.data() + i * cols_; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // |A e_j|^2
  double col_norm_sq(std::size_t j) const {
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double v = (*this)(i, j);
      s += v * v;
    }
    return s;
  }

  Vector col(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Vector row(std::size_t i) const {
    return Vector(row_ptr(i), row_ptr(i) + cols_);
  }

  // squared Hilbert-Schmidt (Frobenius) norm
  double hs_norm_sq() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return s;
  }

  // A * x
  Vector apply(const Vector& x) const {
    assert(x.size() == cols_);
    Vector y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* r = row_ptr(i);
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
      y[i] = s;
    }
    return y;
  }

  // A^T * x
  Vector apply_transposed(const Vector& x) const {
    assert(x.size() == rows_);
    Vector y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* r = row_ptr(i);
      for (std::size_t j = 0; j < cols_; ++j) y[j] += r[j] * x[i];
    }
    return y;
  }

  Matrix mul(const Matrix& b) const {
    assert(cols_ == b.rows_);
    Matrix c(rows_, b.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const double aik = (*this)(i, k);
        if (aik == 0.0) continue;
        const double* brow = b.row_ptr(k);
        double* crow = c.row_ptr(i);
        for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
      }
    }
    return c;
  }

  // A^T A (symmetric positive semidefinite Gram matrix of the columns)
  Matrix gram() const {
    Matrix g(cols_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* r = row_ptr(i);
      for (std::size_t j = 0; j < cols_; ++j) {
        if (r[j] == 0.0) continue;
        for (std::size_t k = j; k < cols_; ++k) g(j, k) += r[j] * r[k];
      }
    }
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t k = 0; k < j; ++k) g(j, k) = g(k, j);
    return g;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
};

}  // namespace sigmin
