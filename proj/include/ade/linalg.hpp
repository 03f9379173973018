#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ade/error.hpp"
#include "ade/field.hpp"

namespace ade {

/// Dense matrix over a coefficient field; sizes here are tiny (n <= 15).
template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, const F& zero) : rows_(rows), cols_(cols), a_(rows * cols, zero) {}

  static Matrix identity(int n, const FieldOf<F>& field) {
    Matrix m(n, n, field(0));
    for (int i = 0; i < n; ++i) m(i, i) = field(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  F& operator()(int i, int j) { return a_[i * cols_ + j]; }
  const F& operator()(int i, int j) const { return a_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_, zero());
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::ShapeMismatch, "matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_, a.zero());
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  bool is_diagonal() const {
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (i != j && !(*this)(i, j).is_zero()) return false;
    return true;
  }

  F zero() const { return a_.empty() ? F() : a_[0] - a_[0]; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<F> a_;
};

/// Row echelon helpers over a field.
template <class F>
int rank(Matrix<F> m) {
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < m.rows(); ++i)
      if (!m(i, c).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(piv, j));
    F inv = m(r, c).inverse();
    for (int i = r + 1; i < m.rows(); ++i) {
      if (m(i, c).is_zero()) continue;
      F s = m(i, c) * inv;
      for (int j = c; j < m.cols(); ++j) m(i, j) -= s * m(r, j);
    }
    ++r;
  }
  return r;
}

template <class F>
F determinant(Matrix<F> m, const FieldOf<F>& field) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "determinant of non-square matrix");
  int n = m.rows();
  F det = field(1);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (!m(i, c).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) return field(0);
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
      det = -det;
    }
    det *= m(c, c);
    F inv = m(c, c).inverse();
    for (int i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      F s = m(i, c) * inv;
      for (int j = c; j < n; ++j) m(i, j) -= s * m(c, j);
    }
  }
  return det;
}

template <class F>
Matrix<F> inverse(const Matrix<F>& m, const FieldOf<F>& field) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "inverse of non-square matrix");
  int n = m.rows();
  Matrix<F> a = m, inv = Matrix<F>::identity(n, field);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (!a(i, c).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) throw Error(ErrorCode::NotInvertible, "singular matrix");
    for (int j = 0; j < n; ++j) {
      std::swap(a(c, j), a(piv, j));
      std::swap(inv(c, j), inv(piv, j));
    }
    F s = a(c, c).inverse();
    for (int j = 0; j < n; ++j) {
      a(c, j) *= s;
      inv(c, j) *= s;
    }
    for (int i = 0; i < n; ++i) {
      if (i == c || a(i, c).is_zero()) continue;
      F t = a(i, c);
      for (int j = 0; j < n; ++j) {
        a(i, j) -= t * a(c, j);
        inv(i, j) -= t * inv(c, j);
      }
    }
  }
  return inv;
}

/// Solves A u = b for some u (free unknowns set to zero), or nullopt when
/// the system is inconsistent.
template <class F>
std::optional<std::vector<F>> solve(Matrix<F> a, std::vector<F> b, const FieldOf<F>& field) {
  int rows = a.rows(), cols = a.cols();
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (!a(i, c).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < cols; ++j) std::swap(a(r, j), a(piv, j));
    std::swap(b[r], b[piv]);
    F inv = a(r, c).inverse();
    for (int j = 0; j < cols; ++j) a(r, j) *= inv;
    b[r] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      F s = a(i, c);
      for (int j = 0; j < cols; ++j) a(i, j) -= s * a(r, j);
      b[i] -= s * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (!b[i].is_zero()) return std::nullopt;
  std::vector<F> u(cols, field(0));
  for (int i = 0; i < r; ++i) u[pivot_col[i]] = b[i];
  return u;
}

}  // namespace ade
