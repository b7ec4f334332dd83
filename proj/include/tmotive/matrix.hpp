#pragma once

// Small dense matrices over a ring type T (CinfElem, PolyT, FFElem, ...).
// T needs +, -, * and a zero value; the zero is passed in explicitly because
// our scalar types carry runtime context (field, ramification, precision).

#include <cstddef>
#include <functional>
#include <vector>

#include "tmotive/cinf.hpp"
#include "tmotive/error.hpp"

namespace tmotive {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const std::vector<T>& data() const { return a_; }

  template <class F>
  auto map(F&& f) const -> Matrix<std::invoke_result_t<F, const T&>> {
    using U = std::invoke_result_t<F, const T&>;
    Matrix<U> out;
    out.rows_ = rows_;
    out.cols_ = cols_;
    out.a_.reserve(a_.size());
    for (const auto& x : a_) out.a_.push_back(f(x));
    return out;
  }

  Matrix transpose() const {
    Matrix out = *this;
    out.rows_ = cols_;
    out.cols_ = rows_;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  /// Rows [r0, r0 + nr) and columns [c0, c0 + nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    require(r0 + nr <= rows_ && c0 + nc <= cols_, ErrorKind::domain, "block out of range");
    Matrix out;
    out.rows_ = nr;
    out.cols_ = nc;
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out.a_.push_back((*this)(r0 + i, c0 + j));
    return out;
  }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    require(r0 + b.rows_ <= rows_ && c0 + b.cols_ <= cols_, ErrorKind::domain, "block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    same_shape(x, y);
    Matrix out = x;
    for (std::size_t k = 0; k < out.a_.size(); ++k) out.a_[k] = x.a_[k] + y.a_[k];
    return out;
  }
  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    same_shape(x, y);
    Matrix out = x;
    for (std::size_t k = 0; k < out.a_.size(); ++k) out.a_[k] = x.a_[k] - y.a_[k];
    return out;
  }
  Matrix operator-() const {
    Matrix out = *this;
    for (auto& x : out.a_) x = -x;
    return out;
  }
  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    require(x.cols_ == y.rows_, ErrorKind::domain, "matrix product shape mismatch");
    require(x.cols_ > 0, ErrorKind::domain, "empty matrix product");
    Matrix out;
    out.rows_ = x.rows_;
    out.cols_ = y.cols_;
    out.a_.reserve(x.rows_ * y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t j = 0; j < y.cols_; ++j) {
        T acc = x(i, 0) * y(0, j);
        for (std::size_t k = 1; k < x.cols_; ++k) acc = acc + x(i, k) * y(k, j);
        out.a_.push_back(std::move(acc));
      }
    return out;
  }
  /// Entrywise left multiplication by a scalar.
  friend Matrix operator*(const T& s, const Matrix& x) {
    Matrix out = x;
    for (auto& e : out.a_) e = s * e;
    return out;
  }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

 private:
  template <class U>
  friend class Matrix;

  static void same_shape(const Matrix& x, const Matrix& y) {
    require(x.rows_ == y.rows_ && x.cols_ == y.cols_, ErrorKind::domain, "matrix shape mismatch");
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

using CMatrix = Matrix<CinfElem>;

/// n x n identity over C_infty at the given precision.
inline CMatrix identity_matrix(const FieldPtr& f, std::size_t n, std::int64_t ram, std::int64_t prec) {
  CMatrix m(n, n, CinfElem::zero(f, ram, prec));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = CinfElem::one(f, ram, prec);
  return m;
}

inline CMatrix zero_matrix(const FieldPtr& f, std::size_t r, std::size_t c, std::int64_t ram, std::int64_t prec) {
  return CMatrix(r, c, CinfElem::zero(f, ram, prec));
}

inline CMatrix twist(const CMatrix& m, std::int64_t i) {
  return m.map([i](const CinfElem& x) { return x.twist(i); });
}

inline CMatrix truncate(const CMatrix& m, std::int64_t prec) {
  return m.map([prec](const CinfElem& x) { return x.truncate(prec); });
}

/// Smallest order() over all entries (lower bound on the valuation, in exponent units).
inline std::int64_t min_order(const CMatrix& m) {
  std::int64_t v = std::numeric_limits<std::int64_t>::max();
  for (const auto& x : m.data()) v = std::min(v, x.order());
  return v;
}

inline std::int64_t min_prec(const CMatrix& m) {
  std::int64_t v = std::numeric_limits<std::int64_t>::max();
  for (const auto& x : m.data()) v = std::min(v, x.prec());
  return v;
}

inline bool agrees(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    if (!a.data()[k].agrees_with(b.data()[k])) return false;
  return true;
}

/// Inverse by Gauss-Jordan elimination, pivoting on the entry of smallest
/// valuation in each column.
inline CMatrix inverse(const CMatrix& a) {
  require(a.square(), ErrorKind::domain, "inverse of a non-square matrix");
  const std::size_t n = a.rows();
  CMatrix m = a;
  const auto& proto = a(0, 0);
  CMatrix inv = identity_matrix(proto.field(), n, proto.ram(), kExactPrec);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = col; r < n; ++r)
      if (!m(r, col).is_zero() && (piv == n || m(r, col).order() * m(piv, col).ram() < m(piv, col).order() * m(r, col).ram()))
        piv = r;
    require(piv != n, ErrorKind::singular, "matrix is singular to precision");
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    const CinfElem pinv = m(col, col).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      m(col, j) = pinv * m(col, j);
      inv(col, j) = pinv * inv(col, j);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const CinfElem f = m(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) = m(r, j) - f * m(col, j);
        inv(r, j) = inv(r, j) - f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Determinant by Gaussian elimination with valuation pivoting.
inline CinfElem determinant(const CMatrix& a) {
  require(a.square() && a.rows() > 0, ErrorKind::domain, "determinant of a non-square matrix");
  const std::size_t n = a.rows();
  CMatrix m = a;
  CinfElem det = CinfElem::one(a(0, 0).field(), a(0, 0).ram(), kExactPrec);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = col; r < n; ++r)
      if (!m(r, col).is_zero() && (piv == n || m(r, col).order() * m(piv, col).ram() < m(piv, col).order() * m(r, col).ram()))
        piv = r;
    if (piv == n) {
      // Zero to precision: the determinant is zero to the precision of the column.
      CinfElem z = m(col, col);
      for (std::size_t r = col; r < n; ++r) z = z + m(r, col);
      return det * z;
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      det = -det;
    }
    det = det * m(col, col);
    const CinfElem pinv = m(col, col).inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      const CinfElem f = m(r, col) * pinv;
      for (std::size_t j = col; j < n; ++j) m(r, j) = m(r, j) - f * m(col, j);
    }
  }
  return det;
}

}  // namespace tmotive
