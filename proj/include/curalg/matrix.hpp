#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "curalg/error.hpp"
#include "curalg/rational.hpp"

namespace curalg {

using VecQ = std::vector<Rational>;

inline bool vec_is_zero(const VecQ& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

inline VecQ& vec_axpy(VecQ& y, const Rational& a, const VecQ& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
  return y;
}

/// Dense row-major matrix over exact rationals.
class MatrixQ {
 public:
  MatrixQ() : rows_(0), cols_(0) {}
  MatrixQ(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols) {}

  MatrixQ(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    e_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(errc::PRECONDITION, "ragged initializer");
      for (long long x : r) e_.emplace_back(x);
    }
  }

  static MatrixQ identity(std::size_t n) {
    MatrixQ m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
  }

  static MatrixQ zero(std::size_t rows, std::size_t cols) { return MatrixQ(rows, cols); }

  static MatrixQ from_rows(const std::vector<VecQ>& rows) {
    MatrixQ m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw Error(errc::PRECONDITION, "ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  /// Column vector from a VecQ.
  static MatrixQ column(const VecQ& v) {
    MatrixQ m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.at(i, 0) = v[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
  Rational& operator()(std::size_t i, std::size_t j) { return at(i, j); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return at(i, j); }

  VecQ row(std::size_t i) const {
    return VecQ(e_.begin() + i * cols_, e_.begin() + (i + 1) * cols_);
  }
  VecQ col(std::size_t j) const {
    VecQ v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
  }
  void set_row(std::size_t i, const VecQ& v) {
    for (std::size_t j = 0; j < cols_; ++j) at(i, j) = v[j];
  }
  void set_col(std::size_t j, const VecQ& v) {
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
  }

  bool is_zero() const {
    for (const auto& x : e_)
      if (!x.is_zero()) return false;
    return true;
  }

  bool operator==(const MatrixQ& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }
  bool operator!=(const MatrixQ& o) const { return !(*this == o); }

  MatrixQ operator-() const {
    MatrixQ m(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = -e_[i];
    return m;
  }

  MatrixQ& operator+=(const MatrixQ& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
  }
  MatrixQ& operator-=(const MatrixQ& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
  }
  MatrixQ& operator*=(const Rational& s) {
    for (auto& x : e_) x *= s;
    return *this;
  }

  friend MatrixQ operator+(MatrixQ a, const MatrixQ& b) { return a += b; }
  friend MatrixQ operator-(MatrixQ a, const MatrixQ& b) { return a -= b; }
  friend MatrixQ operator*(MatrixQ a, const Rational& s) { return a *= s; }
  friend MatrixQ operator*(const Rational& s, MatrixQ a) { return a *= s; }

  friend MatrixQ operator*(const MatrixQ& a, const MatrixQ& b) {
    if (a.cols_ != b.rows_) throw Error(errc::PRECONDITION, "matmul shape mismatch");
    MatrixQ c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Rational& bkj = b.at(k, j);
          if (!bkj.is_zero()) c.at(i, j) += aik * bkj;
        }
      }
    return c;
  }

  VecQ apply(const VecQ& v) const {
    if (v.size() != cols_) throw Error(errc::PRECONDITION, "matvec shape mismatch");
    VecQ out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      Rational acc;
      for (std::size_t j = 0; j < cols_; ++j)
        if (!at(i, j).is_zero()) acc += at(i, j) * v[j];
      out[i] = acc;
    }
    return out;
  }

  MatrixQ transpose() const {
    MatrixQ t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  /// Kronecker product, row-major convention: (a ⊗ b)((i1,i2),(j1,j2)) = a(i1,j1) b(i2,j2).
  static MatrixQ kron(const MatrixQ& a, const MatrixQ& b) {
    MatrixQ c(a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (std::size_t i1 = 0; i1 < a.rows_; ++i1)
      for (std::size_t j1 = 0; j1 < a.cols_; ++j1) {
        const Rational& aij = a.at(i1, j1);
        if (aij.is_zero()) continue;
        for (std::size_t i2 = 0; i2 < b.rows_; ++i2)
          for (std::size_t j2 = 0; j2 < b.cols_; ++j2)
            c.at(i1 * b.rows_ + i2, j1 * b.cols_ + j2) = aij * b.at(i2, j2);
      }
    return c;
  }

  static MatrixQ commutator(const MatrixQ& a, const MatrixQ& b) { return a * b - b * a; }

  /// Stacks b below this matrix (column counts must match).
  static MatrixQ vstack(const MatrixQ& a, const MatrixQ& b) {
    if (a.cols_ != b.cols_ && a.rows_ != 0 && b.rows_ != 0)
      throw Error(errc::PRECONDITION, "vstack shape mismatch");
    const std::size_t cols = a.rows_ ? a.cols_ : b.cols_;
    MatrixQ m(a.rows_ + b.rows_, cols);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < cols; ++j) m.at(a.rows_ + i, j) = b.at(i, j);
    return m;
  }

  static MatrixQ hstack(const MatrixQ& a, const MatrixQ& b) {
    if (a.rows_ != b.rows_) throw Error(errc::PRECONDITION, "hstack shape mismatch");
    MatrixQ m(a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) m.at(i, j) = a.at(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) m.at(i, a.cols_ + j) = b.at(i, j);
    }
    return m;
  }

  /// 2x2 block matrix [[a, b], [c, d]].
  static MatrixQ blocks(const MatrixQ& a, const MatrixQ& b, const MatrixQ& c,
                        const MatrixQ& d) {
    return vstack(hstack(a, b), hstack(c, d));
  }

  Rational trace() const {
    Rational t;
    for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += at(i, i);
    return t;
  }

  /// Row-major flattening (used as the coordinate convention for Hom spaces).
  VecQ vec() const { return e_; }

  static MatrixQ unvec(const VecQ& v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) throw Error(errc::PRECONDITION, "unvec size mismatch");
    MatrixQ m(rows, cols);
    m.e_ = v;
    return m;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? "; " : "";
      for (std::size_t j = 0; j < cols_; ++j) s += (j ? "," : "") + at(i, j).str();
    }
    return s + "]";
  }

 private:
  void check_same_shape(const MatrixQ& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw Error(errc::PRECONDITION, "matrix shape mismatch");
  }

  std::size_t rows_, cols_;
  std::vector<Rational> e_;
};

struct RrefResult {
  MatrixQ reduced;
  std::vector<std::size_t> pivot_columns;
  std::size_t rank = 0;
};

/// Reduced row-echelon form by exact Gauss-Jordan elimination. The result is
/// the unique RREF of the input; pivot columns come out strictly increasing.
inline RrefResult rref(MatrixQ m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m.at(p, c).is_zero()) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = c; j < cols; ++j) std::swap(m.at(r, j), m.at(p, j));
    const Rational inv = m.at(r, c).inverse();
    for (std::size_t j = c; j < cols; ++j) m.at(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m.at(i, c).is_zero()) continue;
      const Rational f = m.at(i, c);
      for (std::size_t j = c; j < cols; ++j) m.at(i, j) -= f * m.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return RrefResult{std::move(m), std::move(pivots), r};
}

inline std::size_t rank(const MatrixQ& m) { return rref(m).rank; }

/// Solves m x = b. Returns a solution with all free variables set to zero
/// (deterministic), or nullopt when the system is inconsistent.
inline std::optional<VecQ> solve(const MatrixQ& m, const VecQ& b) {
  if (b.size() != m.rows()) throw Error(errc::PRECONDITION, "solve: rhs length mismatch");
  MatrixQ aug = MatrixQ::hstack(m, MatrixQ::column(b));
  RrefResult rr = rref(std::move(aug));
  VecQ x(m.cols());
  for (std::size_t i = 0; i < rr.rank; ++i) {
    if (rr.pivot_columns[i] == m.cols()) return std::nullopt;  // 0 = 1 row
    x[rr.pivot_columns[i]] = rr.reduced.at(i, m.cols());
  }
  return x;
}

/// Exact determinant via Gaussian elimination (square input required).
inline Rational det(MatrixQ m) {
  if (m.rows() != m.cols()) throw Error(errc::PRECONDITION, "det of non-square matrix");
  const std::size_t n = m.rows();
  Rational d(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m.at(p, c).is_zero()) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      for (std::size_t j = c; j < n; ++j) std::swap(m.at(c, j), m.at(p, j));
      d = -d;
    }
    d *= m.at(c, c);
    const Rational inv = m.at(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m.at(i, c).is_zero()) continue;
      const Rational f = m.at(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m.at(i, j) -= f * m.at(c, j);
    }
  }
  return d;
}

inline bool is_invertible(const MatrixQ& m) {
  return m.rows() == m.cols() && !det(m).is_zero();
}

/// Inverse of a square invertible matrix; throws DEGENERATE otherwise.
inline MatrixQ inverse(const MatrixQ& m) {
  if (m.rows() != m.cols()) throw Error(errc::PRECONDITION, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  RrefResult rr = rref(MatrixQ::hstack(m, MatrixQ::identity(n)));
  if (rr.rank < n || rr.pivot_columns[n - 1] != n - 1)
    throw Error(errc::DEGENERATE, "matrix is singular");
  MatrixQ inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = rr.reduced.at(i, n + j);
  return inv;
}

}  // namespace curalg
