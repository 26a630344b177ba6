#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "curalg/error.hpp"
#include "curalg/matrix.hpp"

namespace curalg {

/// A linear subspace of Q^n held by its canonical basis: the rows of `basis()`
/// are in reduced row-echelon form with no zero rows. Two subspaces are equal
/// iff their basis matrices are entrywise equal.
class Subspace {
 public:
  explicit Subspace(std::size_t ambient_dim)
      : ambient_(ambient_dim), basis_(0, ambient_dim) {}

  /// Canonicalizes an arbitrary spanning set given as matrix rows.
  static Subspace from_rows(const MatrixQ& rows) {
    Subspace s(rows.cols());
    RrefResult rr = rref(rows);
    MatrixQ b(rr.rank, rows.cols());
    for (std::size_t i = 0; i < rr.rank; ++i)
      for (std::size_t j = 0; j < rows.cols(); ++j) b.at(i, j) = rr.reduced.at(i, j);
    s.basis_ = std::move(b);
    s.pivots_ = std::move(rr.pivot_columns);
    return s;
  }

  static Subspace from_vectors(const std::vector<VecQ>& vectors, std::size_t ambient) {
    if (vectors.empty()) return Subspace(ambient);
    return from_rows(MatrixQ::from_rows(vectors));
  }

  static Subspace full(std::size_t ambient) {
    return from_rows(MatrixQ::identity(ambient));
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const MatrixQ& basis() const { return basis_; }
  const std::vector<std::size_t>& pivot_columns() const { return pivots_; }
  VecQ basis_vector(std::size_t i) const { return basis_.row(i); }

  bool operator==(const Subspace& o) const {
    return ambient_ == o.ambient_ && basis_ == o.basis_;
  }
  bool operator!=(const Subspace& o) const { return !(*this == o); }

  /// Reduces v modulo the subspace; the residual is zero iff v lies in it.
  VecQ reduce(VecQ v) const {
    check_ambient(v.size());
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
      const Rational& c = v[pivots_[i]];
      if (c.is_zero()) continue;
      const Rational f = c;  // pivot entries are 1
      for (std::size_t j = 0; j < ambient_; ++j)
        if (!basis_.at(i, j).is_zero()) v[j] -= f * basis_.at(i, j);
    }
    return v;
  }

  bool contains_vector(const VecQ& v) const { return vec_is_zero(reduce(v)); }

  /// Coordinates of v in the canonical basis, or nullopt if v is outside.
  std::optional<VecQ> coordinates_of(const VecQ& v) const {
    check_ambient(v.size());
    VecQ coords(dim());
    VecQ rem = v;
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
      const Rational c = rem[pivots_[i]];
      coords[i] = c;
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < ambient_; ++j)
        if (!basis_.at(i, j).is_zero()) rem[j] -= c * basis_.at(i, j);
    }
    if (!vec_is_zero(rem)) return std::nullopt;
    return coords;
  }

  bool contains(const Subspace& other) const {
    check_ambient(other.ambient_);
    for (std::size_t i = 0; i < other.dim(); ++i)
      if (!contains_vector(other.basis_.row(i))) return false;
    return true;
  }

  Subspace sum(const Subspace& other) const {
    check_ambient(other.ambient_);
    return from_rows(MatrixQ::vstack(basis_, other.basis_));
  }

  /// Intersection via the kernel of [Aᵀ | -Bᵀ].
  Subspace intersection(const Subspace& other) const;

  /// dim(*this) - dim(*this ∩ b); the quotient dimension of (*this mod b)
  /// when b is contained in *this.
  std::size_t quotient_dim(const Subspace& b) const {
    check_ambient(b.ambient_);
    return dim() - intersection(b).dim();
  }

 private:
  void check_ambient(std::size_t n) const {
    if (n != ambient_)
      throw Error(errc::AMBIENT_MISMATCH, "subspace ambient dimension mismatch");
  }

  std::size_t ambient_;
  MatrixQ basis_;
  std::vector<std::size_t> pivots_;
};

/// Kernel {v : m v = 0} as a canonical subspace of Q^cols.
inline Subspace kernel_basis(const MatrixQ& m) {
  RrefResult rr = rref(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : rr.pivot_columns) is_pivot[p] = true;
  std::vector<VecQ> vectors;
  vectors.reserve(n - rr.rank);
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    VecQ v(n);
    v[f] = Rational(1);
    for (std::size_t i = 0; i < rr.rank; ++i)
      v[rr.pivot_columns[i]] = -rr.reduced.at(i, f);
    vectors.push_back(std::move(v));
  }
  return Subspace::from_vectors(vectors, n);
}

inline Subspace Subspace::intersection(const Subspace& other) const {
  check_ambient(other.ambient_);
  if (dim() == 0 || other.dim() == 0) return Subspace(ambient_);
  const MatrixQ at = basis_.transpose();
  const MatrixQ bt = other.basis_.transpose();
  MatrixQ m(ambient_, dim() + other.dim());
  for (std::size_t i = 0; i < ambient_; ++i) {
    for (std::size_t j = 0; j < dim(); ++j) m.at(i, j) = at.at(i, j);
    for (std::size_t j = 0; j < other.dim(); ++j) m.at(i, dim() + j) = -bt.at(i, j);
  }
  Subspace ker = kernel_basis(m);
  std::vector<VecQ> vecs;
  vecs.reserve(ker.dim());
  for (std::size_t k = 0; k < ker.dim(); ++k) {
    VecQ kv = ker.basis_vector(k);
    VecQ x(ambient_);
    for (std::size_t j = 0; j < dim(); ++j)
      if (!kv[j].is_zero())
        for (std::size_t c = 0; c < ambient_; ++c) x[c] += kv[j] * basis_.at(j, c);
    vecs.push_back(std::move(x));
  }
  return Subspace::from_vectors(vecs, ambient_);
}

}  // namespace curalg
