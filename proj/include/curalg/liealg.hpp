#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curalg/error.hpp"
#include "curalg/matrix.hpp"
#include "curalg/subspace.hpp"

namespace curalg {

/// Root-space bookkeeping for algebras with a triangular decomposition:
/// index sets into the basis for n+, h, n-, the highest-root vectors as
/// coordinate vectors, and theta as a functional on the h basis.
struct TriangularData {
  std::vector<std::size_t> nplus, h, nminus;
  VecQ x_theta_plus, x_theta_minus;
  VecQ theta;
};

using SparseBracket = std::vector<std::pair<std::size_t, Rational>>;

/// Finite-dimensional Lie algebra given by structure constants on a fixed
/// basis. Antisymmetry and the Jacobi identity are verified at construction.
class LieAlgebra {
 public:
  LieAlgebra(std::size_t dim, std::vector<std::string> names,
             std::vector<std::vector<SparseBracket>> table,
             std::optional<TriangularData> tri = std::nullopt)
      : dim_(dim), names_(std::move(names)), table_(std::move(table)), tri_(std::move(tri)) {
    if (names_.size() != dim_ || table_.size() != dim_)
      throw Error(errc::PRECONDITION, "lie algebra table size mismatch");
    for (auto& row : table_)
      if (row.size() != dim_) throw Error(errc::PRECONDITION, "lie algebra table size mismatch");
    validate();
  }

  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& basis_names() const { return names_; }
  const std::optional<TriangularData>& triangular() const { return tri_; }

  const SparseBracket& bracket_sparse(std::size_t i, std::size_t j) const {
    return table_[i][j];
  }

  VecQ bracket_basis(std::size_t i, std::size_t j) const {
    VecQ v(dim_);
    for (const auto& [k, c] : table_[i][j]) v[k] += c;
    return v;
  }

  /// [x, y] for coordinate vectors.
  VecQ bracket(const VecQ& x, const VecQ& y) const {
    VecQ v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (y[j].is_zero()) continue;
        const Rational f = x[i] * y[j];
        for (const auto& [k, c] : table_[i][j]) v[k] += f * c;
      }
    }
    return v;
  }

  bool operator==(const LieAlgebra& o) const {
    if (dim_ != o.dim_) return false;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        if (bracket_basis(i, j) != o.bracket_basis(i, j)) return false;
    return true;
  }

 private:
  void validate() const {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j) {
        VecQ fwd = bracket_basis(i, j);
        VecQ bwd = bracket_basis(j, i);
        for (std::size_t k = 0; k < dim_; ++k)
          if (fwd[k] != -bwd[k])
            throw Error(errc::NOT_ANTISYMMETRIC, "bracket(" + names_[i] + "," + names_[j] +
                        ") is not antisymmetric",
                        {static_cast<long long>(i), static_cast<long long>(j)});
      }
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j)
        for (std::size_t k = j + 1; k < dim_; ++k) {
          VecQ s = bracket(bracket_basis(i, j), unit(k));
          vec_axpy(s, Rational(1), bracket(bracket_basis(j, k), unit(i)));
          vec_axpy(s, Rational(1), bracket(bracket_basis(k, i), unit(j)));
          if (!vec_is_zero(s))
            throw Error(errc::JACOBI_FAILS, "Jacobi identity fails on basis triple",
                        {static_cast<long long>(i), static_cast<long long>(j),
                         static_cast<long long>(k)});
        }
    if (tri_) {
      const auto& t = *tri_;
      if (t.theta.size() != t.h.size() || t.x_theta_plus.size() != dim_ ||
          t.x_theta_minus.size() != dim_)
        throw Error(errc::PRECONDITION, "triangular data shape mismatch");
      for (std::size_t a : t.h)
        for (std::size_t b : t.h)
          if (!vec_is_zero(bracket_basis(a, b)))
            throw Error(errc::PRECONDITION, "h is not abelian");
      for (std::size_t hi = 0; hi < t.h.size(); ++hi) {
        VecQ lhs = bracket(unit(t.h[hi]), t.x_theta_plus);
        VecQ rhs = t.x_theta_plus;
        for (auto& c : rhs) c *= t.theta[hi];
        if (lhs != rhs)
          throw Error(errc::PRECONDITION, "x_theta_plus is not a theta eigenvector");
        VecQ lhs2 = bracket(unit(t.h[hi]), t.x_theta_minus);
        VecQ rhs2 = t.x_theta_minus;
        for (auto& c : rhs2) c *= -t.theta[hi];
        if (lhs2 != rhs2)
          throw Error(errc::PRECONDITION, "x_theta_minus is not a -theta eigenvector");
      }
    }
  }

  VecQ unit(std::size_t i) const {
    VecQ v(dim_);
    v[i] = Rational(1);
    return v;
  }

  std::size_t dim_;
  std::vector<std::string> names_;
  std::vector<std::vector<SparseBracket>> table_;
  std::optional<TriangularData> tri_;
};

using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

/// Builds a validated algebra from a sparse bracket table. Pairs may be given
/// in one orientation only; the antisymmetric completion is applied first.
/// Throws NOT_ANTISYMMETRIC (conflicting entries) or JACOBI_FAILS.
inline AlgebraPtr make_algebra(
    std::size_t dim, std::vector<std::string> names,
    const std::vector<std::tuple<std::size_t, std::size_t, SparseBracket>>& entries,
    std::optional<TriangularData> tri = std::nullopt) {
  std::vector<std::vector<SparseBracket>> table(dim, std::vector<SparseBracket>(dim));
  std::vector<std::vector<bool>> given(dim, std::vector<bool>(dim, false));
  for (const auto& [i, j, br] : entries) {
    if (i >= dim || j >= dim) throw Error(errc::PRECONDITION, "bracket index out of range");
    table[i][j] = br;
    given[i][j] = true;
  }
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (given[i][j] && !given[j][i]) {
        SparseBracket neg;
        for (const auto& [k, c] : table[i][j]) neg.emplace_back(k, -c);
        table[j][i] = std::move(neg);
      }
  return std::make_shared<LieAlgebra>(dim, std::move(names), std::move(table), std::move(tri));
}

/// Structure constants from an explicit matrix realization: brackets are
/// matrix commutators re-expanded in the given (linearly independent) basis.
inline AlgebraPtr algebra_from_matrix_basis(std::vector<std::string> names,
                                            const std::vector<MatrixQ>& basis,
                                            std::optional<TriangularData> tri = std::nullopt) {
  const std::size_t dim = basis.size();
  if (dim == 0) throw Error(errc::PRECONDITION, "empty matrix basis");
  const std::size_t n2 = basis[0].rows() * basis[0].cols();
  MatrixQ span(n2, dim);
  for (std::size_t k = 0; k < dim; ++k) span.set_col(k, basis[k].vec());
  std::vector<std::vector<SparseBracket>> table(dim, std::vector<SparseBracket>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      MatrixQ comm = MatrixQ::commutator(basis[i], basis[j]);
      auto coords = solve(span, comm.vec());
      if (!coords)
        throw Error(errc::PRECONDITION, "matrix basis is not closed under commutators");
      SparseBracket br, neg;
      for (std::size_t k = 0; k < dim; ++k)
        if (!(*coords)[k].is_zero()) {
          br.emplace_back(k, (*coords)[k]);
          neg.emplace_back(k, -(*coords)[k]);
        }
      table[i][j] = std::move(br);
      table[j][i] = std::move(neg);
    }
  return std::make_shared<LieAlgebra>(dim, std::move(names), std::move(table), std::move(tri));
}

enum class ClassicalFamily { sl, so };

namespace detail {

inline MatrixQ eij(std::size_t n, std::size_t i, std::size_t j) {
  MatrixQ m(n, n);
  m.at(i, j) = Rational(1);
  return m;
}

struct ClassicalBasis {
  std::vector<std::string> names;
  std::vector<MatrixQ> mats;
};

inline ClassicalBasis sl_basis(std::size_t n) {
  ClassicalBasis b;
  auto name = [](const char* p, std::size_t i, std::size_t j) {
    return std::string(p) + std::to_string(i + 1) + "_" + std::to_string(j + 1);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      b.names.push_back(name("E", i, j));
      b.mats.push_back(eij(n, i, j));
    }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    b.names.push_back("H" + std::to_string(i + 1));
    b.mats.push_back(eij(n, i, i) - eij(n, i + 1, i + 1));
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) {
      b.names.push_back(name("E", i, j));
      b.mats.push_back(eij(n, i, j));
    }
  return b;
}

inline ClassicalBasis so_basis(std::size_t n) {
  ClassicalBasis b;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      b.names.push_back("A" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
      b.mats.push_back(eij(n, i, j) - eij(n, j, i));
    }
  return b;
}

}  // namespace detail

/// sl(n) on E_ij / H_i with triangular data (n+ first, then h, then n-;
/// highest root vectors E_{1,n} and E_{n,1}), or so(n) on A_ij = E_ij - E_ji.
/// The compact so(n) basis has no rational root-space data; the split form
/// is available as split_so_algebra.
inline AlgebraPtr classical_algebra(ClassicalFamily family, std::size_t n) {
  if (family == ClassicalFamily::sl) {
    if (n < 2) throw Error(errc::BAD_RANK, "sl(n) needs n >= 2");
    auto b = detail::sl_basis(n);
    const std::size_t pos = n * (n - 1) / 2;
    TriangularData tri;
    for (std::size_t k = 0; k < pos; ++k) tri.nplus.push_back(k);
    for (std::size_t k = 0; k < n - 1; ++k) tri.h.push_back(pos + k);
    for (std::size_t k = 0; k < pos; ++k) tri.nminus.push_back(pos + (n - 1) + k);
    const std::size_t dim = 2 * pos + (n - 1);
    tri.x_theta_plus.assign(dim, Rational(0));
    tri.x_theta_plus[n - 2] = Rational(1);  // E_{1,n} is the last j in the i=0 run
    tri.x_theta_minus.assign(dim, Rational(0));
    // E_{n,1} closes the j = 1 column of the lower run
    tri.x_theta_minus[pos + (n - 1) + (n - 2)] = Rational(1);
    tri.theta.assign(n - 1, Rational(0));
    tri.theta[0] += Rational(1);
    tri.theta[n - 2] += Rational(1);  // for n = 2 both land on H1, giving 2
    return algebra_from_matrix_basis(std::move(b.names), b.mats, std::move(tri));
  }
  if (n < 3) throw Error(errc::BAD_RANK, "so(n) needs n >= 3");
  auto b = detail::so_basis(n);
  return algebra_from_matrix_basis(std::move(b.names), b.mats);
}

namespace detail {

struct SplitSoBasis {
  std::vector<std::string> names;
  std::vector<MatrixQ> mats;
  TriangularData tri;
};

SplitSoBasis split_so_basis(std::size_t n);

}  // namespace detail

/// The split orthogonal algebra so(n, J) with J the antidiagonal form:
/// upper-triangular matrices of the algebra give n+, so genuine rational
/// root-space data exists. Basis M_ij = E_ij - E_{n+1-j, n+1-i}.
inline AlgebraPtr split_so_algebra(std::size_t n) {
  auto b = detail::split_so_basis(n);
  return algebra_from_matrix_basis(std::move(b.names), b.mats, std::move(b.tri));
}

inline detail::SplitSoBasis detail::split_so_basis(std::size_t n) {
  if (n < 3) throw Error(errc::BAD_RANK, "split so(n) needs n >= 3");
  const std::size_t m = n / 2;
  auto partner = [n](std::size_t i, std::size_t j) {
    return std::pair<std::size_t, std::size_t>(n - 1 - j, n - 1 - i);
  };
  auto mij = [&](std::size_t i, std::size_t j) {
    return detail::eij(n, i, j) - detail::eij(n, n - 1 - j, n - 1 - i);
  };
  std::vector<std::string> names;
  std::vector<MatrixQ> mats;
  std::vector<std::pair<std::size_t, std::size_t>> upper;
  TriangularData tri;
  auto is_rep = [&](std::size_t i, std::size_t j) {
    auto [pi, pj] = partner(i, j);
    return std::pair(i, j) <= std::pair(pi, pj);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (i + j == n - 1 || !is_rep(i, j)) continue;
      tri.nplus.push_back(mats.size());
      upper.emplace_back(i, j);
      names.push_back("M" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
      mats.push_back(mij(i, j));
    }
  for (std::size_t k = 0; k < m; ++k) {
    tri.h.push_back(mats.size());
    names.push_back("D" + std::to_string(k + 1));
    mats.push_back(detail::eij(n, k, k) - detail::eij(n, n - 1 - k, n - 1 - k));
  }
  for (const auto& [i, j] : upper) {
    tri.nminus.push_back(mats.size());
    names.push_back("M" + std::to_string(j + 1) + "_" + std::to_string(i + 1));
    mats.push_back(mij(j, i));
  }
  const std::size_t dim = mats.size();
  // highest root vector: M_{1,2} for so(3), M_{1,n-1} otherwise (1-based)
  const std::pair<std::size_t, std::size_t> top =
      (n == 3) ? std::pair<std::size_t, std::size_t>(0, 1)
               : std::pair<std::size_t, std::size_t>(0, n - 2);
  tri.x_theta_plus.assign(dim, Rational(0));
  tri.x_theta_minus.assign(dim, Rational(0));
  for (std::size_t k = 0; k < upper.size(); ++k) {
    if (upper[k] == top) {
      tri.x_theta_plus[tri.nplus[k]] = Rational(1);
      tri.x_theta_minus[tri.nminus[k]] = Rational(1);
    }
  }
  tri.theta.assign(m, Rational(0));
  if (n == 3) {
    tri.theta[0] = Rational(1);
  } else {
    tri.theta[0] = Rational(1);
    tri.theta[1] = Rational(1);
  }
  return {std::move(names), std::move(mats), std::move(tri)};
}

/// True iff span{[x_i, x_j]} has full dimension.
inline bool is_perfect(const LieAlgebra& L) {
  std::vector<VecQ> rows;
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t j = i + 1; j < L.dim(); ++j) rows.push_back(L.bracket_basis(i, j));
  return Subspace::from_vectors(rows, L.dim()).dim() == L.dim();
}

/// A representation: one matrix per basis element. The bracket identity
/// rho([x,y]) = [rho(x), rho(y)] is checked on construction.
struct Rep {
  AlgebraPtr algebra;
  std::size_t space_dim = 0;
  std::vector<MatrixQ> matrices;

  Rep() = default;
  Rep(AlgebraPtr alg, std::vector<MatrixQ> mats, bool check = true)
      : algebra(std::move(alg)), matrices(std::move(mats)) {
    if (matrices.size() != algebra->dim())
      throw Error(errc::PRECONDITION, "rep needs one matrix per basis element");
    space_dim = matrices.empty() ? 0 : matrices[0].rows();
    for (const auto& mt : matrices)
      if (mt.rows() != space_dim || mt.cols() != space_dim)
        throw Error(errc::PRECONDITION, "rep matrices must be square of equal size");
    if (check && !bracket_identity_holds())
      throw Error(errc::PRECONDITION, "rep does not satisfy the bracket identity");
  }

  bool bracket_identity_holds() const {
    const auto& L = *algebra;
    for (std::size_t i = 0; i < L.dim(); ++i)
      for (std::size_t j = i + 1; j < L.dim(); ++j) {
        MatrixQ lhs(space_dim, space_dim);
        for (const auto& [k, c] : L.bracket_sparse(i, j)) lhs += matrices[k] * c;
        if (lhs != MatrixQ::commutator(matrices[i], matrices[j])) return false;
      }
    return true;
  }

  /// rho(x) for a coordinate vector.
  MatrixQ of(const VecQ& x) const {
    MatrixQ r(space_dim, space_dim);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!x[i].is_zero()) r += matrices[i] * x[i];
    return r;
  }
};

inline Rep adjoint_rep(const AlgebraPtr& L) {
  std::vector<MatrixQ> mats;
  mats.reserve(L->dim());
  for (std::size_t i = 0; i < L->dim(); ++i) {
    MatrixQ m(L->dim(), L->dim());
    for (std::size_t j = 0; j < L->dim(); ++j) m.set_col(j, L->bracket_basis(i, j));
    mats.push_back(std::move(m));
  }
  return Rep(L, std::move(mats));
}

inline Rep trivial_rep(const AlgebraPtr& L, std::size_t space_dim = 1) {
  return Rep(L, std::vector<MatrixQ>(L->dim(), MatrixQ::zero(space_dim, space_dim)));
}

/// Hom_a(V1, V2): all phi with phi rho1(x) = rho2(x) phi, as a canonical
/// subspace of the row-major coordinates of n2 x n1 matrices.
inline Subspace hom_space(const Rep& rho1, const Rep& rho2) {
  if (!(*rho1.algebra == *rho2.algebra))
    throw Error(errc::PRECONDITION, "hom_space needs reps of the same algebra");
  const std::size_t n1 = rho1.space_dim, n2 = rho2.space_dim, d = rho1.algebra->dim();
  MatrixQ cond(d * n1 * n2, n1 * n2);
  for (std::size_t t = 0; t < d; ++t) {
    const MatrixQ& r1 = rho1.matrices[t];
    const MatrixQ& r2 = rho2.matrices[t];
    for (std::size_t a = 0; a < n2; ++a)
      for (std::size_t b = 0; b < n1; ++b) {
        const std::size_t row = t * n1 * n2 + a * n1 + b;
        for (std::size_t c = 0; c < n1; ++c) cond.at(row, a * n1 + c) += r1.at(c, b);
        for (std::size_t c = 0; c < n2; ++c) cond.at(row, c * n1 + b) -= r2.at(a, c);
      }
  }
  return kernel_basis(cond);
}

/// The invariant symmetric bilinear form of rho, when it is unique up to
/// scale and nondegenerate. Normalized so the first nonzero entry in
/// row-major order is 1. Throws NO_FORM, NOT_UNIQUE or DEGENERATE.
inline MatrixQ invariant_symmetric_form(const Rep& rho) {
  const std::size_t n = rho.space_dim, d = rho.algebra->dim();
  // unknown B (n x n), conditions: B = B^T and rho(x)^T B + B rho(x) = 0
  const std::size_t sym_rows = n * (n - 1) / 2;
  MatrixQ cond(sym_rows + d * n * n, n * n);
  std::size_t row = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      cond.at(row, u * n + v) = Rational(1);
      cond.at(row, v * n + u) = Rational(-1);
      ++row;
    }
  for (std::size_t t = 0; t < d; ++t) {
    const MatrixQ& r = rho.matrices[t];
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t c = 0; c < n; ++c) {
          cond.at(row, c * n + b) += r.at(c, a);  // (rho^T B)(a,b)
          cond.at(row, a * n + c) += r.at(c, b);  // (B rho)(a,b)
        }
        ++row;
      }
  }
  Subspace sol = kernel_basis(cond);
  if (sol.dim() == 0) throw Error(errc::NO_FORM, "no invariant symmetric form");
  if (sol.dim() > 1)
    throw Error(errc::NOT_UNIQUE, "invariant symmetric form is not unique",
                {static_cast<long long>(sol.dim())});
  VecQ b = sol.basis_vector(0);
  Rational lead;
  for (const auto& x : b)
    if (!x.is_zero()) { lead = x; break; }
  for (auto& x : b) x /= lead;
  MatrixQ B = MatrixQ::unvec(b, n, n);
  if (!is_invertible(B)) throw Error(errc::DEGENERATE, "invariant form is degenerate");
  return B;
}

}  // namespace curalg
