#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curalg/curmod.hpp"
#include "curalg/error.hpp"
#include "curalg/freelie.hpp"
#include "curalg/liealg.hpp"

namespace curalg {

/// Polynomial in the symmetric algebra S(a), keyed by exponent vectors.
struct SymPoly {
  std::map<std::vector<int>, Rational> terms;

  void add(const std::vector<int>& alpha, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms.emplace(alpha, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
};

struct IdealSpec {
  enum class Flavor { Tensor, Symmetric };
  Flavor flavor = Flavor::Tensor;
  /// Homogeneous generators; one degree per polynomial. Graded ideals keep
  /// the truncation at degree N honest (saturating an inhomogeneous ideal
  /// pulls low-degree elements down and collapses the quotient).
  std::vector<TensorPoly> tensor_generators;
  std::vector<SymPoly> sym_generators;
  /// When set, failing containment of ker tau in the generated ideal is an
  /// error instead of a weaker certificate.
  bool require_ker_tau_containment = false;
};

struct GradedModuleReport {
  std::size_t total_dim = 0;
  std::vector<std::size_t> per_degree;
};

/// A PairModule together with the grading of its coordinates (degree of each
/// basis vector in the construction it came from).
struct GradedModule {
  PairModule module;
  GradedModuleReport report;
  std::vector<int> coord_degree;
};

namespace detail {

/// Incremental row-echelon span with exact pivots, for closure loops.
class IncrementalSpan {
 public:
  explicit IncrementalSpan(std::size_t ambient) : ambient_(ambient) {}

  std::size_t dim() const { return rows_.size(); }
  const std::vector<VecQ>& rows() const { return rows_; }

  VecQ reduce(VecQ v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational& c = v[pivot_[i]];
      if (!c.is_zero()) vec_axpy(v, -c, rows_[i]);
    }
    return v;
  }

  /// Returns true when v enlarged the span.
  bool insert(VecQ v) {
    v = reduce(std::move(v));
    std::size_t p = 0;
    while (p < ambient_ && v[p].is_zero()) ++p;
    if (p == ambient_) return false;
    const Rational inv = v[p].inverse();
    for (auto& c : v) c *= inv;
    rows_.push_back(std::move(v));
    pivot_.push_back(p);
    return true;
  }

  Subspace to_subspace() const { return Subspace::from_vectors(rows_, ambient_); }

 private:
  std::size_t ambient_;
  std::vector<VecQ> rows_;
  std::vector<std::size_t> pivot_;
};

/// A graded two-sided ideal of ⊕_{1<=r<=N} T^r held degree by degree, closed
/// under ad_T and one-sided multiplications; degree-N overflows are pure
/// degree N+1 elements and land in the saturation.
struct GradedIdeal {
  int d, N;
  std::vector<IncrementalSpan> piece;  // piece[r], r = 0..N

  GradedIdeal(int d_, int N_) : d(d_), N(N_) {
    std::uint64_t pw = 1;
    for (int r = 0; r <= N; ++r) {
      piece.emplace_back(pw);
      pw *= d;
    }
  }

  void close(const LieAlgebra& L, std::vector<TensorPoly> worklist) {
    while (!worklist.empty()) {
      TensorPoly p = std::move(worklist.back());
      worklist.pop_back();
      for (std::size_t i = 0; i < L.dim(); ++i) {
        VecQ x(L.dim());
        x[i] = Rational(1);
        std::vector<TensorPoly> images;
        images.push_back(ad_T(L, x, p));
        if (p.degree < N) {
          TensorPoly e = TensorPoly::monomial({static_cast<int>(i)}, d);
          images.push_back(concat(e, p));
          images.push_back(concat(p, e));
        }
        for (TensorPoly& img : images) {
          if (img.is_zero()) continue;
          VecQ red = piece[img.degree].reduce(img.dense());
          if (!vec_is_zero(red)) {
            piece[img.degree].insert(red);
            worklist.push_back(TensorPoly::from_dense(red, img.degree, d));
          }
        }
      }
    }
  }

  bool insert_seed(const TensorPoly& p, std::vector<TensorPoly>& worklist) {
    if (p.is_zero()) return false;
    if (p.degree < 1 || p.degree > N)
      throw Error(errc::PRECONDITION, "generator degree outside 1..N");
    VecQ red = piece[p.degree].reduce(p.dense());
    if (vec_is_zero(red)) return false;
    piece[p.degree].insert(red);
    worklist.push_back(TensorPoly::from_dense(red, p.degree, d));
    return true;
  }

  bool contains(const TensorPoly& p) const {
    return vec_is_zero(piece[p.degree].reduce(p.dense()));
  }
};

struct QuotientBuild {
  Subspace ideal;
  std::vector<std::size_t> comp_idx;  // ambient indices of the complement basis
  std::vector<std::size_t> pos;       // ambient index -> quotient coordinate
};

inline QuotientBuild quotient_of(const Subspace& ideal, std::size_t total) {
  QuotientBuild q{ideal, {}, std::vector<std::size_t>(total, SIZE_MAX)};
  std::vector<bool> is_pivot(total, false);
  for (std::size_t p : ideal.pivot_columns()) is_pivot[p] = true;
  for (std::size_t i = 0; i < total; ++i)
    if (!is_pivot[i]) {
      q.pos[i] = q.comp_idx.size();
      q.comp_idx.push_back(i);
    }
  return q;
}

inline VecQ project_to_quotient(const QuotientBuild& q, const VecQ& ambient) {
  VecQ red = q.ideal.reduce(ambient);
  VecQ out(q.comp_idx.size());
  for (std::size_t k = 0; k < q.comp_idx.size(); ++k) out[k] = red[q.comp_idx[k]];
  return out;
}

}  // namespace detail

/// Module (⊕_{r<=N} T^r)/I for a graded two-sided ad-invariant ideal: rho is
/// the diagonal adjoint action, eta(x) is left tensor multiplication with
/// degree-N overflow mapped to zero. ker tau is always contained in the
/// quotiented ideal; when the generators alone already contain it the
/// certificate is exact, otherwise BOUNDED(N-1).
inline GradedModule ideal_module_tensor(const ContextPtr& ctx, const IdealSpec& spec, int N) {
  if (spec.flavor != IdealSpec::Flavor::Tensor)
    throw Error(errc::PRECONDITION, "tensor construction needs a tensor-flavored spec");
  const LieAlgebra& L = ctx->algebra();
  if (!is_perfect(L)) throw Error(errc::NOT_PERFECT, "tensor ideal modules need a perfect algebra");
  const int d = static_cast<int>(L.dim());
  {
    std::uint64_t total = 0, pw = 1;
    for (int r = 0; r <= N; ++r) { total += pw; pw *= d; }
    if (total > ctx->options().max_monomials)
      throw Error(errc::SIZE_LIMIT, "truncated tensor algebra exceeds cap");
  }
  detail::GradedIdeal ideal(d, N);
  std::vector<TensorPoly> work;
  for (const auto& g : spec.tensor_generators) ideal.insert_seed(g, work);
  ideal.close(L, std::move(work));

  // containment of ker tau_r in the ideal generated by the generators alone
  bool contained = true;
  long long witness_degree = 0;
  for (int r = 2; r <= N && contained; ++r)
    for (const TensorPoly& z : ctx->ker_tau_polys(r))
      if (!ideal.contains(z)) {
        contained = false;
        witness_degree = r;
        break;
      }
  if (!contained && spec.require_ker_tau_containment)
    throw Error(errc::KER_TAU_NOT_CONTAINED,
                "generated ideal does not contain ker tau", {witness_degree});
  if (!contained) {
    std::vector<TensorPoly> extra;
    for (int r = 2; r <= N; ++r)
      for (const TensorPoly& z : ctx->ker_tau_polys(r)) ideal.insert_seed(z, extra);
    ideal.close(L, std::move(extra));
  }

  // complement coordinates per degree
  std::vector<detail::QuotientBuild> quots;
  std::vector<std::size_t> offset{0};
  std::vector<int> coord_degree;
  GradedModuleReport report;
  report.per_degree.assign(N + 1, 0);
  {
    std::uint64_t pw = 1;
    for (int r = 0; r <= N; ++r) {
      quots.push_back(detail::quotient_of(ideal.piece[r].to_subspace(), pw));
      const std::size_t k = quots.back().comp_idx.size();
      report.per_degree[r] = k;
      for (std::size_t j = 0; j < k; ++j) coord_degree.push_back(r);
      offset.push_back(offset.back() + k);
      pw *= d;
    }
  }
  const std::size_t n = offset.back();
  report.total_dim = n;

  std::vector<MatrixQ> rho_mats(L.dim(), MatrixQ(n, n));
  std::vector<MatrixQ> eta(L.dim(), MatrixQ(n, n));
  for (std::size_t i = 0; i < L.dim(); ++i) {
    VecQ x(L.dim());
    x[i] = Rational(1);
    for (int r = 0; r <= N; ++r)
      for (std::size_t k = 0; k < quots[r].comp_idx.size(); ++k) {
        const std::size_t col = offset[r] + k;
        if (r >= 1) {
          TensorPoly mono(r, d);
          mono.add(quots[r].comp_idx[k], Rational(1));
          VecQ img = detail::project_to_quotient(quots[r], ad_T(L, x, mono).dense());
          for (std::size_t c = 0; c < img.size(); ++c)
            rho_mats[i].at(offset[r] + c, col) = img[c];
        }
        if (r < N) {
          // left multiplication by e_i shifts the monomial up one degree
          std::uint64_t pw = 1;
          for (int q = 0; q < r; ++q) pw *= d;
          TensorPoly lifted(r + 1, d);
          lifted.add(static_cast<std::uint64_t>(i) * pw + quots[r].comp_idx[k], Rational(1));
          VecQ img = detail::project_to_quotient(quots[r + 1], lifted.dense());
          for (std::size_t c = 0; c < img.size(); ++c)
            eta[i].at(offset[r + 1] + c, col) = img[c];
        }
      }
  }
  Certificate cert = contained ? Certificate::construction("ideal-tensor")
                               : Certificate::bounded(N - 1);
  PairModule m(ctx, Rep(ctx->algebra_ptr(), std::move(rho_mats)), std::move(eta),
               std::move(cert));
  return GradedModule{std::move(m), std::move(report), std::move(coord_degree)};
}

namespace detail {

/// Monomial bookkeeping for ⊕_{k<=N} S^k: exponent vectors in (degree, lex)
/// order with an index map.
struct SymBasis {
  int d, N;
  std::vector<std::vector<int>> monos;
  std::map<std::vector<int>, std::size_t> index;

  SymBasis(int d_, int N_) : d(d_), N(N_) {
    std::vector<int> alpha(d, 0);
    for (int k = 0; k <= N; ++k) emit(alpha, 0, k);
  }

  void emit(std::vector<int>& alpha, int pos, int remaining) {
    if (pos == d - 1) {
      alpha[pos] = remaining;
      index[alpha] = monos.size();
      monos.push_back(alpha);
      alpha[pos] = 0;
      return;
    }
    for (int take = remaining; take >= 0; --take) {
      alpha[pos] = take;
      emit(alpha, pos + 1, remaining - take);
      alpha[pos] = 0;
    }
  }

  std::size_t size() const { return monos.size(); }
  int degree(std::size_t i) const {
    int s = 0;
    for (int e : monos[i]) s += e;
    return s;
  }

  /// Adjoint derivation action of basis element i on monomial m.
  void ad_into(const LieAlgebra& L, std::size_t i, std::size_t m, VecQ& out,
               const Rational& scale) const {
    const auto& alpha = monos[m];
    for (int l = 0; l < d; ++l) {
      if (alpha[l] == 0) continue;
      for (const auto& [k, c] : L.bracket_sparse(i, l)) {
        std::vector<int> beta = alpha;
        --beta[l];
        ++beta[static_cast<int>(k)];
        out[index.at(beta)] += scale * Rational(alpha[l]) * c;
      }
    }
  }

  /// Multiplication by basis element i (drops past degree N).
  std::optional<std::size_t> mult(std::size_t i, std::size_t m) const {
    if (degree(m) >= N) return std::nullopt;
    std::vector<int> beta = monos[m];
    ++beta[static_cast<int>(i)];
    return index.at(beta);
  }
};

}  // namespace detail

/// Module S(a)/I for an invariant ideal, truncated at degree N: rho is the
/// adjoint derivation action, eta(x) is multiplication by x. The eta values
/// commute, so the certificate is EXACT_NILPOTENT(2).
inline GradedModule ideal_module_sym(const ContextPtr& ctx, const IdealSpec& spec, int N) {
  if (spec.flavor != IdealSpec::Flavor::Symmetric)
    throw Error(errc::PRECONDITION, "symmetric construction needs a symmetric-flavored spec");
  const LieAlgebra& L = ctx->algebra();
  const int d = static_cast<int>(L.dim());
  detail::SymBasis sb(d, N);
  if (sb.size() > ctx->options().max_monomials)
    throw Error(errc::SIZE_LIMIT, "symmetric algebra truncation exceeds cap");

  detail::IncrementalSpan span(sb.size());
  std::vector<VecQ> work;
  for (const auto& g : spec.sym_generators) {
    VecQ v(sb.size());
    for (const auto& [alpha, c] : g.terms) {
      auto it = sb.index.find(alpha);
      if (it == sb.index.end()) continue;  // beyond truncation
      v[it->second] += c;
    }
    if (span.insert(v)) work.push_back(std::move(v));
  }
  while (!work.empty()) {
    VecQ v = std::move(work.back());
    work.pop_back();
    for (std::size_t i = 0; i < L.dim(); ++i) {
      VecQ ad_img(sb.size());
      for (std::size_t m = 0; m < sb.size(); ++m)
        if (!v[m].is_zero()) sb.ad_into(L, i, m, ad_img, v[m]);
      VecQ mul_img(sb.size());
      for (std::size_t m = 0; m < sb.size(); ++m) {
        if (v[m].is_zero()) continue;
        if (auto t = sb.mult(i, m)) mul_img[*t] += v[m];
      }
      for (VecQ* img : {&ad_img, &mul_img}) {
        VecQ red = span.reduce(std::move(*img));
        if (!vec_is_zero(red)) {
          span.insert(red);
          work.push_back(std::move(red));
        }
      }
    }
  }

  detail::QuotientBuild q = detail::quotient_of(span.to_subspace(), sb.size());
  const std::size_t n = q.comp_idx.size();
  std::vector<MatrixQ> rho_mats(L.dim(), MatrixQ(n, n));
  std::vector<MatrixQ> eta(L.dim(), MatrixQ(n, n));
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t k = 0; k < n; ++k) {
      VecQ ad_img(sb.size());
      sb.ad_into(L, i, q.comp_idx[k], ad_img, Rational(1));
      rho_mats[i].set_col(k, detail::project_to_quotient(q, ad_img));
      VecQ mul_img(sb.size());
      if (auto t = sb.mult(i, q.comp_idx[k])) mul_img[*t] = Rational(1);
      eta[i].set_col(k, detail::project_to_quotient(q, mul_img));
    }
  GradedModuleReport report;
  report.total_dim = n;
  report.per_degree.assign(N + 1, 0);
  std::vector<int> coord_degree(n);
  for (std::size_t k = 0; k < n; ++k) {
    coord_degree[k] = sb.degree(q.comp_idx[k]);
    ++report.per_degree[coord_degree[k]];
  }
  PairModule m(ctx, Rep(ctx->algebra_ptr(), std::move(rho_mats)), std::move(eta),
               Certificate::nilpotent(2));
  return GradedModule{std::move(m), std::move(report), std::move(coord_degree)};
}

/// The degree-lowering module on ⊕_{k<=N} S^k(a):
/// eta(x)(x_1...x_k) = sum_j (x, x_j) x_1...x̂_j...x_k, with (.,.) the
/// normalized invariant form of the adjoint representation.
inline GradedModule sym_dual_module(const ContextPtr& ctx, int N) {
  const LieAlgebra& L = ctx->algebra();
  const int d = static_cast<int>(L.dim());
  MatrixQ B = invariant_symmetric_form(adjoint_rep(ctx->algebra_ptr()));
  detail::SymBasis sb(d, N);
  const std::size_t n = sb.size();
  std::vector<MatrixQ> rho_mats(L.dim(), MatrixQ(n, n));
  std::vector<MatrixQ> eta(L.dim(), MatrixQ(n, n));
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t m = 0; m < n; ++m) {
      VecQ ad_img(n);
      sb.ad_into(L, i, m, ad_img, Rational(1));
      rho_mats[i].set_col(m, ad_img);
      VecQ low(n);
      const auto& alpha = sb.monos[m];
      for (int l = 0; l < d; ++l) {
        if (alpha[l] == 0 || B.at(i, l).is_zero()) continue;
        std::vector<int> beta = alpha;
        --beta[l];
        low[sb.index.at(beta)] += Rational(alpha[l]) * B.at(i, l);
      }
      eta[i].set_col(m, low);
    }
  GradedModuleReport report;
  report.total_dim = n;
  report.per_degree.assign(N + 1, 0);
  std::vector<int> coord_degree(n);
  for (std::size_t m = 0; m < n; ++m) {
    coord_degree[m] = sb.degree(m);
    ++report.per_degree[coord_degree[m]];
  }
  PairModule mod(ctx, Rep(ctx->algebra_ptr(), std::move(rho_mats)), std::move(eta),
                 Certificate::nilpotent(2));
  return GradedModule{std::move(mod), std::move(report), std::move(coord_degree)};
}

namespace detail {

/// The diagonal adjoint action on T^s as an explicit representation.
inline Rep tensor_power_adjoint(const ContextPtr& ctx, int s, std::uint64_t cap) {
  const LieAlgebra& L = ctx->algebra();
  const int d = static_cast<int>(L.dim());
  std::uint64_t n = 1;
  for (int i = 0; i < s; ++i) {
    n *= d;
    if (n > cap) throw Error(errc::SIZE_LIMIT, "tensor power exceeds cap");
  }
  std::vector<MatrixQ> mats;
  for (std::size_t i = 0; i < L.dim(); ++i) {
    MatrixQ m(n, n);
    if (s > 0) {
      VecQ x(L.dim());
      x[i] = Rational(1);
      for (std::uint64_t c = 0; c < n; ++c) {
        TensorPoly mono(s, d);
        mono.add(c, Rational(1));
        TensorPoly img = ad_T(L, x, mono);
        for (const auto& [code, cc] : img.terms) m.at(code, c) = cc;
      }
    }
    mats.push_back(std::move(m));
  }
  return Rep(ctx->algebra_ptr(), std::move(mats), /*check=*/false);
}

/// The unique equivariant projector of T^s onto the given invariant subspace
/// (multiplicity-one situations only). Throws ORBIT_NOT_STABLE when the
/// projector does not exist or is not unique.
inline MatrixQ equivariant_projector(const Rep& rep, const Subspace& target) {
  const std::size_t n = rep.space_dim;
  Subspace homs = hom_space(rep, rep);
  const std::size_t h = homs.dim();
  std::vector<MatrixQ> phis;
  for (std::size_t k = 0; k < h; ++k)
    phis.push_back(MatrixQ::unvec(homs.basis_vector(k), n, n));
  // rows: P v_j = v_j for the target basis, then reduce(P e_w) = 0 for all w
  const std::size_t rows = target.dim() * n + n * n;
  MatrixQ sys(rows, h);
  VecQ rhs(rows);
  std::size_t row = 0;
  for (std::size_t j = 0; j < target.dim(); ++j) {
    VecQ v = target.basis_vector(j);
    for (std::size_t k = 0; k < h; ++k) {
      VecQ img = phis[k].apply(v);
      for (std::size_t c = 0; c < n; ++c) sys.at(row + c, k) = img[c];
    }
    for (std::size_t c = 0; c < n; ++c) rhs[row + c] = v[c];
    row += n;
  }
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t k = 0; k < h; ++k) {
      VecQ img = target.reduce(phis[k].col(w));
      for (std::size_t c = 0; c < n; ++c) sys.at(row + c, k) = img[c];
    }
    row += n;
  }
  auto lambda = solve(sys, rhs);
  if (!lambda)
    throw Error(errc::ORBIT_NOT_STABLE, "no equivariant projector onto the orbit span");
  if (kernel_basis(sys).dim() > 0)
    throw Error(errc::ORBIT_NOT_STABLE, "equivariant projector is not unique");
  MatrixQ p(n, n);
  for (std::size_t k = 0; k < h; ++k) p += phis[k] * (*lambda)[k];
  return p;
}

}  // namespace detail

/// Classical limit of the Kirillov-Reshetikhin family: T(g)/K_r with degree-s
/// pieces V(s theta) realized as ad-orbit closures of highest-root tensor
/// powers, and eta = left multiplication followed by the equivariant
/// projection along the invariant complement.
inline GradedModule kr_module(const ContextPtr& ctx, int r) {
  const LieAlgebra& L = ctx->algebra();
  if (!L.triangular())
    throw Error(errc::NO_TRIANGULAR_DATA, "kr_module needs a highest-root vector");
  if (r < 1) throw Error(errc::PRECONDITION, "kr_module needs r >= 1");
  const int d = static_cast<int>(L.dim());
  const VecQ& xplus = L.triangular()->x_theta_plus;

  std::vector<Rep> treps;
  std::vector<Subspace> orbits;
  std::vector<MatrixQ> projectors;
  for (int s = 0; s < r; ++s) {
    Rep trep = detail::tensor_power_adjoint(ctx, s, ctx->options().max_monomials);
    // orbit closure of x_theta^{⊗ s} under the diagonal action
    VecQ start{Rational(1)};
    for (int k = 0; k < s; ++k) {
      VecQ next(start.size() * d);
      for (std::size_t a = 0; a < start.size(); ++a)
        for (int b = 0; b < d; ++b) next[a * d + b] = start[a] * xplus[b];
      start = std::move(next);
    }
    detail::IncrementalSpan span(trep.space_dim);
    std::vector<VecQ> work;
    if (span.insert(start)) work.push_back(start);
    while (!work.empty()) {
      VecQ v = std::move(work.back());
      work.pop_back();
      for (std::size_t i = 0; i < L.dim(); ++i) {
        VecQ img = span.reduce(trep.matrices[i].apply(v));
        if (!vec_is_zero(img)) {
          span.insert(img);
          work.push_back(std::move(img));
        }
      }
    }
    Subspace orbit = span.to_subspace();
    projectors.push_back(detail::equivariant_projector(trep, orbit));
    orbits.push_back(std::move(orbit));
    treps.push_back(std::move(trep));
  }

  std::vector<std::size_t> offset{0};
  for (int s = 0; s < r; ++s) offset.push_back(offset.back() + orbits[s].dim());
  const std::size_t n = offset.back();
  std::vector<MatrixQ> rho_mats(L.dim(), MatrixQ(n, n));
  std::vector<MatrixQ> eta(L.dim(), MatrixQ(n, n));
  for (std::size_t i = 0; i < L.dim(); ++i) {
    for (int s = 0; s < r; ++s) {
      for (std::size_t j = 0; j < orbits[s].dim(); ++j) {
        VecQ u = orbits[s].basis_vector(j);
        // rho: diagonal action stays inside V(s theta)
        auto coords = orbits[s].coordinates_of(treps[s].matrices[i].apply(u));
        if (!coords) throw Error(errc::ORBIT_NOT_STABLE, "orbit is not ad-invariant");
        for (std::size_t c = 0; c < coords->size(); ++c)
          rho_mats[i].at(offset[s] + c, offset[s] + j) = (*coords)[c];
        // eta: multiply on the left and project onto V((s+1) theta)
        if (s + 1 < r) {
          VecQ lifted(u.size() * d);
          for (std::size_t b = 0; b < u.size(); ++b)
            if (!u[b].is_zero()) lifted[static_cast<std::size_t>(i) * u.size() + b] = u[b];
          VecQ proj = projectors[s + 1].apply(lifted);
          auto pc = orbits[s + 1].coordinates_of(proj);
          if (!pc) throw Error(errc::ORBIT_NOT_STABLE, "projection left the orbit span");
          for (std::size_t c = 0; c < pc->size(); ++c)
            eta[i].at(offset[s + 1] + c, offset[s] + j) = (*pc)[c];
        }
      }
    }
  }
  GradedModuleReport report;
  report.total_dim = n;
  for (int s = 0; s < r; ++s) report.per_degree.push_back(orbits[s].dim());
  std::vector<int> coord_degree(n);
  for (int s = 0; s < r; ++s)
    for (std::size_t j = 0; j < orbits[s].dim(); ++j) coord_degree[offset[s] + j] = s;
  PairModule m(ctx, Rep(ctx->algebra_ptr(), std::move(rho_mats)), std::move(eta),
               Certificate::construction("kr"));
  return GradedModule{std::move(m), std::move(report), std::move(coord_degree)};
}

namespace detail {

struct ExteriorBasis {
  int n;
  std::vector<std::uint32_t> masks;          // ranked by (popcount, value)
  std::vector<std::size_t> index_of_mask;    // 2^n entries

  ExteriorBasis(int n_, int max_degree) : n(n_) {
    index_of_mask.assign(std::size_t{1} << n, SIZE_MAX);
    for (int k = 0; k <= max_degree; ++k)
      for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (__builtin_popcount(m) == k) {
          index_of_mask[m] = masks.size();
          masks.push_back(m);
        }
  }

  std::size_t size() const { return masks.size(); }
  int degree(std::size_t i) const { return __builtin_popcount(masks[i]); }
};

inline int insertion_sign(std::uint32_t mask, int pos) {
  // parity of elements of mask below pos
  return __builtin_popcount(mask & ((1u << pos) - 1)) % 2 == 0 ? 1 : -1;
}

}  // namespace detail

struct KostantModule {
  GradedModule graded;
  MatrixQ form;                 // invariant form on V
  std::vector<VecQ> phi;        // phi(x_i) in the Lambda^2 pair basis
  std::vector<std::pair<int, int>> pair_basis;
};

namespace detail {

struct KostantCore {
  MatrixQ B;
  std::vector<std::pair<int, int>> pairs;
  std::vector<VecQ> phi;  // coefficients of phi(x_i) over pairs
};

inline KostantCore kostant_core(const Rep& rho) {
  const std::size_t n = rho.space_dim;
  MatrixQ B = invariant_symmetric_form(rho);
  for (const auto& m : rho.matrices)
    if (!(m.transpose() * B + B * m).is_zero())
      throw Error(errc::NOT_SKEW, "representation does not preserve the form");
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < static_cast<int>(n); ++a)
    for (int b = a + 1; b < static_cast<int>(n); ++b) pairs.emplace_back(a, b);
  // zeta(e_a ∧ e_b) v = (e_a, v) e_b - (e_b, v) e_a
  MatrixQ zeta(n * n, pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [a, b] = pairs[p];
    for (std::size_t j = 0; j < n; ++j) {
      zeta.at(static_cast<std::size_t>(b) * n + j, p) += B.at(a, j);
      zeta.at(static_cast<std::size_t>(a) * n + j, p) -= B.at(b, j);
    }
  }
  std::vector<VecQ> phi;
  for (const auto& m : rho.matrices) {
    auto coords = solve(zeta, m.vec());
    if (!coords)
      throw Error(errc::NOT_SKEW, "rho(x) is outside the image of zeta");
    phi.push_back(std::move(*coords));
  }
  return {std::move(B), std::move(pairs), std::move(phi)};
}

inline std::vector<MatrixQ> exterior_diagonal_action(const Rep& rho,
                                                     const ExteriorBasis& eb) {
  const int n = static_cast<int>(rho.space_dim);
  std::vector<MatrixQ> mats;
  for (const auto& rm : rho.matrices) {
    MatrixQ m(eb.size(), eb.size());
    for (std::size_t col = 0; col < eb.size(); ++col) {
      const std::uint32_t mask = eb.masks[col];
      for (int i = 0; i < n; ++i) {
        if (!(mask & (1u << i))) continue;
        for (int j = 0; j < n; ++j) {
          const Rational& c = rm.at(j, i);
          if (c.is_zero()) continue;
          if (j == i) {
            m.at(col, col) += c;
            continue;
          }
          if (mask & (1u << j)) continue;
          const std::uint32_t mask2 = (mask & ~(1u << i)) | (1u << j);
          if (eb.index_of_mask[mask2] == SIZE_MAX) continue;
          // sign of moving slot i to slot j past the letters strictly between
          const int lo = std::min(i, j), hi = std::max(i, j);
          const std::uint32_t strictly_between =
              mask & ~(1u << i) & (((1u << hi) - 1) ^ ((1u << (lo + 1)) - 1));
          const int sign = (__builtin_popcount(strictly_between) % 2 == 0) ? 1 : -1;
          m.at(eb.index_of_mask[mask2], col) += c * Rational(sign);
        }
      }
    }
    mats.push_back(std::move(m));
  }
  return mats;
}

}  // namespace detail

/// Kostant's construction: the module on ΛV with the diagonal action and
/// eta(x) = wedge by phi(x), phi = zeta^{-1} ∘ rho. The eta values commute
/// exactly (checked), giving an EXACT_NILPOTENT(2) certificate.
inline KostantModule kostant_module(const ContextPtr& ctx, const Rep& rho,
                                    std::optional<int> truncate = std::nullopt) {
  const int n = static_cast<int>(rho.space_dim);
  const int N = truncate.value_or(n);
  detail::KostantCore core = detail::kostant_core(rho);
  detail::ExteriorBasis eb(n, N);
  std::vector<MatrixQ> rho_mats = detail::exterior_diagonal_action(rho, eb);
  std::vector<MatrixQ> eta;
  for (std::size_t x = 0; x < rho.matrices.size(); ++x) {
    MatrixQ m(eb.size(), eb.size());
    for (std::size_t p = 0; p < core.pairs.size(); ++p) {
      const Rational& c = core.phi[x][p];
      if (c.is_zero()) continue;
      auto [a, b] = core.pairs[p];
      for (std::size_t col = 0; col < eb.size(); ++col) {
        const std::uint32_t mask = eb.masks[col];
        if (mask & (1u << a) || mask & (1u << b)) continue;
        const std::uint32_t mask2 = mask | (1u << a) | (1u << b);
        if (eb.index_of_mask[mask2] == SIZE_MAX) continue;
        const int sign = detail::insertion_sign(mask, a) * detail::insertion_sign(mask, b);
        m.at(eb.index_of_mask[mask2], col) += c * Rational(sign);
      }
    }
    eta.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < eta.size(); ++i)
    for (std::size_t j = i + 1; j < eta.size(); ++j)
      if (!MatrixQ::commutator(eta[i], eta[j]).is_zero())
        throw Error(errc::PRECONDITION, "kostant eta values do not commute");
  GradedModuleReport report;
  report.total_dim = eb.size();
  report.per_degree.assign(N + 1, 0);
  std::vector<int> coord_degree(eb.size());
  for (std::size_t i = 0; i < eb.size(); ++i) {
    coord_degree[i] = eb.degree(i);
    ++report.per_degree[coord_degree[i]];
  }
  PairModule m(ctx, Rep(ctx->algebra_ptr(), std::move(rho_mats)), std::move(eta),
               Certificate::nilpotent(2));
  return KostantModule{GradedModule{std::move(m), std::move(report), std::move(coord_degree)},
                       std::move(core.B), std::move(core.phi), std::move(core.pairs)};
}

/// The dual Kostant module realized on ΛV through the Gram pairing:
/// eta*(x)(v_1∧...∧v_k) = -sum_{r<s} (-1)^{r+s} (phi(x), v_r ∧ v_s) v_1∧...
/// with the Gram determinant extension of the form.
inline KostantModule kostant_dual_module(const ContextPtr& ctx, const Rep& rho,
                                         std::optional<int> truncate = std::nullopt) {
  const int n = static_cast<int>(rho.space_dim);
  const int N = truncate.value_or(n);
  detail::KostantCore core = detail::kostant_core(rho);
  detail::ExteriorBasis eb(n, N);
  std::vector<MatrixQ> rho_mats = detail::exterior_diagonal_action(rho, eb);
  // (e_c ∧ e_d, e_a ∧ e_b) for the Gram form on Lambda^2
  auto gram2 = [&](int c, int d, int a, int b) {
    return core.B.at(c, a) * core.B.at(d, b) - core.B.at(c, b) * core.B.at(d, a);
  };
  std::vector<MatrixQ> eta;
  for (std::size_t x = 0; x < rho.matrices.size(); ++x) {
    MatrixQ m(eb.size(), eb.size());
    for (std::size_t col = 0; col < eb.size(); ++col) {
      const std::uint32_t mask = eb.masks[col];
      std::vector<int> elems;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) elems.push_back(i);
      const int k = static_cast<int>(elems.size());
      for (int r = 0; r < k; ++r)
        for (int s = r + 1; s < k; ++s) {
          // (phi(x), e_{i_r} ∧ e_{i_s}) under the Gram pairing
          Rational pair_value;
          for (std::size_t p = 0; p < core.pairs.size(); ++p) {
            const Rational& c = core.phi[x][p];
            if (c.is_zero()) continue;
            auto [pa, pb] = core.pairs[p];
            pair_value += c * gram2(pa, pb, elems[r], elems[s]);
          }
          if (pair_value.is_zero()) continue;
          const std::uint32_t mask2 = mask & ~(1u << elems[r]) & ~(1u << elems[s]);
          // positions r, s are 1-based in the displayed formula
          const int sign = (((r + 1) + (s + 1)) % 2 == 0) ? 1 : -1;
          m.at(eb.index_of_mask[mask2], col) += pair_value * Rational(-sign);
        }
    }
    eta.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < eta.size(); ++i)
    for (std::size_t j = i + 1; j < eta.size(); ++j)
      if (!MatrixQ::commutator(eta[i], eta[j]).is_zero())
        throw Error(errc::PRECONDITION, "kostant dual eta values do not commute");
  GradedModuleReport report;
  report.total_dim = eb.size();
  report.per_degree.assign(N + 1, 0);
  std::vector<int> coord_degree(eb.size());
  for (std::size_t i = 0; i < eb.size(); ++i) {
    coord_degree[i] = eb.degree(i);
    ++report.per_degree[coord_degree[i]];
  }
  PairModule m(ctx, Rep(ctx->algebra_ptr(), std::move(rho_mats)), std::move(eta),
               Certificate::nilpotent(2));
  return KostantModule{GradedModule{std::move(m), std::move(report), std::move(coord_degree)},
                       std::move(core.B), std::move(core.phi), std::move(core.pairs)};
}

/// Restriction of a graded module to the coordinates of one parity with
/// exterior level k >= k_min (ascending families) or k <= k_max (descending).
/// Verifies closure under rho and eta first; NOT_CLOSED carries the witness
/// (generator kind 0=rho/1=eta, generator index, coordinate).
inline GradedModule even_odd_submodule(const GradedModule& gm, int parity, int k_bound,
                                       bool ascending) {
  const PairModule& m = gm.module;
  std::vector<std::size_t> sel;
  for (std::size_t i = 0; i < gm.coord_degree.size(); ++i) {
    const int deg = gm.coord_degree[i];
    if (deg % 2 != parity) continue;
    const int k = deg / 2;
    if (ascending ? k >= k_bound : k <= k_bound) sel.push_back(i);
  }
  std::vector<bool> in_sel(gm.coord_degree.size(), false);
  for (std::size_t i : sel) in_sel[i] = true;
  auto check_closed = [&](const MatrixQ& mat, int kind, std::size_t gen) {
    for (std::size_t j : sel)
      for (std::size_t r = 0; r < gm.coord_degree.size(); ++r)
        if (!in_sel[r] && !mat.at(r, j).is_zero())
          throw Error(errc::NOT_CLOSED, "selected coordinates are not invariant",
                      {kind, static_cast<long long>(gen), static_cast<long long>(r)});
  };
  for (std::size_t i = 0; i < m.rho().matrices.size(); ++i)
    check_closed(m.rho().matrices[i], 0, i);
  for (std::size_t i = 0; i < m.eta().size(); ++i) check_closed(m.eta()[i], 1, i);
  const std::size_t n = sel.size();
  std::vector<MatrixQ> rho_mats, eta;
  for (std::size_t i = 0; i < m.rho().matrices.size(); ++i) {
    MatrixQ r(n, n), e(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        r.at(a, b) = m.rho().matrices[i].at(sel[a], sel[b]);
        e.at(a, b) = m.eta()[i].at(sel[a], sel[b]);
      }
    rho_mats.push_back(std::move(r));
    eta.push_back(std::move(e));
  }
  GradedModuleReport report;
  report.total_dim = n;
  std::vector<int> coord_degree;
  for (std::size_t i : sel) coord_degree.push_back(gm.coord_degree[i]);
  const int maxdeg = coord_degree.empty()
                         ? 0
                         : *std::max_element(coord_degree.begin(), coord_degree.end());
  report.per_degree.assign(maxdeg + 1, 0);
  for (int d : coord_degree) ++report.per_degree[d];
  PairModule sub(m.context(), Rep(m.rho().algebra, std::move(rho_mats)), std::move(eta),
                 m.certificate());
  return GradedModule{std::move(sub), std::move(report), std::move(coord_degree)};
}

}  // namespace curalg
