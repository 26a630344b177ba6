#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "curalg/error.hpp"
#include "curalg/liealg.hpp"
#include "curalg/matrix.hpp"
#include "curalg/subspace.hpp"

namespace curalg {

struct FreeLieOptions {
  std::uint64_t max_monomials = 1'000'000;  // cap on d^r
  int max_degree = 6;
  bool act_crosscheck = false;  // re-derive acts from a second tau preimage
};

/// Homogeneous element of T^r over a d-letter alphabet, keyed by the
/// big-endian base-d code of each monomial word. Codes order like words, so
/// terms.begin() is the lex-least monomial.
struct TensorPoly {
  int degree = 0;
  int alphabet = 0;
  std::map<std::uint64_t, Rational> terms;

  TensorPoly() = default;
  TensorPoly(int deg, int d) : degree(deg), alphabet(d) {}

  static std::uint64_t encode(const std::vector<int>& letters, int d) {
    std::uint64_t code = 0;
    for (int x : letters) code = code * static_cast<std::uint64_t>(d) + x;
    return code;
  }

  static std::vector<int> decode(std::uint64_t code, int d, int degree) {
    std::vector<int> letters(degree);
    for (int i = degree - 1; i >= 0; --i) {
      letters[i] = static_cast<int>(code % d);
      code /= d;
    }
    return letters;
  }

  static TensorPoly monomial(const std::vector<int>& letters, int d,
                             Rational coeff = Rational(1)) {
    TensorPoly p(static_cast<int>(letters.size()), d);
    p.add(encode(letters, d), coeff);
    return p;
  }

  bool is_zero() const { return terms.empty(); }

  void add(std::uint64_t code, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms.emplace(code, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  TensorPoly& operator+=(const TensorPoly& o) {
    for (const auto& [code, c] : o.terms) add(code, c);
    return *this;
  }

  TensorPoly& axpy(const Rational& a, const TensorPoly& o) {
    if (a.is_zero()) return *this;
    for (const auto& [code, c] : o.terms) add(code, a * c);
    return *this;
  }

  TensorPoly& operator*=(const Rational& a) {
    if (a.is_zero()) { terms.clear(); return *this; }
    for (auto& [code, c] : terms) c *= a;
    return *this;
  }

  friend TensorPoly concat(const TensorPoly& a, const TensorPoly& b) {
    TensorPoly p(a.degree + b.degree, a.alphabet);
    std::uint64_t shift = 1;
    for (int i = 0; i < b.degree; ++i) shift *= b.alphabet;
    for (const auto& [ca, xa] : a.terms)
      for (const auto& [cb, xb] : b.terms) p.add(ca * shift + cb, xa * xb);
    return p;
  }

  /// a ⊗ b - b ⊗ a.
  friend TensorPoly tensor_bracket(const TensorPoly& a, const TensorPoly& b) {
    TensorPoly p = concat(a, b);
    TensorPoly q = concat(b, a);
    q *= Rational(-1);
    p += q;
    return p;
  }

  /// Dense coordinates in T^r (length d^degree).
  VecQ dense() const {
    std::uint64_t n = 1;
    for (int i = 0; i < degree; ++i) n *= alphabet;
    VecQ v(n);
    for (const auto& [code, c] : terms) v[code] = c;
    return v;
  }

  static TensorPoly from_dense(const VecQ& v, int degree, int d) {
    TensorPoly p(degree, d);
    for (std::uint64_t code = 0; code < v.size(); ++code) p.add(code, v[code]);
    return p;
  }

  bool operator==(const TensorPoly& o) const {
    return degree == o.degree && terms == o.terms;
  }
};

struct LyndonWord {
  std::vector<int> letters;
  std::size_t split = 0;  // standard factorization (letters[0..split), letters[split..))
};

/// The Lyndon-word basis of F^r over a d-dimensional space, together with the
/// expansion of each standard bracketing inside T^r. Expansions are triangular:
/// the bracketing of w reads w + (lex-greater words), which tensor_to_lyndon
/// exploits for membership testing.
class FreeDegree {
 public:
  FreeDegree(int d, int r, const FreeLieOptions& opts = {}) : d_(d), r_(r) {
    if (d < 1 || r < 1) throw Error(errc::PRECONDITION, "lyndon_degree needs d, r >= 1");
    std::uint64_t monomials = 1;
    for (int i = 0; i < r; ++i) {
      monomials *= static_cast<std::uint64_t>(d);
      if (monomials > opts.max_monomials)
        throw Error(errc::SIZE_LIMIT, "d^r exceeds the monomial cap",
                    {static_cast<long long>(d), static_cast<long long>(r)});
    }
    enumerate_words();
    std::map<std::pair<int, std::uint64_t>, TensorPoly> memo;
    expansion_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      expansion_.push_back(expand(words_[i].letters, memo));
      const auto lead = expansion_.back().terms.begin();
      if (lead->first != TensorPoly::encode(words_[i].letters, d_) || !lead->second.is_one())
        throw Error(errc::PRECONDITION, "lyndon expansion lost triangularity");
      word_index_[lead->first] = i;
    }
  }

  int alphabet_dim() const { return d_; }
  int degree() const { return r_; }
  std::size_t dim() const { return words_.size(); }
  const std::vector<LyndonWord>& lyndon_basis() const { return words_; }
  const std::vector<TensorPoly>& expansion() const { return expansion_; }

  std::optional<std::size_t> index_of(std::uint64_t code) const {
    auto it = word_index_.find(code);
    if (it == word_index_.end()) return std::nullopt;
    return it->second;
  }

  /// The expansion matrix (dim F^r) x d^r, materialized densely.
  MatrixQ expansion_matrix() const {
    std::uint64_t n = 1;
    for (int i = 0; i < r_; ++i) n *= d_;
    MatrixQ m(words_.size(), n);
    for (std::size_t i = 0; i < words_.size(); ++i)
      for (const auto& [code, c] : expansion_[i].terms) m.at(i, code) = c;
    return m;
  }

 private:
  void enumerate_words() {
    // Duval: all Lyndon words of length <= r_ in lex order; keep length r_.
    std::vector<int> w{0};
    while (true) {
      if (static_cast<int>(w.size()) == r_) words_.push_back(factorize(w));
      std::vector<int> t;
      t.reserve(r_);
      for (int i = 0; i < r_; ++i) t.push_back(w[i % w.size()]);
      while (!t.empty() && t.back() == d_ - 1) t.pop_back();
      if (t.empty()) break;
      ++t.back();
      w = std::move(t);
    }
  }

  LyndonWord factorize(const std::vector<int>& w) const {
    LyndonWord lw;
    lw.letters = w;
    if (w.size() < 2) return lw;
    // standard factorization: v is the lex-least proper suffix
    std::size_t best = 1;
    for (std::size_t s = 2; s < w.size(); ++s) {
      if (std::lexicographical_compare(w.begin() + s, w.end(), w.begin() + best, w.end()))
        best = s;
    }
    lw.split = best;
    return lw;
  }

  TensorPoly expand(const std::vector<int>& w,
                    std::map<std::pair<int, std::uint64_t>, TensorPoly>& memo) const {
    if (w.size() == 1) return TensorPoly::monomial(w, d_);
    const auto key = std::make_pair(static_cast<int>(w.size()), TensorPoly::encode(w, d_));
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const LyndonWord lw = factorize(w);
    std::vector<int> u(w.begin(), w.begin() + lw.split);
    std::vector<int> v(w.begin() + lw.split, w.end());
    TensorPoly p = tensor_bracket(expand(u, memo), expand(v, memo));
    memo.emplace(key, p);
    return p;
  }

  int d_, r_;
  std::vector<LyndonWord> words_;
  std::vector<TensorPoly> expansion_;
  std::map<std::uint64_t, std::size_t> word_index_;
};

inline FreeDegree lyndon_degree(int d, int r, const FreeLieOptions& opts = {}) {
  return FreeDegree(d, r, opts);
}

/// Diagonal derivation action of x on T^r:
/// ad_T(x)(y_1 ⊗ ... ⊗ y_r) = sum_i y_1 ⊗ ... ⊗ [x, y_i] ⊗ ... ⊗ y_r.
inline TensorPoly ad_T(const LieAlgebra& L, const VecQ& x, const TensorPoly& p) {
  const int d = static_cast<int>(L.dim());
  if (p.alphabet != d) throw Error(errc::PRECONDITION, "ad_T alphabet mismatch");
  std::vector<VecQ> bx(d);
  for (int l = 0; l < d; ++l) {
    VecQ e(d);
    e[l] = Rational(1);
    bx[l] = L.bracket(x, e);
  }
  std::vector<std::uint64_t> place(p.degree);
  if (p.degree > 0) {
    place[p.degree - 1] = 1;
    for (int i = p.degree - 2; i >= 0; --i) place[i] = place[i + 1] * d;
  }
  TensorPoly out(p.degree, d);
  for (const auto& [code, c] : p.terms) {
    std::vector<int> letters = TensorPoly::decode(code, d, p.degree);
    for (int pos = 0; pos < p.degree; ++pos) {
      const VecQ& repl = bx[letters[pos]];
      const std::uint64_t base = code - static_cast<std::uint64_t>(letters[pos]) * place[pos];
      for (int k = 0; k < d; ++k) {
        if (repl[k].is_zero()) continue;
        out.add(base + static_cast<std::uint64_t>(k) * place[pos], c * repl[k]);
      }
    }
  }
  return out;
}

/// The matrix of tau_r : F^r -> L in the Lyndon basis (columns are bracket
/// evaluations inside L; tau_1 is the identity).
inline MatrixQ tau_r(const LieAlgebra& L, const FreeDegree& fd) {
  if (fd.alphabet_dim() != static_cast<int>(L.dim()))
    throw Error(errc::PRECONDITION, "tau_r alphabet must match dim L");
  std::map<std::pair<int, std::uint64_t>, VecQ> memo;
  auto eval = [&](auto&& self, const std::vector<int>& w) -> VecQ {
    if (w.size() == 1) {
      VecQ e(L.dim());
      e[w[0]] = Rational(1);
      return e;
    }
    const auto key =
        std::make_pair(static_cast<int>(w.size()), TensorPoly::encode(w, fd.alphabet_dim()));
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    // reuse the lex-least-suffix split
    std::size_t best = 1;
    for (std::size_t s = 2; s < w.size(); ++s)
      if (std::lexicographical_compare(w.begin() + s, w.end(), w.begin() + best, w.end()))
        best = s;
    VecQ res = L.bracket(self(self, {w.begin(), w.begin() + best}),
                         self(self, {w.begin() + best, w.end()}));
    memo.emplace(key, res);
    return res;
  };
  MatrixQ m(L.dim(), fd.dim());
  for (std::size_t j = 0; j < fd.dim(); ++j) m.set_col(j, eval(eval, fd.lyndon_basis()[j].letters));
  return m;
}

/// Lyndon coordinates of p in F^r, or nullopt when p is outside F^r.
/// Greedy triangular reduction against the leading monomials.
inline std::optional<VecQ> tensor_to_lyndon(const FreeDegree& fd, const TensorPoly& p) {
  if (p.degree != fd.degree()) throw Error(errc::PRECONDITION, "degree mismatch");
  VecQ coords(fd.dim());
  TensorPoly rem = p;
  while (!rem.terms.empty()) {
    const auto [code, c] = *rem.terms.begin();
    auto idx = fd.index_of(code);
    if (!idx) return std::nullopt;
    coords[*idx] = c;
    rem.axpy(-c, fd.expansion()[*idx]);
  }
  return coords;
}

/// Per-algebra cache of free-Lie data: Lyndon bases, tau matrices and kernel
/// descriptions per degree. All public accessors are lazy and thread-safe;
/// returned references stay valid for the context's lifetime.
class CurrentContext {
 public:
  explicit CurrentContext(AlgebraPtr L, FreeLieOptions opts = {})
      : L_(std::move(L)), opts_(opts) {}

  const LieAlgebra& algebra() const { return *L_; }
  const AlgebraPtr& algebra_ptr() const { return L_; }
  const FreeLieOptions& options() const { return opts_; }

  const FreeDegree& free_degree(int r) const { return data(r).fd; }
  const MatrixQ& tau_matrix(int r) const { return data(r).tau; }
  std::size_t tau_rank(int r) const { return data(r).tau_rank; }
  /// Kernel of tau_r as sparse tensor polynomials (free-variable-zero basis).
  const std::vector<TensorPoly>& ker_tau_polys(int r) const { return data(r, true).ker_polys; }
  /// Kernel of tau_r pushed into T^r coordinates, canonical.
  const Subspace& ker_tau_tensor(int r) const { return *data(r, true).ker_tensor; }

 private:
  struct DegreeData {
    FreeDegree fd;
    MatrixQ tau;
    std::size_t tau_rank = 0;
    std::vector<TensorPoly> ker_polys;
    std::optional<Subspace> ker_tensor;
    bool kernel_built = false;
  };

  DegreeData& data(int r, bool with_kernel = false) const {
    if (r < 1 || r > opts_.max_degree)
      throw Error(errc::SIZE_LIMIT, "degree outside the configured cap",
                  {static_cast<long long>(r)});
    std::scoped_lock lk(mu_);
    auto it = cache_.find(r);
    if (it == cache_.end()) {
      FreeDegree fd(static_cast<int>(L_->dim()), r, opts_);
      MatrixQ tau = tau_r(*L_, fd);
      const std::size_t rk = rank(tau);
      it = cache_
               .emplace(r, DegreeData{std::move(fd), std::move(tau), rk, {}, std::nullopt,
                                      false})
               .first;
    }
    DegreeData& dd = it->second;
    if (with_kernel && !dd.kernel_built) {
      Subspace ker = kernel_basis(dd.tau);
      std::vector<VecQ> dense_rows;
      for (std::size_t k = 0; k < ker.dim(); ++k) {
        VecQ lyn = ker.basis_vector(k);
        TensorPoly p(r, static_cast<int>(L_->dim()));
        for (std::size_t j = 0; j < lyn.size(); ++j)
          if (!lyn[j].is_zero()) p.axpy(lyn[j], dd.fd.expansion()[j]);
        dense_rows.push_back(p.dense());
        dd.ker_polys.push_back(std::move(p));
      }
      std::uint64_t n = 1;
      for (int i = 0; i < r; ++i) n *= L_->dim();
      dd.ker_tensor = Subspace::from_vectors(dense_rows, n);
      dd.kernel_built = true;
    }
    return dd;
  }

  AlgebraPtr L_;
  FreeLieOptions opts_;
  mutable std::map<int, DegreeData> cache_;
  mutable std::mutex mu_;
};

using ContextPtr = std::shared_ptr<CurrentContext>;

inline ContextPtr make_context(AlgebraPtr L, FreeLieOptions opts = {}) {
  return std::make_shared<CurrentContext>(std::move(L), opts);
}

/// Kernel of tau_r in tensor coordinates (canonical subspace of T^r).
inline Subspace ker_tau(const CurrentContext& ctx, int r) { return ctx.ker_tau_tensor(r); }

/// Dimension of F(a)/(ker tau[t] + sum_{r>k} F^r), i.e. sum of rank tau_r for
/// r <= k. Equals k * dim(a) whenever a is perfect.
inline std::size_t truncated_current_dim(const CurrentContext& ctx, int k) {
  if (!is_perfect(ctx.algebra()))
    throw Error(errc::NOT_PERFECT, "truncated_current_dim needs a perfect algebra");
  std::size_t total = 0;
  for (int r = 1; r <= k; ++r) total += ctx.tau_rank(r);
  return total;
}

}  // namespace curalg
