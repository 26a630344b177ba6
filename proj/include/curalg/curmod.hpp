#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "curalg/error.hpp"
#include "curalg/freelie.hpp"
#include "curalg/liealg.hpp"
#include "curalg/matrix.hpp"
#include "curalg/subspace.hpp"

namespace curalg {

/// How a (rho, eta) pair is known to satisfy condition (C3). The condition
/// quantifies over all degrees, so the certificate records the strength of
/// what was actually established:
///   ExactNilpotent(N)      — the iterated commutators of the eta values die
///                            at depth N, closing every degree >= N;
///   ExactByConstruction    — validity is a theorem about the constructor
///                            (evaluation, ideal quotient, ...);
///   Bounded(R)             — checked degree by degree for 2 <= r <= R only.
struct Certificate {
  enum class Kind { ExactNilpotent, ExactByConstruction, Bounded };

  Kind kind = Kind::Bounded;
  int bound = 0;  // N for ExactNilpotent, R for Bounded
  std::string tag;
  std::optional<Rational> eval_point;

  static Certificate nilpotent(int n) { return {Kind::ExactNilpotent, n, "", {}}; }
  static Certificate bounded(int r) { return {Kind::Bounded, r, "", {}}; }
  static Certificate construction(std::string t, std::optional<Rational> pt = {}) {
    return {Kind::ExactByConstruction, 0, std::move(t), std::move(pt)};
  }

  bool exact() const { return kind != Kind::Bounded; }
  bool covers(int r) const { return exact() || r <= bound; }
  bool is_evaluation() const {
    return kind == Kind::ExactByConstruction && tag == "evaluation";
  }

  std::string str() const {
    switch (kind) {
      case Kind::ExactNilpotent: return "EXACT_NILPOTENT(" + std::to_string(bound) + ")";
      case Kind::ExactByConstruction:
        return "EXACT_BY_CONSTRUCTION(" + tag +
               (eval_point ? "@" + eval_point->str() : "") + ")";
      default: return "BOUNDED(" + std::to_string(bound) + ")";
    }
  }
};

/// A candidate a[t]-module: degree-0 action rho, degree-1 action eta, and the
/// certificate under which (C1)-(C3) hold. Immutable after construction.
class PairModule {
 public:
  PairModule(ContextPtr ctx, Rep rho, std::vector<MatrixQ> eta, Certificate cert)
      : ctx_(std::move(ctx)), rho_(std::move(rho)), eta_(std::move(eta)), cert_(std::move(cert)) {
    if (eta_.size() != ctx_->algebra().dim())
      throw Error(errc::PRECONDITION, "eta needs one matrix per basis element");
    for (const auto& e : eta_)
      if (e.rows() != rho_.space_dim || e.cols() != rho_.space_dim)
        throw Error(errc::PRECONDITION, "eta matrices must match the space dimension");
  }

  const ContextPtr& context() const { return ctx_; }
  const LieAlgebra& algebra() const { return ctx_->algebra(); }
  std::size_t dim() const { return rho_.space_dim; }
  const Rep& rho() const { return rho_; }
  const std::vector<MatrixQ>& eta() const { return eta_; }
  const Certificate& certificate() const { return cert_; }

  MatrixQ eta_of(const VecQ& x) const {
    MatrixQ m(dim(), dim());
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!x[i].is_zero()) m += eta_[i] * x[i];
    return m;
  }

 private:
  ContextPtr ctx_;
  Rep rho_;
  std::vector<MatrixQ> eta_;
  Certificate cert_;
};

namespace detail {

inline void require_compatible(const PairModule& a, const PairModule& b) {
  if (a.context() == b.context()) return;
  if (!(a.algebra() == b.algebra()))
    throw Error(errc::PRECONDITION, "modules live over different algebras");
}

/// Evaluates xi^{⊙r} on a sparse tensor element: each monomial y_1 ⊗ ... ⊗ y_r
/// contributes xi(y_1) ∘ ... ∘ xi(y_r). Shares matrix products across the
/// lex-ordered monomials through their common prefixes.
inline MatrixQ odot_eval(const std::vector<MatrixQ>& xi, const TensorPoly& p,
                         std::size_t n) {
  MatrixQ acc(n, n);
  std::vector<int> prev;
  std::vector<MatrixQ> prefix;  // prefix[i] = product of the first i+1 letters
  for (const auto& [code, c] : p.terms) {
    std::vector<int> letters = TensorPoly::decode(code, p.alphabet, p.degree);
    std::size_t keep = 0;
    while (keep < prev.size() && keep < letters.size() && prev[keep] == letters[keep]) ++keep;
    prefix.resize(keep);
    for (std::size_t i = keep; i < letters.size(); ++i)
      prefix.push_back(i == 0 ? xi[letters[0]] : prefix[i - 1] * xi[letters[i]]);
    prev = std::move(letters);
    acc += prefix.back() * c;
  }
  return acc;
}

}  // namespace detail

struct VerifyFailure {
  std::string code;
  std::vector<long long> witness;
  std::string detail;
};

struct VerifyOutcome {
  std::optional<PairModule> module;
  std::optional<VerifyFailure> failure;
  bool ok() const { return module.has_value(); }
};

/// Checks (C1) and (C2) exactly, then certifies (C3): if the span of iterated
/// commutators of the eta values vanishes at some depth N <= R, degrees >= N
/// are closed for free and only 2 <= r < N need kernel checks
/// (EXACT_NILPOTENT); otherwise every degree 2 <= r <= R is checked (BOUNDED).
inline VerifyOutcome verify_pair(const ContextPtr& ctx, const Rep& rho,
                                 const std::vector<MatrixQ>& eta, int R) {
  const LieAlgebra& L = ctx->algebra();
  const std::size_t d = L.dim(), n = rho.space_dim;
  auto fail = [](std::string code, std::vector<long long> witness, std::string detail = "") {
    return VerifyOutcome{std::nullopt, VerifyFailure{std::move(code), std::move(witness),
                                                     std::move(detail)}};
  };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      MatrixQ want(n, n);
      for (const auto& [k, c] : L.bracket_sparse(i, j)) want += rho.matrices[k] * c;
      if (want != MatrixQ::commutator(rho.matrices[i], rho.matrices[j]))
        return fail(errc::C1_FAILS,
                    {static_cast<long long>(i), static_cast<long long>(j)});
    }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      MatrixQ want(n, n);
      for (const auto& [k, c] : L.bracket_sparse(i, j)) want += eta[k] * c;
      if (want != MatrixQ::commutator(rho.matrices[i], eta[j]))
        return fail(errc::C2_FAILS,
                    {static_cast<long long>(i), static_cast<long long>(j)});
    }

  // depth scan of eta_F: S_1 = span eta(x_i), S_{k+1} = span [eta(x_i), S_k]
  std::optional<int> nilpotent_at;
  {
    std::vector<VecQ> cur;
    for (const auto& e : eta) cur.push_back(e.vec());
    Subspace span = Subspace::from_vectors(cur, n * n);
    for (int depth = 1; depth <= R; ++depth) {
      if (span.dim() == 0) {
        nilpotent_at = depth;
        break;
      }
      std::vector<VecQ> next;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t b = 0; b < span.dim(); ++b)
          next.push_back(
              MatrixQ::commutator(eta[i], MatrixQ::unvec(span.basis_vector(b), n, n)).vec());
      span = Subspace::from_vectors(next, n * n);
    }
  }

  const int check_to = nilpotent_at ? *nilpotent_at - 1 : R;
  for (int r = 2; r <= check_to; ++r) {
    const auto& kers = ctx->ker_tau_polys(r);
    for (std::size_t k = 0; k < kers.size(); ++k)
      if (!detail::odot_eval(eta, kers[k], n).is_zero())
        return fail(errc::C3_FAILS, {r, static_cast<long long>(k)},
                    "eta^{odot r} does not kill ker tau_r");
  }
  Certificate cert =
      nilpotent_at ? Certificate::nilpotent(*nilpotent_at) : Certificate::bounded(R);
  return VerifyOutcome{PairModule(ctx, rho, eta, std::move(cert)), std::nullopt};
}

/// The matrix of x t^r on a module: rho(x) at r = 0, eta(x) at r = 1, and the
/// eta-power evaluation of any tau_r-preimage of x beyond that. With the
/// act_crosscheck option a second preimage is evaluated and compared.
inline MatrixQ act_matrix(const PairModule& m, const VecQ& x, int r) {
  if (r < 0) throw Error(errc::PRECONDITION, "negative degree");
  if (r == 0) return m.rho().of(x);
  if (r == 1) return m.eta_of(x);
  if (!m.certificate().covers(r))
    throw Error(errc::UNCOVERED_DEGREE, "certificate does not cover degree " + std::to_string(r),
                {r});
  const CurrentContext& ctx = *m.context();
  const MatrixQ& tau = ctx.tau_matrix(r);
  auto z = solve(tau, x);
  if (!z)
    throw Error(errc::NO_PREIMAGE, "x is outside the image of tau_r", {r});
  const FreeDegree& fd = ctx.free_degree(r);
  TensorPoly p(r, fd.alphabet_dim());
  for (std::size_t w = 0; w < z->size(); ++w)
    if (!(*z)[w].is_zero()) p.axpy((*z)[w], fd.expansion()[w]);
  MatrixQ result = detail::odot_eval(m.eta(), p, m.dim());
  if (ctx.options().act_crosscheck) {
    Subspace ker = kernel_basis(tau);
    if (ker.dim() > 0) {
      TensorPoly p2 = p;
      VecQ kv = ker.basis_vector(0);
      for (std::size_t w = 0; w < kv.size(); ++w)
        if (!kv[w].is_zero()) p2.axpy(kv[w], fd.expansion()[w]);
      if (detail::odot_eval(m.eta(), p2, m.dim()) != result)
        throw Error(errc::PRECONDITION, "act depends on the tau preimage: (C3) is violated");
    }
  }
  return result;
}

inline VecQ act(const PairModule& m, const VecQ& x, int r, const VecQ& v) {
  return act_matrix(m, x, r).apply(v);
}

/// Pullback of rho through ev_a: eta = a rho.
inline PairModule evaluation_module(const ContextPtr& ctx, const Rep& rho,
                                    const Rational& a) {
  std::vector<MatrixQ> eta;
  eta.reserve(rho.matrices.size());
  for (const auto& mt : rho.matrices) eta.push_back(mt * a);
  return PairModule(ctx, rho, std::move(eta), Certificate::construction("evaluation", a));
}

/// Pullback through eps_a (x t^r -> a^r x t^r): eta -> a eta.
inline PairModule twist_eps(const PairModule& m, const Rational& a) {
  std::vector<MatrixQ> eta;
  for (const auto& e : m.eta()) eta.push_back(e * a);
  Certificate cert = m.certificate();
  if (cert.is_evaluation())
    cert.eval_point = *cert.eval_point * a;
  else if (cert.kind == Certificate::Kind::ExactByConstruction)
    cert = Certificate::construction("eps-twist:" + cert.tag);
  return PairModule(m.context(), m.rho(), std::move(eta), std::move(cert));
}

/// Pullback through gamma_a (x t^r -> x (t-a)^r): eta -> eta - a rho. Always
/// exact when the input is exact (twisting by an automorphism), but nilpotency is
/// not preserved, so exact inputs come out EXACT_BY_CONSTRUCTION.
inline PairModule twist_gamma(const PairModule& m, const Rational& a) {
  std::vector<MatrixQ> eta;
  for (std::size_t i = 0; i < m.eta().size(); ++i)
    eta.push_back(m.eta()[i] - m.rho().matrices[i] * a);
  Certificate cert = m.certificate();
  if (cert.is_evaluation())
    cert.eval_point = *cert.eval_point - a;
  else if (cert.exact())
    cert = Certificate::construction("gamma-twist");
  return PairModule(m.context(), m.rho(), std::move(eta), std::move(cert));
}

/// rho*(x) = -rho(x)^T, eta*(x) = -eta(x)^T.
inline PairModule dual_module(const PairModule& m) {
  std::vector<MatrixQ> rho_mats, eta;
  for (const auto& mt : m.rho().matrices) rho_mats.push_back(-mt.transpose());
  for (const auto& e : m.eta()) eta.push_back(-e.transpose());
  Certificate cert = m.certificate();
  if (cert.kind == Certificate::Kind::ExactByConstruction && !cert.is_evaluation())
    cert = Certificate::construction("dual:" + cert.tag);
  return PairModule(m.context(), Rep(m.rho().algebra, std::move(rho_mats)), std::move(eta),
                    std::move(cert));
}

inline PairModule direct_sum_module(const PairModule& a, const PairModule& b) {
  detail::require_compatible(a, b);
  const std::size_t d = a.algebra().dim();
  std::vector<MatrixQ> rho_mats, eta;
  for (std::size_t i = 0; i < d; ++i) {
    rho_mats.push_back(MatrixQ::blocks(a.rho().matrices[i],
                                       MatrixQ::zero(a.dim(), b.dim()),
                                       MatrixQ::zero(b.dim(), a.dim()), b.rho().matrices[i]));
    eta.push_back(MatrixQ::blocks(a.eta()[i], MatrixQ::zero(a.dim(), b.dim()),
                                  MatrixQ::zero(b.dim(), a.dim()), b.eta()[i]));
  }
  const Certificate& ca = a.certificate();
  const Certificate& cb = b.certificate();
  Certificate cert;
  if (!ca.exact() || !cb.exact()) {
    int bound = std::min(ca.exact() ? INT32_MAX : ca.bound, cb.exact() ? INT32_MAX : cb.bound);
    cert = Certificate::bounded(bound);
  } else if (ca.is_evaluation() && cb.is_evaluation() && ca.eval_point == cb.eval_point) {
    cert = Certificate::construction("evaluation", ca.eval_point);
  } else if (ca.kind == Certificate::Kind::ExactNilpotent &&
             cb.kind == Certificate::Kind::ExactNilpotent) {
    cert = Certificate::nilpotent(std::max(ca.bound, cb.bound));
  } else {
    cert = Certificate::construction("direct-sum");
  }
  return PairModule(a.context(), Rep(a.rho().algebra, std::move(rho_mats)), std::move(eta),
                    std::move(cert));
}

/// Tensor product through the coproduct x t^r -> x t^r ⊗ 1 + 1 ⊗ x t^r.
/// Evaluation factors at a common point stay exact; anything else is
/// re-verified at bound R.
inline PairModule tensor_module(const PairModule& a, const PairModule& b, int R) {
  detail::require_compatible(a, b);
  const std::size_t d = a.algebra().dim();
  const MatrixQ ia = MatrixQ::identity(a.dim());
  const MatrixQ ib = MatrixQ::identity(b.dim());
  std::vector<MatrixQ> rho_mats, eta;
  for (std::size_t i = 0; i < d; ++i) {
    rho_mats.push_back(MatrixQ::kron(a.rho().matrices[i], ib) +
                       MatrixQ::kron(ia, b.rho().matrices[i]));
    eta.push_back(MatrixQ::kron(a.eta()[i], ib) + MatrixQ::kron(ia, b.eta()[i]));
  }
  Rep rho(a.rho().algebra, std::move(rho_mats));
  if (a.certificate().is_evaluation() && b.certificate().is_evaluation() &&
      a.certificate().eval_point == b.certificate().eval_point) {
    return PairModule(a.context(), std::move(rho), std::move(eta),
                      Certificate::construction("evaluation", a.certificate().eval_point));
  }
  VerifyOutcome out = verify_pair(a.context(), rho, eta, R);
  if (!out.ok())
    throw Error(out.failure->code, "tensor product failed verification",
                out.failure->witness, out.failure->detail);
  return std::move(*out.module);
}

/// Hom_{a[t]}(V1, V2): phi with phi rho1(x) = rho2(x) phi and
/// phi eta1(x) = eta2(x) phi for every basis x.
inline Subspace hom_module_space(const PairModule& m1, const PairModule& m2) {
  detail::require_compatible(m1, m2);
  const std::size_t n1 = m1.dim(), n2 = m2.dim(), d = m1.algebra().dim();
  MatrixQ cond(2 * d * n1 * n2, n1 * n2);
  std::size_t row = 0;
  auto add_block = [&](const MatrixQ& a1, const MatrixQ& a2) {
    // phi a1 - a2 phi = 0
    for (std::size_t a = 0; a < n2; ++a)
      for (std::size_t b = 0; b < n1; ++b) {
        for (std::size_t c = 0; c < n1; ++c) cond.at(row, a * n1 + c) += a1.at(c, b);
        for (std::size_t c = 0; c < n2; ++c) cond.at(row, c * n1 + b) -= a2.at(a, c);
        ++row;
      }
  };
  for (std::size_t t = 0; t < d; ++t) add_block(m1.rho().matrices[t], m2.rho().matrices[t]);
  for (std::size_t t = 0; t < d; ++t) add_block(m1.eta()[t], m2.eta()[t]);
  return kernel_basis(cond);
}

struct IsoResult {
  std::optional<MatrixQ> intertwiner;
  /// True when non-isomorphism was proved (hom space zero, dimension
  /// mismatch, or every element of the hom space shown singular).
  bool proven_nonisomorphic = false;
};

/// Searches hom_module_space for an invertible element: basis vectors first,
/// then 32 seeded random combinations; for hom spaces of dimension <= 3 the
/// generic determinant polynomial is evaluated on a full grid, which either
/// finds an invertible element or proves that none exists.
inline IsoResult find_isomorphism(const PairModule& m1, const PairModule& m2,
                                  std::uint64_t seed = 0) {
  if (m1.dim() != m2.dim()) return {std::nullopt, true};
  const std::size_t n = m1.dim();
  Subspace hom = hom_module_space(m1, m2);
  if (hom.dim() == 0) return {std::nullopt, true};
  std::vector<MatrixQ> basis;
  for (std::size_t i = 0; i < hom.dim(); ++i)
    basis.push_back(MatrixQ::unvec(hom.basis_vector(i), n, n));
  for (const auto& phi : basis)
    if (is_invertible(phi)) return {phi, false};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int attempt = 0; attempt < 32; ++attempt) {
    MatrixQ phi(n, n);
    for (const auto& b : basis) phi += b * Rational(coeff(rng));
    if (is_invertible(phi)) return {phi, false};
  }
  if (hom.dim() <= 3) {
    // det(sum t_i phi_i) has per-variable degree <= n, so vanishing on the
    // whole (n+1)^dim grid forces it to vanish identically.
    std::vector<std::size_t> t(hom.dim(), 0);
    while (true) {
      MatrixQ phi(n, n);
      for (std::size_t i = 0; i < basis.size(); ++i)
        phi += basis[i] * Rational(static_cast<long long>(t[i]));
      if (is_invertible(phi)) return {phi, false};
      std::size_t pos = 0;
      while (pos < t.size() && t[pos] == n) t[pos++] = 0;
      if (pos == t.size()) break;
      ++t[pos];
    }
    return {std::nullopt, true};
  }
  return {std::nullopt, false};
}

/// Whether (t - a_1)...(t - a_k) annihilates the module: expands the
/// polynomial and tests sum_s c_s act(x, s) = 0 for every basis x.
inline bool annihilator_poly_test(const PairModule& m, const std::vector<Rational>& roots,
                                  int R) {
  const int k = static_cast<int>(roots.size());
  const int required = std::max(k, R);
  if (!m.certificate().covers(required))
    throw Error(errc::UNCOVERED_DEGREE,
                "certificate covers less than the requested degree", {required});
  std::vector<Rational> coeff{Rational(1)};  // coefficients of prod (t - a_i), low -> high
  for (const Rational& a : roots) {
    std::vector<Rational> next(coeff.size() + 1);
    for (std::size_t s = 0; s < coeff.size(); ++s) {
      next[s + 1] += coeff[s];
      next[s] -= a * coeff[s];
    }
    coeff = std::move(next);
  }
  const std::size_t d = m.algebra().dim();
  for (std::size_t i = 0; i < d; ++i) {
    VecQ x(d);
    x[i] = Rational(1);
    MatrixQ acc(m.dim(), m.dim());
    for (std::size_t s = 0; s < coeff.size(); ++s)
      if (!coeff[s].is_zero()) acc += act_matrix(m, x, static_cast<int>(s)) * coeff[s];
    if (!acc.is_zero()) return false;
  }
  return true;
}

namespace detail {

/// Coefficients (low -> high) of det(x I - A), by interpolation at 0..n.
inline VecQ char_poly(const MatrixQ& a) {
  const std::size_t n = a.rows();
  MatrixQ vander(n + 1, n + 1);
  VecQ values(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    MatrixQ shifted = MatrixQ::identity(n) * Rational(static_cast<long long>(k)) - a;
    values[k] = det(shifted);
    Rational p(1);
    for (std::size_t j = 0; j <= n; ++j) {
      vander.at(k, j) = p;
      p *= Rational(static_cast<long long>(k));
    }
  }
  auto coeffs = solve(vander, values);
  if (!coeffs) throw Error(errc::PRECONDITION, "char poly interpolation failed");
  return *coeffs;
}

inline std::string poly_str(const VecQ& coeffs) {
  std::string s;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += coeffs[i].str() + "*x^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

inline std::vector<mpz_class> divisors_of(mpz_class v) {
  if (v < 0) v = -v;
  std::vector<std::pair<mpz_class, unsigned>> factors;
  for (mpz_class p = 2; p * p <= v; ++p) {
    if (p > 1'000'000) {
      if (mpz_probab_prime_p(v.get_mpz_t(), 25)) break;
      throw Error(errc::SIZE_LIMIT, "eigenvalue search: coefficient too hard to factor");
    }
    unsigned e = 0;
    while (v % p == 0) { v /= p; ++e; }
    if (e) factors.emplace_back(p, e);
  }
  if (v > 1) factors.emplace_back(v, 1);
  std::vector<mpz_class> divs{1};
  for (const auto& [p, e] : factors) {
    const std::size_t base = divs.size();
    mpz_class pw = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pw *= p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pw);
    }
  }
  return divs;
}

/// All rational roots with multiplicity, plus the degree of what remains.
/// Rational-root search on the integer-cleared polynomial followed by
/// repeated exact division.
inline std::pair<std::vector<std::pair<Rational, int>>, int> rational_roots(VecQ f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
  if (f.empty() || f.size() == 1) return {{}, 0};
  std::vector<std::pair<Rational, int>> roots;
  // roots at zero
  int zero_mult = 0;
  while (f.size() > 1 && f[0].is_zero()) {
    f.erase(f.begin());
    ++zero_mult;
  }
  if (zero_mult) roots.emplace_back(Rational(0), zero_mult);
  if (f.size() == 1) return {roots, 0};
  mpz_class denlcm = 1;
  for (const auto& c : f) denlcm = denlcm / gcd(denlcm, c.denominator()) * c.denominator();
  std::vector<mpz_class> zc;
  for (const auto& c : f) zc.push_back(c.numerator() * (denlcm / c.denominator()));
  auto eval = [&](const Rational& x) {
    Rational acc;
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
    return acc;
  };
  auto deflate = [&](const Rational& root) {
    // f := f / (x - root), exact synthetic division
    VecQ q(f.size() - 1);
    Rational carry = f.back();
    for (std::size_t i = f.size() - 1; i-- > 0;) {
      q[i] = carry;
      carry = f[i] + carry * root;
    }
    f = std::move(q);
  };
  std::vector<mpz_class> ps = divisors_of(zc.front());
  std::vector<mpz_class> qs = divisors_of(zc.back());
  for (const mpz_class& p : ps) {
    for (const mpz_class& q : qs) {
      for (int sign : {1, -1}) {
        if (f.size() <= 1) break;
        Rational cand(mpq_class(mpz_class(sign * p), q));
        if (!eval(cand).is_zero()) continue;
        int mult = 0;
        while (f.size() > 1 && eval(cand).is_zero()) {
          deflate(cand);
          ++mult;
        }
        if (mult) roots.emplace_back(cand, mult);
      }
    }
  }
  return {roots, static_cast<int>(f.size()) - 1};
}

}  // namespace detail

/// Degrees that can carry a nonzero action, by certificate structure; used to
/// bound the operator set for highest_vectors.
inline int effective_degree_bound(const PairModule& m) {
  const Certificate& c = m.certificate();
  switch (c.kind) {
    case Certificate::Kind::Bounded: return c.bound;
    case Certificate::Kind::ExactNilpotent: return std::max(1, c.bound - 1);
    case Certificate::Kind::ExactByConstruction:
      if (c.is_evaluation()) return 1;  // act(x, r) = a^r rho(x)
      return m.context()->options().max_degree;
  }
  return 1;
}

/// Joint highest-weight vectors: the common kernel of n+[t] intersected with
/// the simultaneous rational eigenvectors of the commuting h[t] action.
/// Non-rational eigenvalues raise IRRATIONAL_EIGENVALUE with the offending
/// characteristic polynomial.
inline std::vector<VecQ> highest_vectors(const PairModule& m) {
  const auto& tri = m.algebra().triangular();
  if (!tri) throw Error(errc::NO_TRIANGULAR_DATA, "algebra has no triangular data");
  const std::size_t d = m.algebra().dim();
  const int cover = effective_degree_bound(m);
  std::vector<MatrixQ> killers;
  for (std::size_t idx : tri->nplus)
    for (int r = 0; r <= cover; ++r) {
      VecQ x(d);
      x[idx] = Rational(1);
      killers.push_back(act_matrix(m, x, r));
    }
  MatrixQ stacked(0, m.dim());
  for (const auto& k : killers) stacked = MatrixQ::vstack(stacked, k);
  Subspace joint = kernel_basis(stacked);
  if (joint.dim() == 0) return {};

  std::vector<Subspace> blocks{joint};
  for (std::size_t hidx : tri->h)
    for (int r = 0; r <= cover; ++r) {
      VecQ x(d);
      x[hidx] = Rational(1);
      MatrixQ op = act_matrix(m, x, r);
      std::vector<Subspace> next;
      for (const Subspace& w : blocks) {
        // restriction of op to w in its canonical basis
        MatrixQ restr(w.dim(), w.dim());
        for (std::size_t j = 0; j < w.dim(); ++j) {
          VecQ img = op.apply(w.basis_vector(j));
          auto coords = w.coordinates_of(img);
          if (!coords)
            throw Error(errc::PRECONDITION, "h-action does not preserve the joint kernel");
          restr.set_col(j, *coords);
        }
        VecQ cp = detail::char_poly(restr);
        auto [roots, residual_degree] = detail::rational_roots(cp);
        if (residual_degree > 0)
          throw Error(errc::IRRATIONAL_EIGENVALUE,
                      "h[t] eigenvalues are not all rational", {},
                      detail::poly_str(cp));
        std::sort(roots.begin(), roots.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [lambda, mult] : roots) {
          Subspace eig =
              kernel_basis(restr - MatrixQ::identity(w.dim()) * lambda);
          if (eig.dim() == 0) continue;
          std::vector<VecQ> lifted;
          for (std::size_t e = 0; e < eig.dim(); ++e) {
            VecQ coords = eig.basis_vector(e);
            VecQ v(m.dim());
            for (std::size_t j = 0; j < w.dim(); ++j)
              if (!coords[j].is_zero()) vec_axpy(v, coords[j], w.basis_vector(j));
            lifted.push_back(std::move(v));
          }
          next.push_back(Subspace::from_vectors(lifted, m.dim()));
        }
      }
      blocks = std::move(next);
    }
  std::vector<VecQ> out;
  for (const Subspace& b : blocks)
    for (std::size_t i = 0; i < b.dim(); ++i) out.push_back(b.basis_vector(i));
  return out;
}

}  // namespace curalg
