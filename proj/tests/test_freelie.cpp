#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curalg/freelie.hpp"
#include "oracles.hpp"

using namespace curalg;

namespace {

ContextPtr sl2_ctx() {
  return make_context(classical_algebra(ClassicalFamily::sl, 2));
}

VecQ unit(std::size_t n, std::size_t i) {
  VecQ v(n);
  v[i] = Rational(1);
  return v;
}

}  // namespace

TEST_CASE("lyndon basis sizes match the necklace oracle") {
  for (int d : {2, 3, 4})
    for (int r = 1; r <= 6; ++r) {
      FreeDegree fd = lyndon_degree(d, r);
      CHECK(fd.dim() == oracles::necklace_count(d, r));
      CHECK(static_cast<long long>(fd.dim()) == oracles::witt_formula(d, r));
    }
}

TEST_CASE("d=3 row of dimensions") {
  std::vector<std::size_t> dims;
  for (int r = 1; r <= 6; ++r) dims.push_back(lyndon_degree(3, r).dim());
  CHECK(dims == std::vector<std::size_t>{3, 3, 8, 18, 48, 116});
}

TEST_CASE("degree-2 expansions and degenerate cases") {
  FreeDegree fd = lyndon_degree(3, 2);
  REQUIRE(fd.dim() == 3);  // words 01, 02, 12
  CHECK(fd.lyndon_basis()[0].letters == std::vector<int>{0, 1});
  TensorPoly expect = tensor_bracket(TensorPoly::monomial({0}, 3), TensorPoly::monomial({1}, 3));
  CHECK(fd.expansion()[0] == expect);

  CHECK(lyndon_degree(1, 2).dim() == 0);  // F^2 of a line is zero
  CHECK(lyndon_degree(1, 1).dim() == 1);
}

TEST_CASE("expansion matrices have full row rank") {
  for (int d : {2, 3})
    for (int r = 2; r <= 4; ++r) {
      FreeDegree fd = lyndon_degree(d, r);
      CHECK(rank(fd.expansion_matrix()) == fd.dim());
    }
}

TEST_CASE("monomial cap fails loudly") {
  FreeLieOptions opts;
  opts.max_monomials = 100;
  CHECK_THROWS_WITH_AS(lyndon_degree(3, 5, opts), doctest::Contains("SIZE_LIMIT"), Error);
}

TEST_CASE("ad_T on sl2") {
  auto ctx = sl2_ctx();
  const auto& L = ctx->algebra();
  // x = h, p = e ⊗ e scales by 4 (weight additivity, [h,e] = 2e)
  VecQ h = unit(3, 1);
  TensorPoly ee = TensorPoly::monomial({0, 0}, 3);
  TensorPoly r = ad_T(L, h, ee);
  TensorPoly expect = ee;
  expect *= Rational(4);
  CHECK(r == expect);

  // zero input stays zero
  CHECK(ad_T(L, h, TensorPoly(2, 3)).is_zero());

  // degree 1 is the bracket: ad_T(e)(f) = [e,f] = h
  TensorPoly f1 = TensorPoly::monomial({2}, 3);
  CHECK(ad_T(L, unit(3, 0), f1) == TensorPoly::monomial({1}, 3));
}

TEST_CASE("tau matrices for sl2") {
  auto ctx = sl2_ctx();
  CHECK(ctx->tau_matrix(1) == MatrixQ::identity(3));
  CHECK(ctx->tau_rank(2) == 3);
  CHECK(ctx->ker_tau_tensor(2).dim() == 0);
  CHECK(ctx->tau_rank(3) == 3);
  CHECK(ctx->ker_tau_tensor(3).dim() == 5);  // dim F^3 = 8, rank 3
}

TEST_CASE("ker tau on an abelian algebra is all of F^r") {
  auto ab = make_algebra(2, {"x", "y"}, {});
  CurrentContext ctx(ab);
  CHECK(ctx.free_degree(2).dim() == 1);
  CHECK(ctx.ker_tau_tensor(2).dim() == 1);
  // the kernel vector is the expansion of the only Lyndon word
  CHECK(ctx.ker_tau_tensor(2).contains_vector(ctx.free_degree(2).expansion()[0].dense()));
}

TEST_CASE("tensor_to_lyndon round trip and membership failures") {
  FreeDegree fd = lyndon_degree(3, 2);
  // e ⊗ f - f ⊗ e lies in F^2 (basis letters of sl2 order: e=0, h=1, f=2)
  TensorPoly p = tensor_bracket(TensorPoly::monomial({0}, 3), TensorPoly::monomial({2}, 3));
  auto coords = tensor_to_lyndon(fd, p);
  REQUIRE(coords.has_value());
  // word (0,2) is the second Lyndon word of degree 2
  CHECK((*coords)[1] == Rational(1));
  CHECK((*coords)[0] == Rational(0));

  // symmetric tensors are not in F^2
  TensorPoly sym = concat(TensorPoly::monomial({0}, 3), TensorPoly::monomial({2}, 3));
  sym += concat(TensorPoly::monomial({2}, 3), TensorPoly::monomial({0}, 3));
  CHECK(!tensor_to_lyndon(fd, sym).has_value());
  CHECK(!oracles::in_row_space(fd.expansion_matrix(), sym.dense()));

  // zero maps to zero coordinates
  auto z = tensor_to_lyndon(fd, TensorPoly(2, 3));
  REQUIRE(z.has_value());
  CHECK(vec_is_zero(*z));
}

TEST_CASE("tensor_to_lyndon agrees with the rref membership oracle") {
  FreeDegree fd = lyndon_degree(2, 4);
  MatrixQ em = fd.expansion_matrix();
  // probe all monomials: membership decisions must match the oracle
  for (std::uint64_t code = 0; code < 16; ++code) {
    TensorPoly mono(4, 2);
    mono.add(code, Rational(1));
    CHECK(tensor_to_lyndon(fd, mono).has_value() ==
          oracles::in_row_space(em, mono.dense()));
  }
}

TEST_CASE("graded compatibility of tau on sl2 (all pairs r+s <= 5)") {
  auto ctx = sl2_ctx();
  const auto& L = ctx->algebra();
  for (int r = 1; r <= 4; ++r)
    for (int s = 1; r + s <= 5; ++s) {
      const FreeDegree& fr = ctx->free_degree(r);
      const FreeDegree& fs = ctx->free_degree(s);
      const FreeDegree& frs = ctx->free_degree(r + s);
      for (std::size_t i = 0; i < fr.dim(); ++i)
        for (std::size_t j = 0; j < fs.dim(); ++j) {
          TensorPoly br = tensor_bracket(fr.expansion()[i], fs.expansion()[j]);
          auto coords = tensor_to_lyndon(frs, br);
          REQUIRE(coords.has_value());
          VecQ lhs = L.bracket(ctx->tau_matrix(r).col(i), ctx->tau_matrix(s).col(j));
          CHECK(ctx->tau_matrix(r + s).apply(*coords) == lhs);
        }
    }
}

TEST_CASE("ad_T stability: derivations preserve F^r") {
  auto ctx = sl2_ctx();
  const auto& L = ctx->algebra();
  for (int r = 2; r <= 4; ++r) {
    const FreeDegree& fd = ctx->free_degree(r);
    for (std::size_t i = 0; i < fd.dim(); ++i)
      for (std::size_t x = 0; x < 3; ++x) {
        TensorPoly img = ad_T(L, unit(3, x), fd.expansion()[i]);
        CHECK(tensor_to_lyndon(fd, img).has_value());
      }
  }
}

TEST_CASE("tau is equivariant: tau(ad_T(x) z) = [x, tau(z)]") {
  auto ctx = sl2_ctx();
  const auto& L = ctx->algebra();
  for (int r = 1; r <= 5; ++r) {
    const FreeDegree& fd = ctx->free_degree(r);
    for (std::size_t i = 0; i < fd.dim(); ++i)
      for (std::size_t x = 0; x < 3; ++x) {
        TensorPoly img = ad_T(L, unit(3, x), fd.expansion()[i]);
        auto coords = tensor_to_lyndon(fd, img);
        REQUIRE(coords.has_value());
        CHECK(ctx->tau_matrix(r).apply(*coords) ==
              L.bracket(unit(3, x), ctx->tau_matrix(r).col(i)));
      }
  }
}

TEST_CASE("tau surjectivity for perfect algebras") {
  for (auto L : {classical_algebra(ClassicalFamily::sl, 2),
                 classical_algebra(ClassicalFamily::sl, 3),
                 classical_algebra(ClassicalFamily::so, 4)}) {
    CurrentContext ctx(L);
    for (int r = 1; r <= 3; ++r) CHECK(ctx.tau_rank(r) == L->dim());
  }
}

TEST_CASE("degree-2 containment: ker tau_2 lies in span{x⊗y - y⊗x - [x,y]}") {
  // so(4) has a nonzero ker tau_2 (dim F^2 = 15, rank 6)
  auto so4 = classical_algebra(ClassicalFamily::so, 4);
  CurrentContext ctx(so4);
  const std::size_t d = so4->dim();
  CHECK(ctx.ker_tau_tensor(2).dim() == 9);
  // span of x_i ⊗ x_j - x_j ⊗ x_i - [x_i, x_j] has pieces in degrees 1 and 2;
  // at degree 2 the ideal's homogeneous part is spanned by the brackets with
  // [x_i,x_j] = 0 plus combinations whose degree-1 parts cancel. Build the
  // degree-graded span in T^1 ⊕ T^2 and intersect with T^2.
  std::vector<VecQ> gens;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      VecQ v(d + d * d);
      VecQ br = so4->bracket_basis(i, j);
      for (std::size_t k = 0; k < d; ++k) v[k] = -br[k];
      v[d + i * d + j] += Rational(1);
      v[d + j * d + i] -= Rational(1);
      gens.push_back(std::move(v));
    }
  Subspace ideal_slice = Subspace::from_vectors(gens, d + d * d);
  std::vector<VecQ> t2_basis;
  for (std::size_t c = 0; c < d * d; ++c) {
    VecQ v(d + d * d);
    v[d + c] = Rational(1);
    t2_basis.push_back(std::move(v));
  }
  Subspace degree2 = Subspace::from_vectors(t2_basis, d + d * d);
  Subspace slice2 = ideal_slice.intersection(degree2);
  const Subspace& ker2 = ctx.ker_tau_tensor(2);
  for (std::size_t k = 0; k < ker2.dim(); ++k) {
    VecQ padded(d + d * d);
    VecQ kv = ker2.basis_vector(k);
    for (std::size_t c = 0; c < d * d; ++c) padded[d + c] = kv[c];
    CHECK(slice2.contains_vector(padded));
  }
}

TEST_CASE("xi composed along monomials equals xi after tau (adjoint, r <= 4)") {
  auto ctx = sl2_ctx();
  Rep ad = adjoint_rep(ctx->algebra_ptr());
  for (int r = 1; r <= 4; ++r) {
    const FreeDegree& fd = ctx->free_degree(r);
    for (std::size_t i = 0; i < fd.dim(); ++i) {
      MatrixQ acc(3, 3);
      for (const auto& [code, c] : fd.expansion()[i].terms) {
        MatrixQ prod = MatrixQ::identity(3);
        for (int l : TensorPoly::decode(code, 3, r)) prod = prod * ad.matrices[l];
        acc += prod * c;
      }
      CHECK(acc == ad.of(ctx->tau_matrix(r).col(i)));
    }
  }
}

TEST_CASE("truncated current algebra dimensions") {
  auto ctx = sl2_ctx();
  CHECK(truncated_current_dim(*ctx, 1) == 3);
  CHECK(truncated_current_dim(*ctx, 3) == 9);

  CurrentContext sl3(classical_algebra(ClassicalFamily::sl, 3));
  CHECK(truncated_current_dim(sl3, 2) == 16);

  CurrentContext ab(make_algebra(2, {"x", "y"}, {}));
  CHECK_THROWS_WITH_AS(truncated_current_dim(ab, 2), doctest::Contains("NOT_PERFECT"),
                       Error);
}
