#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curalg/liealg.hpp"

using namespace curalg;

namespace {

AlgebraPtr sl2_by_hand() {
  // basis (e, h, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h
  return make_algebra(3, {"e", "h", "f"},
                      {{1, 0, {{0, Rational(2)}}},
                       {1, 2, {{2, Rational(-2)}}},
                       {0, 2, {{1, Rational(1)}}}});
}

// Killing form by the trace oracle, independent of invariant_symmetric_form.
MatrixQ killing_form(const AlgebraPtr& L) {
  Rep ad = adjoint_rep(L);
  MatrixQ k(L->dim(), L->dim());
  for (std::size_t i = 0; i < L->dim(); ++i)
    for (std::size_t j = 0; j < L->dim(); ++j)
      k.at(i, j) = (ad.matrices[i] * ad.matrices[j]).trace();
  return k;
}

}  // namespace

TEST_CASE("make_algebra validates sl2 and abelian tables") {
  auto sl2 = sl2_by_hand();
  CHECK(sl2->dim() == 3);
  CHECK(sl2->bracket_basis(0, 2) == VecQ{Rational(0), Rational(1), Rational(0)});

  auto ab = make_algebra(2, {"x", "y"}, {});
  CHECK(ab->dim() == 2);
  CHECK(vec_is_zero(ab->bracket_basis(0, 1)));
}

TEST_CASE("make_algebra rejects non-antisymmetric tables") {
  // [e,f] = h but [f,e] = h
  CHECK_THROWS_WITH_AS(
      make_algebra(3, {"e", "h", "f"},
                   {{0, 2, {{1, Rational(1)}}}, {2, 0, {{1, Rational(1)}}}}),
      doctest::Contains("NOT_ANTISYMMETRIC"), Error);
}

TEST_CASE("make_algebra rejects Jacobi failures") {
  // antisymmetric but non-Jacobi: [x,y]=z, [y,z]=y gives cyclic sum -z
  bool threw = false;
  try {
    make_algebra(3, {"x", "y", "z"},
                 {{0, 1, {{2, Rational(1)}}}, {1, 2, {{1, Rational(1)}}}});
  } catch (const Error& e) {
    threw = true;
    CHECK(e.code() == errc::JACOBI_FAILS);
    CHECK(e.witness().size() == 3);
  }
  CHECK(threw);
}

TEST_CASE("classical sl(2) matches the hand table up to relabeling") {
  auto sl2 = classical_algebra(ClassicalFamily::sl, 2);
  CHECK(sl2->dim() == 3);
  // basis order (E1_2, H1, E2_1) = (e, h, f)
  CHECK(sl2->basis_names() == std::vector<std::string>{"E1_2", "H1", "E2_1"});
  CHECK(sl2->bracket_basis(1, 0) == VecQ{Rational(2), Rational(0), Rational(0)});
  CHECK(sl2->bracket_basis(1, 2) == VecQ{Rational(0), Rational(0), Rational(-2)});
  CHECK(sl2->bracket_basis(0, 2) == VecQ{Rational(0), Rational(1), Rational(0)});
  REQUIRE(sl2->triangular().has_value());
  CHECK(sl2->triangular()->theta == VecQ{Rational(2)});
}

TEST_CASE("so(3) brackets by hand oracle") {
  auto so3 = classical_algebra(ClassicalFamily::so, 3);
  CHECK(so3->dim() == 3);
  // [A12, A13] = -A23 (expand E_ij - E_ji commutators)
  CHECK(so3->bracket_basis(0, 1) == VecQ{Rational(0), Rational(0), Rational(-1)});
  CHECK(so3->bracket_basis(0, 2) == VecQ{Rational(0), Rational(1), Rational(0)});
  CHECK(so3->bracket_basis(1, 2) == VecQ{Rational(-1), Rational(0), Rational(0)});
}

TEST_CASE("sl(3) triangular data") {
  auto sl3 = classical_algebra(ClassicalFamily::sl, 3);
  CHECK(sl3->dim() == 8);
  REQUIRE(sl3->triangular().has_value());
  const auto& tri = *sl3->triangular();
  CHECK(tri.nplus.size() == 3);
  CHECK(tri.h.size() == 2);
  // x_theta_plus is E1_3
  CHECK(tri.x_theta_plus[1] == Rational(1));
  CHECK(sl3->basis_names()[1] == "E1_3");
  CHECK(tri.theta == VecQ{Rational(1), Rational(1)});
}

TEST_CASE("classical algebras are perfect, abelian is not") {
  CHECK(is_perfect(*classical_algebra(ClassicalFamily::sl, 2)));
  CHECK(is_perfect(*classical_algebra(ClassicalFamily::sl, 3)));
  CHECK(is_perfect(*classical_algebra(ClassicalFamily::so, 4)));
  CHECK(is_perfect(*classical_algebra(ClassicalFamily::so, 5)));
  CHECK(is_perfect(*split_so_algebra(4)));
  CHECK(!is_perfect(*make_algebra(2, {"x", "y"}, {})));
}

TEST_CASE("split so(n) carries valid triangular data") {
  for (std::size_t n : {3, 4, 5, 6}) {
    auto g = split_so_algebra(n);
    CHECK(g->dim() == n * (n - 1) / 2);
    REQUIRE(g->triangular().has_value());  // eigen relations checked on construction
    CHECK(g->triangular()->nplus.size() == g->triangular()->nminus.size());
  }
}

TEST_CASE("adjoint rep of sl2") {
  auto sl2 = sl2_by_hand();
  Rep ad = adjoint_rep(sl2);
  // ad(h) = diag(2, 0, -2) in basis (e, h, f)
  MatrixQ adh = ad.matrices[1];
  CHECK(adh == MatrixQ{{2, 0, 0}, {0, 0, 0}, {0, 0, -2}});
  // Killing form value: tr(ad h . ad h) = 8
  CHECK((adh * adh).trace() == Rational(8));

  Rep ad_ab = adjoint_rep(make_algebra(2, {"x", "y"}, {}));
  CHECK(ad_ab.matrices[0].is_zero());
  CHECK(ad_ab.matrices[1].is_zero());
}

TEST_CASE("rep constructor rejects non-representations") {
  auto sl2 = sl2_by_hand();
  std::vector<MatrixQ> bad = adjoint_rep(sl2).matrices;
  bad[0].at(0, 0) += Rational(1);
  CHECK_THROWS_AS(Rep(sl2, bad), Error);
}

TEST_CASE("hom_space: Schur on sl2 adjoint") {
  auto sl2 = sl2_by_hand();
  Rep ad = adjoint_rep(sl2);
  Subspace endo = hom_space(ad, ad);
  CHECK(endo.dim() == 1);
  CHECK(endo.contains_vector(MatrixQ::identity(3).vec()));

  Rep triv = trivial_rep(sl2);
  CHECK(hom_space(triv, ad).dim() == 0);
  CHECK(hom_space(triv, triv).dim() == 1);
}

TEST_CASE("hom_space always contains the identity for rho = rho'") {
  for (auto L : {classical_algebra(ClassicalFamily::sl, 3),
                 classical_algebra(ClassicalFamily::so, 4)}) {
    Rep ad = adjoint_rep(L);
    CHECK(hom_space(ad, ad).contains_vector(MatrixQ::identity(L->dim()).vec()));
  }
}

TEST_CASE("invariant form of so(3) natural rep is the identity") {
  auto so3 = classical_algebra(ClassicalFamily::so, 3);
  Rep nat(so3, detail::so_basis(3).mats);
  CHECK(invariant_symmetric_form(nat) == MatrixQ::identity(3));
}

TEST_CASE("invariant form of sl2 adjoint is the normalized Killing form") {
  auto sl2 = sl2_by_hand();
  Rep ad = adjoint_rep(sl2);
  MatrixQ B = invariant_symmetric_form(ad);
  MatrixQ kappa = killing_form(sl2);
  CHECK(kappa.at(0, 2) == Rational(4));
  CHECK(kappa.at(1, 1) == Rational(8));
  // B is kappa scaled so that its first nonzero row-major entry is 1
  CHECK(B == kappa * kappa.at(0, 2).inverse());
  // invariance and symmetry hold exactly
  CHECK(B.transpose() == B);
  for (const auto& m : ad.matrices)
    CHECK((m.transpose() * B + B * m).is_zero());
}

TEST_CASE("invariant form error cases") {
  auto sl2 = sl2_by_hand();
  CHECK_THROWS_WITH_AS(invariant_symmetric_form(trivial_rep(sl2, 2)),
                       doctest::Contains("NOT_UNIQUE"), Error);
}

TEST_CASE("bad ranks are rejected") {
  CHECK_THROWS_AS(classical_algebra(ClassicalFamily::sl, 1), Error);
  CHECK_THROWS_AS(classical_algebra(ClassicalFamily::so, 2), Error);
}

TEST_CASE("no symmetric invariant form on the sl2 natural rep") {
  auto sl2 = classical_algebra(ClassicalFamily::sl, 2);
  Rep nat(sl2, detail::sl_basis(2).mats);
  CHECK_THROWS_WITH_AS(invariant_symmetric_form(nat), doctest::Contains("NO_FORM"), Error);
}
