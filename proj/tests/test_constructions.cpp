#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curalg/constructions.hpp"

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

void expect_passes_verify(const PairModule& m, int R = 4) {
  auto out = verify_pair(m.context(), m.rho(), m.eta(), R);
  REQUIRE(out.ok());
}

}  // namespace

TEST_CASE("augmentation ideal gives the trivial module") {
  auto ctx = sl2_ctx();
  IdealSpec spec;
  spec.flavor = IdealSpec::Flavor::Tensor;
  for (int i = 0; i < 3; ++i)
    spec.tensor_generators.push_back(TensorPoly::monomial({i}, 3));
  GradedModule gm = ideal_module_tensor(ctx, spec, 2);
  CHECK(gm.report.total_dim == 1);
  CHECK(gm.module.certificate().kind == Certificate::Kind::ExactByConstruction);
  for (const auto& e : gm.module.eta()) CHECK(e.is_zero());
  for (const auto& r : gm.module.rho().matrices) CHECK(r.is_zero());
}

TEST_CASE("ideal generated by ker tau_3 alone is exact at N=3") {
  auto ctx = sl2_ctx();
  IdealSpec spec;
  spec.flavor = IdealSpec::Flavor::Tensor;
  for (const TensorPoly& z : ctx->ker_tau_polys(3)) spec.tensor_generators.push_back(z);
  GradedModule gm = ideal_module_tensor(ctx, spec, 3);
  CHECK(gm.module.certificate().kind == Certificate::Kind::ExactByConstruction);
  CHECK(gm.report.per_degree == std::vector<std::size_t>{1, 3, 9, 22});
  expect_passes_verify(gm.module);

  // eta acts as left multiplication: on the degree-0 coordinate, eta(x_i)
  // lands on the class of the degree-1 monomial x_i
  const PairModule& m = gm.module;
  for (std::size_t i = 0; i < 3; ++i) {
    VecQ img = m.eta()[i].col(0);
    for (std::size_t row = 0; row < m.dim(); ++row)
      CHECK(img[row] == ((row == 1 + i) ? Rational(1) : Rational(0)));
  }
}

TEST_CASE("zero-generator tensor ideal at N=2 keeps all 13 dimensions for sl2") {
  auto ctx = sl2_ctx();
  IdealSpec spec;
  spec.flavor = IdealSpec::Flavor::Tensor;
  GradedModule gm = ideal_module_tensor(ctx, spec, 2);
  // ker tau_2 = 0 for sl2, so the generators (none) already contain it
  CHECK(gm.report.per_degree == std::vector<std::size_t>{1, 3, 9});
  CHECK(gm.module.certificate().kind == Certificate::Kind::ExactByConstruction);
  expect_passes_verify(gm.module);
}

TEST_CASE("ker tau forced in: bounded certificate at N=3") {
  auto ctx = sl2_ctx();
  IdealSpec spec;
  spec.flavor = IdealSpec::Flavor::Tensor;
  GradedModule gm = ideal_module_tensor(ctx, spec, 3);
  // ker tau_3 has dimension 5 and is not generated by nothing
  CHECK(gm.module.certificate().kind == Certificate::Kind::Bounded);
  CHECK(gm.module.certificate().bound == 2);
  CHECK(gm.report.per_degree == std::vector<std::size_t>{1, 3, 9, 22});
  // realized kernel of eta per degree contains the quotiented ideal's piece:
  // eta^{odot 3}(ker tau_3) = 0 on the module
  for (const TensorPoly& z : ctx->ker_tau_polys(3))
    CHECK(detail::odot_eval(gm.module.eta(), z, gm.module.dim()).is_zero());
}

TEST_CASE("required containment failure carries a witness degree") {
  auto so4 = classical_algebra(ClassicalFamily::so, 4);
  auto ctx = make_context(so4);
  IdealSpec spec;
  spec.flavor = IdealSpec::Flavor::Tensor;
  spec.require_ker_tau_containment = true;
  bool threw = false;
  try {
    ideal_module_tensor(ctx, spec, 2);
  } catch (const Error& e) {
    threw = true;
    CHECK(e.code() == errc::KER_TAU_NOT_CONTAINED);
    CHECK(e.witness() == std::vector<long long>{2});
  }
  CHECK(threw);
}

TEST_CASE("symmetric ideal generated by S^2 gives C ⊕ a with eta(x)(a,y) = (0,ax)") {
  auto ctx = sl2_ctx();
  IdealSpec spec;
  spec.flavor = IdealSpec::Flavor::Symmetric;
  // all degree-2 monomials as generators
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      SymPoly p;
      std::vector<int> alpha(3, 0);
      ++alpha[i];
      ++alpha[j];
      p.add(alpha, Rational(1));
      spec.sym_generators.push_back(std::move(p));
    }
  GradedModule gm = ideal_module_sym(ctx, spec, 3);
  CHECK(gm.report.per_degree == std::vector<std::size_t>{1, 3, 0, 0});
  CHECK(gm.module.dim() == 4);
  expect_passes_verify(gm.module);
  // eta(x) sends the degree-0 coordinate to x and kills degree 1
  const PairModule& m = gm.module;
  std::size_t c0 = SIZE_MAX;
  for (std::size_t i = 0; i < 4; ++i)
    if (gm.coord_degree[i] == 0) c0 = i;
  REQUIRE(c0 != SIZE_MAX);
  for (std::size_t i = 0; i < 3; ++i) {
    MatrixQ e = m.eta()[i];
    int nonzero_into_degree1 = 0;
    for (std::size_t row = 0; row < 4; ++row) {
      if (row == c0) CHECK(e.at(row, c0).is_zero());
      else if (!e.at(row, c0).is_zero()) ++nonzero_into_degree1;
      for (std::size_t col = 0; col < 4; ++col)
        if (col != c0) CHECK(e.at(row, col).is_zero());
    }
    CHECK(nonzero_into_degree1 == 1);  // the image is the line through x_i
  }
}

TEST_CASE("free symmetric module: grading, submodule filtration, M2 property") {
  auto ctx = sl2_ctx();
  IdealSpec spec;
  spec.flavor = IdealSpec::Flavor::Symmetric;
  GradedModule gm = ideal_module_sym(ctx, spec, 2);
  CHECK(gm.report.per_degree == std::vector<std::size_t>{1, 3, 6});
  CHECK(gm.module.certificate().kind == Certificate::Kind::ExactNilpotent);
  expect_passes_verify(gm.module);

  const PairModule& m = gm.module;
  // S_1 = degrees >= 1 is a submodule: rho preserves degree, eta raises it,
  // so no column of a degree >= 1 coordinate reaches degree 0
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t col = 0; col < m.dim(); ++col)
      if (gm.coord_degree[col] >= 1)
        for (std::size_t row = 0; row < m.dim(); ++row)
          if (gm.coord_degree[row] == 0) {
            CHECK(m.rho().matrices[i].at(row, col).is_zero());
            CHECK(m.eta()[i].at(row, col).is_zero());
          }
  // V_k = S_{k-1}/S_k is an evaluation module at 0: eta strictly raises degree
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t col = 0; col < m.dim(); ++col)
      for (std::size_t row = 0; row < m.dim(); ++row)
        if (gm.coord_degree[row] != gm.coord_degree[col] + 1)
          CHECK(m.eta()[i].at(row, col).is_zero());
  // x t^r kills the module for r >= 2
  for (std::size_t i = 0; i < 3; ++i)
    for (int r = 2; r <= 4; ++r) CHECK(act_matrix(m, unit(3, i), r).is_zero());
}

TEST_CASE("sym_dual_module lowers degree through the invariant form") {
  auto ctx = sl2_ctx();
  GradedModule gm = sym_dual_module(ctx, 3);
  CHECK(gm.report.per_degree == std::vector<std::size_t>{1, 3, 6, 10});
  expect_passes_verify(gm.module);
  const PairModule& m = gm.module;

  // eta(x)(1) = 0
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t c0 = 0;  // first coordinate is the empty monomial
    CHECK(vec_is_zero(m.eta()[i].col(c0)));
  }

  // eta(e)(f·f) = 2 (e,f) f with the normalized form, (e,f) = 1
  detail::SymBasis sb(3, 3);
  std::vector<int> ff{0, 0, 2};
  std::vector<int> f1{0, 0, 1};
  VecQ img = m.eta()[0].col(sb.index.at(ff));
  VecQ expect(m.dim());
  expect[sb.index.at(f1)] = Rational(2);
  CHECK(img == expect);

  // x t^r kills the module for r >= 2
  for (std::size_t i = 0; i < 3; ++i)
    for (int r = 2; r <= 3; ++r) CHECK(act_matrix(m, unit(3, i), r).is_zero());
}

TEST_CASE("sym_dual eta is the form-adjoint of multiplication, degree by degree") {
  auto ctx = sl2_ctx();
  const int N = 3;
  GradedModule mult = ideal_module_sym(ctx, IdealSpec{IdealSpec::Flavor::Symmetric, {}, {}, false}, N);
  GradedModule dual = sym_dual_module(ctx, N);
  MatrixQ B = invariant_symmetric_form(adjoint_rep(ctx->algebra_ptr()));
  detail::SymBasis sb(3, N);

  // Gram form on S^k defined recursively by <e_i u, w> = sum_j B(i, w_j) <u, w - e_j>
  std::map<std::pair<std::vector<int>, std::vector<int>>, Rational> gram;
  std::function<Rational(const std::vector<int>&, const std::vector<int>&)> pairing =
      [&](const std::vector<int>& a, const std::vector<int>& b) -> Rational {
    int da = 0, db = 0;
    for (int e : a) da += e;
    for (int e : b) db += e;
    if (da != db) return Rational(0);
    if (da == 0) return Rational(1);
    auto key = std::make_pair(a, b);
    auto it = gram.find(key);
    if (it != gram.end()) return it->second;
    int i = 0;
    while (a[i] == 0) ++i;
    std::vector<int> a2 = a;
    --a2[i];
    Rational acc;
    for (int j = 0; j < 3; ++j) {
      if (b[j] == 0 || B.at(i, j).is_zero()) continue;
      std::vector<int> b2 = b;
      --b2[j];
      acc += Rational(b[j]) * B.at(i, j) * pairing(a2, b2);
    }
    gram.emplace(key, acc);
    return acc;
  };

  // G_{k-1} D_x = M_x^T G_k for the degree blocks of lowering and multiplication
  const std::size_t n = sb.size();
  for (std::size_t x = 0; x < 3; ++x) {
    MatrixQ G(n, n), D = dual.module.eta()[x], M = mult.module.eta()[x];
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) G.at(a, b) = pairing(sb.monos[a], sb.monos[b]);
    CHECK(G * D == M.transpose() * G);
  }
}

TEST_CASE("KR family for sl2") {
  auto ctx = sl2_ctx();
  for (int r = 1; r <= 3; ++r) {
    GradedModule gm = kr_module(ctx, r);
    std::vector<std::size_t> expect;
    for (int s = 0; s < r; ++s) expect.push_back(2 * s + 1);
    CHECK(gm.report.per_degree == expect);
    CHECK(gm.report.total_dim == static_cast<std::size_t>(r * r));
    expect_passes_verify(gm.module);
    // the quotient lands in M2: images of x⊗y - y⊗x vanish
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        CHECK(MatrixQ::commutator(gm.module.eta()[i], gm.module.eta()[j]).is_zero());
    // indecomposable: one-dimensional endomorphism algebra
    CHECK(hom_module_space(gm.module, gm.module).dim() == 1);
  }
}

TEST_CASE("KR eta sends highest tensor powers up the chain") {
  auto ctx = sl2_ctx();
  GradedModule gm = kr_module(ctx, 3);
  // locate the coordinates of e^{⊗s}: the orbit spans were built from them
  const PairModule& m = gm.module;
  // degree offsets: 0 -> [0,1), 1 -> [1,4), 2 -> [4,9)
  // act by eta(e) on the degree-1 vector e and check the image is nonzero of degree 2
  VecQ v(m.dim());
  // find the within-degree-1 coordinate representing e ⊗ (unit of T^0)
  // the degree-1 orbit is all of sl2, canonical basis order (e, h, f)
  v[1] = Rational(1);  // e
  VecQ img = m.eta()[0].apply(v);
  bool nonzero_in_degree2 = false;
  for (std::size_t i = 0; i < m.dim(); ++i)
    if (!img[i].is_zero()) {
      CHECK(gm.coord_degree[i] == 2);
      nonzero_in_degree2 = true;
    }
  CHECK(nonzero_in_degree2);
}

TEST_CASE("KR for sl3 at r = 2") {
  auto ctx = make_context(classical_algebra(ClassicalFamily::sl, 3));
  GradedModule gm = kr_module(ctx, 2);
  CHECK(gm.report.per_degree == std::vector<std::size_t>{1, 8});
  CHECK(hom_module_space(gm.module, gm.module).dim() == 1);
}

TEST_CASE("kr_module requires triangular data") {
  auto ctx = make_context(classical_algebra(ClassicalFamily::so, 4));
  CHECK_THROWS_WITH_AS(kr_module(ctx, 2), doctest::Contains("NO_TRIANGULAR_DATA"), Error);
}

TEST_CASE("Kostant module for so(3)") {
  auto so3 = classical_algebra(ClassicalFamily::so, 3);
  auto ctx = make_context(so3);
  Rep nat(so3, detail::so_basis(3).mats);
  KostantModule km = kostant_module(ctx, nat);
  CHECK(km.graded.report.per_degree == std::vector<std::size_t>{1, 3, 3, 1});
  expect_passes_verify(km.graded.module);

  // phi : g -> Lambda^2 V is a linear isomorphism
  MatrixQ phi_mat(3, 3);
  for (std::size_t i = 0; i < 3; ++i) phi_mat.set_col(i, km.phi[i]);
  CHECK(is_invertible(phi_mat));

  // eta(x) eta(y) lands in Lambda^{>=4} = 0 from Lambda^0
  const PairModule& m = km.graded.module;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK((m.eta()[i] * m.eta()[j]).is_zero());
}

TEST_CASE("Kostant commutation holds on all of Lambda V for so(4)") {
  auto so4 = classical_algebra(ClassicalFamily::so, 4);
  auto ctx = make_context(so4);
  Rep nat(so4, detail::so_basis(4).mats);
  KostantModule km = kostant_module(ctx, nat);  // constructor verifies [eta, eta] = 0
  CHECK(km.graded.report.total_dim == 16);
  expect_passes_verify(km.graded.module);
  // explicit re-check including the top component
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j)
      CHECK(MatrixQ::commutator(km.graded.module.eta()[i], km.graded.module.eta()[j])
                .is_zero());
}

TEST_CASE("Kostant dual: degree-lowering eta, zero on Lambda^0 ⊕ Lambda^1") {
  auto so3 = classical_algebra(ClassicalFamily::so, 3);
  auto ctx = make_context(so3);
  Rep nat(so3, detail::so_basis(3).mats);
  KostantModule kd = kostant_dual_module(ctx, nat);
  const PairModule& m = kd.graded.module;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t col = 0; col < m.dim(); ++col) {
      if (kd.graded.coord_degree[col] <= 1) CHECK(vec_is_zero(m.eta()[i].col(col)));
      for (std::size_t row = 0; row < m.dim(); ++row)
        if (!m.eta()[i].at(row, col).is_zero())
          CHECK(kd.graded.coord_degree[row] == kd.graded.coord_degree[col] - 2);
    }
}

TEST_CASE("Kostant dual is the Gram transpose on so(3), B = I") {
  auto so3 = classical_algebra(ClassicalFamily::so, 3);
  auto ctx = make_context(so3);
  Rep nat(so3, detail::so_basis(3).mats);
  KostantModule km = kostant_module(ctx, nat);
  KostantModule kd = kostant_dual_module(ctx, nat);
  // with B = I the Gram form on subsets is the identity, so eta* = eta^T
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(kd.graded.module.eta()[i] == km.graded.module.eta()[i].transpose());
}

TEST_CASE("Kostant dual agrees with the matrix dual up to an invertible intertwiner") {
  for (int n : {3, 4}) {
    auto so_n = classical_algebra(ClassicalFamily::so, n);
    auto ctx = make_context(so_n);
    Rep nat(so_n, detail::so_basis(n).mats);
    KostantModule km = kostant_module(ctx, nat);
    KostantModule kd = kostant_dual_module(ctx, nat);
    auto iso = find_isomorphism(kd.graded.module, dual_module(km.graded.module));
    CHECK(iso.intertwiner.has_value());
  }
}

TEST_CASE("even and odd Kostant families") {
  auto so3 = classical_algebra(ClassicalFamily::so, 3);
  auto ctx = make_context(so3);
  Rep nat(so3, detail::so_basis(3).mats);
  KostantModule km = kostant_module(ctx, nat);

  GradedModule even = even_odd_submodule(km.graded, 0, 0, /*ascending=*/true);
  CHECK(even.report.total_dim == 4);  // Lambda^0 ⊕ Lambda^2
  CHECK(hom_module_space(even.module, even.module).dim() == 1);

  GradedModule odd = even_odd_submodule(km.graded, 1, 0, /*ascending=*/true);
  CHECK(odd.report.total_dim == 4);  // Lambda^1 ⊕ Lambda^3
  CHECK(hom_module_space(odd.module, odd.module).dim() == 1);

  // dual families descend
  KostantModule kd = kostant_dual_module(ctx, nat);
  GradedModule even_desc = even_odd_submodule(kd.graded, 0, 1, /*ascending=*/false);
  CHECK(even_desc.report.total_dim == 4);

  // ascending selection of a descending module is not closed
  CHECK_THROWS_WITH_AS(even_odd_submodule(kd.graded, 0, 1, /*ascending=*/true),
                       doctest::Contains("NOT_CLOSED"), Error);
}

TEST_CASE("tensor-ideal modules recover their ideal as the kernel of eta_T") {
  auto ctx = sl2_ctx();
  // module quotiented by the ideal generated by ker tau_3 at N = 3
  IdealSpec spec;
  spec.flavor = IdealSpec::Flavor::Tensor;
  for (const TensorPoly& z : ctx->ker_tau_polys(3)) spec.tensor_generators.push_back(z);
  GradedModule gm = ideal_module_tensor(ctx, spec, 3);
  const PairModule& m = gm.module;
  const std::size_t n = m.dim();
  // per degree r <= N-1: {z in T^r : eta^{odot r}(z) = 0} equals the ideal piece
  for (int r = 1; r <= 2; ++r) {
    std::uint64_t dr = 1;
    for (int q = 0; q < r; ++q) dr *= 3;
    MatrixQ rows(dr, n * n);
    for (std::uint64_t w = 0; w < dr; ++w) {
      TensorPoly mono(r, 3);
      mono.add(w, Rational(1));
      rows.set_row(w, detail::odot_eval(m.eta(), mono, n).vec());
    }
    Subspace realized_kernel = kernel_basis(rows.transpose());
    // the ideal has nothing in degrees 1 and 2 here
    CHECK(realized_kernel.dim() == 0);
  }
  // and at degree 3 the realized kernel is exactly ker tau_3 (the generators)
  {
    MatrixQ rows(27, n * n);
    for (std::uint64_t w = 0; w < 27; ++w) {
      TensorPoly mono(3, 3);
      mono.add(w, Rational(1));
      rows.set_row(w, detail::odot_eval(m.eta(), mono, n).vec());
    }
    Subspace realized_kernel = kernel_basis(rows.transpose());
    CHECK(realized_kernel == ctx->ker_tau_tensor(3));
  }
}

TEST_CASE("Kostant over sl2 as so(3): adjoint rep with the Killing form") {
  auto ctx = sl2_ctx();
  Rep ad = adjoint_rep(ctx->algebra_ptr());
  KostantModule km = kostant_module(ctx, ad);  // commutation verified inside
  CHECK(km.graded.report.per_degree == std::vector<std::size_t>{1, 3, 3, 1});
  CHECK(km.form != MatrixQ::identity(3));  // normalized Killing form, not I
  expect_passes_verify(km.graded.module);
  KostantModule kd = kostant_dual_module(ctx, ad);
  auto iso = find_isomorphism(kd.graded.module, dual_module(km.graded.module));
  CHECK(iso.intertwiner.has_value());
}
