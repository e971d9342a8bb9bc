#include <doctest.h>

#include "sskit/loop.hpp"
#include "sskit/manin.hpp"
#include "sskit/nerve.hpp"
#include "sskit/tangent.hpp"

#include <cmath>

using namespace sskit;

namespace {

AlgebraPtr algebra(const char* name) { return std::make_shared<const LieAlgebra>(LieAlgebra::builtin(name)); }

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

const PairingBlock& block(const NondegeneracyReport& r, int l) {
  for (const auto& b : r.blocks)
    if (b.l == l) return b;
  throw std::out_of_range("no pairing block");
}

}  // namespace

TEST_CASE("nerve tangent complex is g in degree 1") {
  auto alg = algebra("so3");
  const NerveModel nv(alg, 4);
  for (TangentVariant var : {TangentVariant::Kernel, TangentVariant::Quotient}) {
    const TangentComplex tc = tangent_complex(nv, var);
    CHECK(tc.complex.dims == std::vector<int>{0, 3, 0, 0, 0});
    CHECK(homology(tc.complex).dims == std::vector<int>{0, 3, 0, 0, 0});
  }
  const RankFormulaReport rf = rank_formula_check(nv);
  CHECK(rf.ok);
  REQUIRE(rf.kernel_dims.size() >= 3);
  // Level 2: 2 dim g - (2 dim g - 0) = 0.
  CHECK(rf.kernel_dims[2] == 0);
  CHECK(rf.formula_dims[2] == 0);
  CHECK(rf.kernel_dims[1] == rf.space_dims[1] - rf.space_dims[0]);
}

TEST_CASE("loop tangent complex") {
  auto alg = algebra("so3");
  const int r = 12;
  const LoopModel lp(alg, r);
  const TangentComplex tc = tangent_complex(lp);
  // T_1 = based paths (R samples after u(0) = 0), T_2 = loops vanishing on the outer thirds.
  CHECK(tc.complex.dims[1] == 3 * r);
  CHECK(tc.complex.dims[2] == 3 * (r - 1));  // loops supported on the middle third
  CHECK(tc.complex.dims[3] == 0);
  const HomologyBasis hb = homology(tc.complex);
  CHECK(hb.dims == std::vector<int>{0, 3, 0, 0});
  const TangentComplex tq = tangent_complex(lp, TangentVariant::Quotient);
  CHECK(tq.complex.dims == tc.complex.dims);
  CHECK(homology(tq.complex).dims == hb.dims);
  CHECK(rank_formula_check(lp).ok);
}

TEST_CASE("Manin tangent complex") {
  auto t = std::make_shared<const ManinTriple>(ManinTriple::builtin("aff1-double"));
  const ManinModel m(t);
  const TangentComplex tc = tangent_complex(m);
  CHECK(tc.complex.dims == std::vector<int>{0, t->dim(), 0});
  CHECK(rank_formula_check(m).ok);
}

TEST_CASE("rank formula on random linear groupoids") {
  Rng rng(17);
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + k % 3;
    const SimplicialVectorSpace v = gamma_construction(random_chain_complex(rng, n, 3), n + 2, &rng);
    const RankFormulaReport r = rank_formula_check(v);
    CHECK(r.ok);
    CHECK(r.kernel_dims == r.formula_dims);
  }
  CHECK(rank_formula({2, 5, 8}, 1) == 3);
}

TEST_CASE("IM form values") {
  SUBCASE("nerve: twice the pairing") {
    for (const char* name : {"so3", "aff1-double", "sl2c-iwasawa"}) {
      auto alg = algebra(name);
      auto nv = std::make_shared<const NerveModel>(alg, 3);
      const Mat e = tangent_complex(*nv).embed[1];
      CHECK(max_abs(im_matrix(omega_bullet(nv), 1, e, e) - 2.0 * e.transpose() * alg->pairing() * e) <= 1e-12);
    }
  }
  SUBCASE("loop: pairing of endpoints") {
    auto alg = algebra("so3");
    const int r = 12;
    auto lp = std::make_shared<const LoopModel>(alg, r);
    const ShiftedForm om = segal_bullet(lp);
    Rng rng(4);
    for (int s = 0; s < 5; ++s) {
      const Point e = lp->base_point(1);
      const Vec u = lp->random_tangent(1, e, rng), v = lp->random_tangent(1, e, rng);
      CHECK(im_form(om, 1, u, v) == doctest::Approx(alg->pair(u.tail(3), v.tail(3))).epsilon(1e-10));
    }
  }
  SUBCASE("Manin: pullback of twice the pairing") {
    auto t = std::make_shared<const ManinTriple>(ManinTriple::builtin("aff1-double"));
    auto m = std::make_shared<const ManinModel>(t);
    const Mat e = tangent_complex(*m).embed[1];
    const Mat lam = im_matrix(bar_omega(m), 1, e, e);
    for (int i = 0; i < e.cols(); ++i)
      for (int j = 0; j < e.cols(); ++j) {
        const Vec v = e.col(i), w = e.col(j);
        const Vec sv = t->minus * v.head(t->n_minus()) + t->plus * v.tail(t->n_plus());
        const Vec sw = t->minus * w.head(t->n_minus()) + t->plus * w.tail(t->n_plus());
        CHECK(lam(i, j) == doctest::Approx(2.0 * t->alg->pair(sv, sw)).epsilon(1e-10));
      }
  }
}

TEST_CASE("graded antisymmetry of lambda") {
  auto nv = std::make_shared<const NerveModel>(algebra("so3"), 3);
  const ShiftedForm om = omega_bullet(nv);
  Rng rng(3);
  for (int s = 0; s < 5; ++s) {
    const Vec v = rng.normal_vec(3), w = rng.normal_vec(3);
    // m = 2, l = 1: lambda(v, w) = lambda(w, v).
    CHECK(im_form(om, 1, v, w) == doctest::Approx(im_form(om, 1, w, v)).epsilon(1e-12));
  }
}

TEST_CASE("nondegeneracy") {
  auto alg = algebra("so3");
  auto nv = std::make_shared<const NerveModel>(alg, 4);
  const NondegeneracyReport nd = nondegeneracy_check(omega_bullet(nv), 1);
  CHECK(nd.nondegenerate);
  CHECK_FALSE(nd.ill_conditioned);
  // 2P with P = I on so3, on H_1 x H_1.
  const PairingBlock& b = block(nd, 1);
  CHECK(b.pairing.rows() == 3);
  CHECK(b.min_sv == doctest::Approx(2.0));
  CHECK(b.max_sv == doctest::Approx(2.0));

  LieAlgebraSpec s = alg->spec();
  s.pairing = Mat::Zero(3, 3);
  auto flat = std::make_shared<const NerveModel>(std::make_shared<const LieAlgebra>(s), 4);
  CHECK_FALSE(nondegeneracy_check(omega_bullet(flat), 1).nondegenerate);

  auto lp = std::make_shared<const LoopModel>(alg, 12);
  const NondegeneracyReport nl = nondegeneracy_check(segal_bullet(lp), 2);
  CHECK(nl.nondegenerate);
  CHECK(nl.homology_dims[1] == 3);
}

TEST_CASE("gauge moves keep the nondegeneracy verdict") {
  auto nv = std::make_shared<const NerveModel>(algebra("so3"), 4);
  const ShiftedForm om = omega_bullet(nv);
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const ShiftedForm moved = gauge_move(om, random_nerve_gauge(nv, rng));
    const NondegeneracyReport r = nondegeneracy_check(moved, 100 + k);
    CHECK(r.nondegenerate);
    CHECK(block(r, 1).min_sv == doctest::Approx(2.0).epsilon(1e-6));
  }
}

TEST_CASE("IM form properties on the nerve and the loop model") {
  auto nv = std::make_shared<const NerveModel>(algebra("so3"), 4);
  Rng rng(5);
  const ShiftedForm phi = random_nerve_gauge(nv, rng);
  const AppendixEReport r = appendix_e_properties(omega_bullet(nv), &phi, 5, 6);
  CHECK(r.degenerate <= 1e-8);
  CHECK(r.multiplicative <= 1e-8);
  CHECK(r.gauge <= 1e-8);
  CHECK(r.gauge_homotopy <= 1e-8);

  auto lp = std::make_shared<const LoopModel>(algebra("so3"), 12);
  const AppendixEReport rl = appendix_e_properties(segal_bullet(lp), nullptr, 3, 7);
  CHECK(rl.degenerate <= 1e-8);
  CHECK(rl.multiplicative <= 1e-8);
}

TEST_CASE("synthetic multiplicative forms") {
  Rng rng(31);
  int made = 0;
  for (int attempt = 0; attempt < 100 && made < 5; ++attempt) {
    const int m = 1 + attempt % 2;
    auto v = std::make_shared<const SimplicialVectorSpace>(
        gamma_construction(random_chain_complex(rng, m + 1, 3), m + 1, &rng));
    auto model = std::make_shared<const LinearModel>(v);
    ShiftedForm a, phi;
    try {
      a = synthetic_multiplicative_form(model, m, rng);
      phi = synthetic_gauge_form(model, m, rng);
    } catch (const std::exception&) {
      continue;
    }
    ++made;
    CHECK(is_normalized(a, 3, 1) <= 1e-12);
    CHECK(is_closed(a, 3, 2).max_exact <= 1e-10);
    const AppendixEReport r = appendix_e_properties(a, &phi, 5, 3);
    CHECK(r.degenerate <= 1e-8);
    CHECK(r.multiplicative <= 1e-8);
    CHECK(r.gauge <= 1e-8);
    CHECK(r.gauge_homotopy <= 1e-8);
  }
  CHECK(made == 5);
}

TEST_CASE("hypercover checks") {
  auto alg = algebra("so3");
  auto nv = std::make_shared<const NerveModel>(alg, 4);
  const HypercoverReport id = hypercover_tangent_check(IdentityMap(nv), 1);
  CHECK(id.ok);

  auto lp = std::make_shared<const LoopModel>(alg, 12);
  const EvMap ev(lp, nv);
  const HypercoverReport he = hypercover_tangent_check(ev, 2);
  CHECK(he.ok);
  CHECK(he.levels.at(1).surjective);
  CHECK(he.homology_iso);
  CHECK(pairing_transport_residual(ev, segal_bullet(lp), scaled_omega_bullet(nv, 0.5)) <= 1e-8);

  auto t = std::make_shared<const ManinTriple>(ManinTriple::builtin("aff1-double"));
  auto m = std::make_shared<const ManinModel>(t);
  auto nt = std::make_shared<const NerveModel>(t->alg, 3);
  const PhiMap phi(m, nt);
  const HypercoverReport hp = hypercover_tangent_check(phi, 2);
  CHECK(hp.ok);
  CHECK(hp.levels.at(1).surjective);
  CHECK(hp.levels.at(1).injective);
  CHECK(pairing_transport_residual(phi, bar_omega(m), omega_bullet(nt)) <= 1e-8);
}
