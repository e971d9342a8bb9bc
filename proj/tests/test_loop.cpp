#include <doctest.h>

#include "sskit/loop.hpp"

#include <cmath>

using namespace sskit;

namespace {

AlgebraPtr algebra(const char* name) { return std::make_shared<const LieAlgebra>(LieAlgebra::builtin(name)); }

Vec samples(int cells, double (*f)(double)) {
  Vec v(cells + 1);
  for (int j = 0; j <= cells; ++j) v(j) = f(double(j) / cells);
  return v;
}

}  // namespace

TEST_CASE("loop faces on constant data") {
  auto lp = std::make_shared<const LoopModel>(algebra("so3"), 12);
  const Point e2 = lp->base_point(2);
  for (int i = 0; i <= 2; ++i) {
    const Point p = lp->face(2, i, e2);
    REQUIRE(p.size() == 13);
    for (const Mat& g : p) CHECK((g - Mat::Identity(3, 3)).norm() == 0.0);
  }
  Rng rng(1);
  const Point tau = lp->random_point(2, rng);
  CHECK((lp->face(2, 2, tau)[0] - Mat::Identity(3, 3)).norm() <= 1e-14);
}

TEST_CASE("loop model simplicial identities") {
  auto lp = std::make_shared<const LoopModel>(algebra("so3"), 12);
  const IdentityResidual r = simplicial_identity_residual(*lp, 2, 3);
  CHECK(r.points <= 1e-12);
  CHECK(r.tangents <= 1e-12);
  CHECK(r.constraints <= 1e-12);
  Rng rng(2);
  CHECK(lp->gluing_residual(lp->random_point(3, rng)) <= 1e-12);
}

TEST_CASE("path degeneracies") {
  const int r = 12;
  auto alg = algebra("so3");
  auto lp = std::make_shared<const LoopModel>(alg, r);
  Rng rng(4);
  const Point g = lp->random_point(1, rng);
  const Point s1 = lp->degeneracy(1, 1, g);
  for (int k = 0; k <= r; ++k) CHECK((s1[k] - alg->identity()).norm() == 0.0);
  const Vec u = lp->random_tangent(1, g, rng);
  const Vec ts0 = lp->tangent_degeneracy(1, 0, g, u);
  for (int k = r; k <= 2 * r; ++k) CHECK((ts0.segment(3 * k, 3) - u.tail(3)).norm() == 0.0);
}

TEST_CASE("Segal form on the abelian line") {
  auto alg = algebra("abelian-1");
  auto run = [&](int cells) {
    const Vec a = samples(cells, [](double t) { return std::sin(2 * M_PI * t); });
    const Vec b = samples(cells, [](double t) { return std::cos(2 * M_PI * t) - 1.0; });
    return std::abs(segal_form(*alg, cells, a, b) - M_PI);
  };
  const double e1 = run(36), e2 = run(72);
  CHECK(e1 <= 0.1);
  CHECK(fitted_order({36, 72}, {e1, e2}) >= 1.9);

  Rng rng(5);
  const Vec a = smooth_tangent_samples(36, 1, PathKind::Loop, rng);
  CHECK(std::abs(segal_form(*alg, 36, a, a)) <= 1e-12);
}

TEST_CASE("omega^P and alpha^P on the abelian line") {
  auto alg = algebra("abelian-1");
  auto run = [&](int cells) {
    const Vec u = samples(cells, [](double t) { return t; });
    const Vec v = samples(cells, [](double t) { return t * t; });
    return std::abs(omega_p(*alg, cells, u, v) + 1.0 / 6.0);
  };
  const double e1 = run(36), e2 = run(72);
  CHECK(e1 <= 1e-3);
  CHECK(e1 / std::max(e2, 1e-300) >= 3.5);

  // Straight path gamma(t) = exp(t a): alpha^P(u) = int <a, u-hat>.
  const int cells = 24;
  Point gamma;
  for (int j = 0; j <= cells; ++j) gamma.push_back(alg->exp(Vec::Constant(1, 0.7 * j / cells)));
  const Vec u = samples(cells, [](double t) { return t; });
  CHECK(alpha_p(*alg, gamma, u) == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("omega^P restricted to loops is the Segal form") {
  auto alg = algebra("so3");
  Rng rng(6);
  std::vector<double> grids = {36, 72}, err;
  for (double rr : grids) {
    const int cells = int(rr);
    Rng fix(7);
    const Vec a = smooth_tangent_samples(cells, 3, PathKind::Loop, fix);
    const Vec b = smooth_tangent_samples(cells, 3, PathKind::Loop, fix);
    err.push_back(std::abs(omega_p(*alg, cells, a, b) - segal_form(*alg, cells, a, b)));
  }
  CHECK((err[0] <= 1e-12 || fitted_order(grids, err) >= 1.9));
}

TEST_CASE("ev maps") {
  auto alg = algebra("so3");
  auto lp = std::make_shared<const LoopModel>(alg, 12);
  auto nv = std::make_shared<const NerveModel>(alg, 4);
  const EvMap ev(lp, nv);
  const Point e = ev.map(2, lp->base_point(2));
  REQUIRE(e.size() == 2);
  for (const Mat& g : e) CHECK((g - alg->identity()).norm() == 0.0);
  const IdentityResidual r = map_commutation_residual(ev, 2, 8);
  CHECK(r.points <= 1e-12);
  CHECK(r.tangents <= 1e-12);
}

TEST_CASE("Segal form is multiplicative and normalized") {
  for (const char* name : {"abelian-2", "so3"}) {
    CAPTURE(name);
    auto lp = std::make_shared<const LoopModel>(algebra(name), 36);
    const ShiftedForm om = segal_bullet(lp);
    CHECK(is_closed(om, 3, 9).max_exact <= 1e-9);
    CHECK(is_normalized(om, 3, 10) <= 1e-10);
  }
}

TEST_CASE("Morita identities on the abelian plane") {
  auto alg = algebra("abelian-2");
  auto lp = std::make_shared<const LoopModel>(alg, 36);
  auto nv = std::make_shared<const NerveModel>(alg, 4);
  const MoritaReport r = check_morita(segal_bullet(lp), scaled_omega_bullet(nv, 0.5),
                                      std::make_shared<const IdentityMap>(lp), std::make_shared<const EvMap>(lp, nv),
                                      omega_p_bullet(lp), 3, 11);
  CHECK(r.max_exact <= 1e-8);
  CHECK(r.max_fd <= 1e-8);
  Rng rng(12);
  const Point g = lp->random_point(1, rng);
  CHECK(std::abs(brylinski_residual(lp, g, lp->random_tangent(1, g, rng), lp->random_tangent(1, g, rng))) <= 1e-8);
}

TEST_CASE("zero tangents give zero residuals") {
  auto alg = algebra("so3");
  auto lp = std::make_shared<const LoopModel>(alg, 12);
  Rng rng(13);
  const Point g = lp->random_point(1, rng);
  const Vec z = Vec::Zero(lp->tangent_dim(1));
  CHECK(brylinski_residual(lp, g, z, z) == 0.0);
}
