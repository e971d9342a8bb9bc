#include <doctest.h>

#include "sskit/nerve.hpp"

#include <cmath>

using namespace sskit;

namespace {

AlgebraPtr algebra(const char* name) { return std::make_shared<const LieAlgebra>(LieAlgebra::builtin(name)); }

Vec stack(const Vec& a, const Vec& b) {
  Vec v(a.size() + b.size());
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("nerve faces and degeneracies") {
  auto alg = algebra("so3");
  const NerveModel nv(alg, 4);
  Rng rng(1);
  const Point x = nv.random_point(2, rng);
  CHECK((nv.face(2, 1, x)[0] - x[0] * x[1]).norm() < 1e-14);
  const Point g = nv.random_point(1, rng);
  for (int i = 0; i <= 1; ++i) CHECK((nv.face(2, i, nv.degeneracy(1, 0, g))[0] - g[0]).norm() < 1e-14);
  const IdentityResidual r = simplicial_identity_residual(nv, 5, 2);
  CHECK(r.points <= 1e-12);
  CHECK(r.tangents <= 1e-12);
}

TEST_CASE("tangent of the product face") {
  auto alg = algebra("sl2c-iwasawa");
  const NerveModel nv(alg, 3);
  Rng rng(2);
  const Point x = nv.random_point(2, rng);
  const Vec v = rng.normal_vec(alg->dim());
  const Vec got = nv.tangent_face(2, 1, x, stack(v, Vec::Zero(alg->dim())));
  // Product rule oracle: d/de (g exp(e v)) h = g h (h^{-1} v h).
  const Vec want = alg->coords(x[1].inverse() * alg->rep(v) * x[1]);
  CHECK((got - want).norm() < 1e-10);
  CHECK((got - alg->adjoint(x[1].inverse(), v)).norm() < 1e-10);
}

TEST_CASE("Omega at the identity and on degenerate vectors") {
  auto alg = algebra("aff1-double");
  const NerveModel nv(alg, 3);
  const int n = alg->dim();
  Rng rng(3);
  const Vec v = rng.normal_vec(n), w = rng.normal_vec(n);
  const Point e = nv.base_point(2);
  const Vec z = Vec::Zero(n);
  CHECK(omega_2form(*alg, e, stack(v, z), stack(z, w)) == doctest::Approx(alg->pair(v, w)));
  CHECK(omega_2form(*alg, e, stack(z, v), stack(z, w)) == 0.0);
  for (int s = 0; s < 10; ++s) {
    const Point g = nv.random_point(1, rng);
    const Vec a = rng.normal_vec(n), b = rng.normal_vec(n);
    for (int j = 0; j <= 1; ++j) {
      const Point x = nv.degeneracy(1, j, g);
      const double val = omega_2form(*alg, x, nv.tangent_degeneracy(1, j, g, a), nv.tangent_degeneracy(1, j, g, b));
      CHECK(std::abs(val) <= 1e-12);
    }
    const Point x = nv.random_point(2, rng);
    const Vec p = rng.normal_vec(2 * n), q = rng.normal_vec(2 * n);
    CHECK(omega_2form(*alg, x, p, q) == doctest::Approx(omega_2form_pullback(nv, x, p, q)).epsilon(1e-12));
  }
}

TEST_CASE("van Est image of Omega") {
  auto so3 = algebra("so3");
  CHECK((van_est_pairing(NerveModel(so3, 2)) + so3->pairing()).norm() <= 1e-12);
  auto ab = algebra("abelian-3");
  CHECK((van_est_pairing(NerveModel(ab, 2)) + Mat::Identity(3, 3)).norm() <= 1e-12);
}

TEST_CASE("Theta is alternating and left invariant") {
  auto alg = algebra("so3");
  auto nv = std::make_shared<const NerveModel>(alg, 3);
  const ShiftedForm om = omega_bullet(nv);
  Rng rng(4);
  const Vec u = rng.normal_vec(3), v = rng.normal_vec(3), w = rng.normal_vec(3);
  const double at_e = om.eval(1, nv->base_point(1), {u, v, w});
  CHECK(at_e == doctest::Approx(-theta_3form(*alg, u, v, w)));
  for (int s = 0; s < 5; ++s) CHECK(om.eval(1, nv->random_point(1, rng), {u, v, w}) == at_e);
  CHECK(theta_3form(*alg, u, u, w) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("Omega_. on every built-in quadratic algebra") {
  for (const char* name : {"so3", "abelian-2", "aff1-double", "sl2c-iwasawa"}) {
    CAPTURE(name);
    auto nv = std::make_shared<const NerveModel>(algebra(name), 4);
    const ShiftedForm om = omega_bullet(nv);
    const ClosedReport cr = is_closed(om, 5, 1, FdConfig{3e-5});
    CHECK(cr.max_exact <= 1e-12);
    CHECK(cr.max_fd <= 1e-6);
    CHECK(is_normalized(om, 5, 2) <= 1e-12);
  }
}
