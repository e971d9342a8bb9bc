#include <doctest.h>

#include "sskit/forms.hpp"
#include "sskit/nerve.hpp"

#include <cmath>

using namespace sskit;

namespace {

AlgebraPtr algebra(const char* name) { return std::make_shared<const LieAlgebra>(LieAlgebra::builtin(name)); }

}  // namespace

TEST_CASE("simplicial delta of functions") {
  auto alg = algebra("so3");
  auto nv = std::make_shared<const NerveModel>(alg, 3);
  Rng rng(1);
  Evaluator c0 = [](const Point&, const std::vector<Vec>&) { return 2.5; };
  Evaluator f1 = [](const Point& x, const std::vector<Vec>&) { return x[0].trace(); };
  for (int s = 0; s < 5; ++s) {
    const Point x1 = nv->random_point(1, rng), x2 = nv->random_point(2, rng);
    CHECK(simplicial_delta(*nv, 1, c0, x1, {}) == 0.0);
    // f(h) - f(gh) + f(g), computed by hand.
    const double want = x2[1].trace() - (x2[0] * x2[1]).trace() + x2[0].trace();
    CHECK(simplicial_delta(*nv, 2, f1, x2, {}) == doctest::Approx(want).epsilon(1e-13));
    const Point x3 = nv->random_point(3, rng);
    CHECK(std::abs(delta_evaluator(nv, 3, delta_evaluator(nv, 2, f1))(x3, {})) <= 1e-10);
  }
}

TEST_CASE("delta Omega vanishes on the nerve") {
  auto alg = algebra("so3");
  auto nv = std::make_shared<const NerveModel>(alg, 3);
  const ShiftedForm om = omega_bullet(nv);
  const Evaluator dom = delta_evaluator(nv, 3, om.levels.at(2));
  Rng rng(2);
  for (int s = 0; s < 20; ++s) {
    const Point x = nv->random_point(3, rng);
    const Vec v = nv->random_tangent(3, x, rng), w = nv->random_tangent(3, x, rng);
    CHECK(std::abs(dom(x, {v, w})) <= 1e-12);
  }
}

TEST_CASE("de Rham d of the Maurer-Cartan form") {
  auto alg = algebra("so3");
  auto nv = std::make_shared<const NerveModel>(alg, 2);
  Rng rng(3);
  for (int k = 0; k < 3; ++k) {
    // k-th component of theta^l on G; d theta^l(u, v) = -[u, v].
    Evaluator th = [k](const Point&, const std::vector<Vec>& v) { return v[0](k); };
    const Point g = nv->random_point(1, rng);
    const Vec u = rng.normal_vec(3), v = rng.normal_vec(3);
    CHECK(de_rham_d(*nv, 1, th, g, {u, v}) == doctest::Approx(-alg->bracket(u, v)(k)).epsilon(1e-8));
  }
}

TEST_CASE("finite-difference d converges at second order") {
  auto alg = algebra("so3");
  auto nv = std::make_shared<const NerveModel>(alg, 2);
  Rng rng(4);
  // a = tr(g) theta^l_0; da(u, v) = tr(g u) v_0 - tr(g v) u_0 - tr(g) [u, v]_0.
  Evaluator a = [](const Point& x, const std::vector<Vec>& v) { return x[0].trace() * v[0](0); };
  const Point g = nv->random_point(1, rng);
  const Vec u = rng.normal_vec(3), v = rng.normal_vec(3);
  const Mat& x = g[0];
  const double exact = (x * alg->rep(u)).trace() * v(0) - (x * alg->rep(v)).trace() * u(0) -
                       x.trace() * alg->bracket(u, v)(0);
  const double e1 = std::abs(de_rham_d(*nv, 1, a, g, {u, v}, {1e-2}) - exact);
  const double e2 = std::abs(de_rham_d(*nv, 1, a, g, {u, v}, {5e-3}) - exact);
  CHECK(e1 > 1e-10);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
  CHECK(fitted_order({100.0, 200.0}, {e1, e2}) == doctest::Approx(2.0).epsilon(0.2));

  Evaluator c = [](const Point&, const std::vector<Vec>&) { return 1.0; };
  CHECK(de_rham_d(*nv, 1, c, g, {u}) == 0.0);
}

TEST_CASE("Omega_. is closed and normalized") {
  for (const char* name : {"so3", "aff1-double"}) {
    CAPTURE(name);
    auto nv = std::make_shared<const NerveModel>(algebra(name), 4);
    const ShiftedForm om = omega_bullet(nv);
    const ClosedReport cr = is_closed(om, 10, 5);
    CHECK(cr.max_exact <= 1e-12);
    CHECK(cr.max_fd <= 1e-6);
    CHECK(is_normalized(om, 10, 6) <= 1e-12);
    CHECK(alternation_residual(om, 10, 7) <= 1e-10);
  }
}

TEST_CASE("zero forms") {
  auto nv = std::make_shared<const NerveModel>(algebra("so3"), 3);
  const ShiftedForm z = zero_form(nv, 2, 2);
  const ShiftedForm dz = total_D(z);
  Rng rng(1);
  for (int l = 0; l <= 3; ++l) {
    const Point x = nv->random_point(l, rng);
    std::vector<Vec> v;
    for (int a = 0; a < dz.degree(l); ++a) v.push_back(nv->random_tangent(l, x, rng));
    CHECK(dz.eval(l, x, v) == 0.0);
  }
  CHECK(is_normalized(z, 3, 1) == 0.0);
  CHECK_THROWS_AS(z.eval(2, nv->base_point(2), {}), std::invalid_argument);
}

TEST_CASE("form algebra") {
  auto nv = std::make_shared<const NerveModel>(algebra("so3"), 3);
  const ShiftedForm om = omega_bullet(nv);
  const ShiftedForm twice = add(om, om);
  const ShiftedForm zero = add(om, om, -1.0);
  Rng rng(2);
  const Point x = nv->random_point(2, rng);
  const Vec v = nv->random_tangent(2, x, rng), w = nv->random_tangent(2, x, rng);
  CHECK(twice.eval(2, x, {v, w}) == doctest::Approx(2.0 * om.eval(2, x, {v, w})));
  CHECK(scale(om, 3.0).eval(2, x, {v, w}) == doctest::Approx(3.0 * om.eval(2, x, {v, w})));
  CHECK(zero.eval(2, x, {v, w}) == 0.0);
  CHECK_THROWS(add(om, zero_form(nv, 1, 2)));
  const ShiftedForm pulled = pullback(om, std::make_shared<const IdentityMap>(nv));
  CHECK(pulled.eval(2, x, {v, w}) == om.eval(2, x, {v, w}));
}

TEST_CASE("D squares to zero on a random gauge form") {
  auto nv = std::make_shared<const NerveModel>(algebra("so3"), 4);
  Rng rng(9);
  const ShiftedForm phi = random_nerve_gauge(nv, rng);
  ShiftedForm dphi = total_D(phi);
  dphi.m += 1;
  dphi.k -= 1;
  const ClosedReport cr = is_closed(dphi, 5, 3);
  CHECK(cr.max_exact <= 1e-10);
  CHECK(cr.max_fd <= 1e-4);
}

TEST_CASE("Morita check of a form against itself") {
  auto nv = std::make_shared<const NerveModel>(algebra("so3"), 3);
  auto id = std::make_shared<const IdentityMap>(nv);
  const ShiftedForm om = omega_bullet(nv);
  const MoritaReport r = check_morita(om, om, id, id, zero_form(nv, 1, 2), 5, 1);
  CHECK(r.max_exact == 0.0);
  CHECK(r.max_fd == 0.0);
}

TEST_CASE("transgression of dx on the line") {
  auto ab = algebra("abelian-1");
  auto nv = std::make_shared<const NerveModel>(ab, 2);
  auto paths = std::make_shared<const PathSpaceModel>(nv, 30, PathKind::Based);
  Evaluator dx = [](const Point&, const std::vector<Vec>& v) { return v[0](0); };
  const Evaluator tr = transgress_evaluator(nv, 1, dx, 30);
  Rng rng(3);
  for (int s = 0; s < 5; ++s) {
    const Point g = paths->random_point(1, rng);
    CHECK((paths->sample(1, g, 0)[0] - ab->identity()).norm() <= 1e-14);
    CHECK(tr(g, {}) == doctest::Approx(ab->log(paths->sample(1, g, 30)[0])(0)).epsilon(1e-12));
  }
}

TEST_CASE("transgression of a constant 2-form with constant tangents") {
  auto ab = algebra("abelian-2");
  auto nv = std::make_shared<const NerveModel>(ab, 2);
  const int r = 24;
  auto paths = std::make_shared<const PathSpaceModel>(nv, r, PathKind::Free);
  Evaluator area = [](const Point&, const std::vector<Vec>& v) { return v[0](0) * v[1](1) - v[0](1) * v[1](0); };
  const Evaluator tr = transgress_evaluator(nv, 1, area, r);
  Rng rng(5);
  for (int s = 0; s < 5; ++s) {
    const Point g = paths->random_point(1, rng);
    const Vec c = rng.normal_vec(2);
    Vec v(2 * (r + 1));
    for (int j = 0; j <= r; ++j) v.segment(2 * j, 2) = c;
    // int area(gamma', c) dt = area(gamma(1) - gamma(0), c).
    const Vec dg = ab->log(paths->sample(1, g, r)[0]) - ab->log(paths->sample(1, g, 0)[0]);
    CHECK(tr(g, {v}) == doctest::Approx(dg(0) * c(1) - dg(1) * c(0)).epsilon(1e-12));
  }
}

TEST_CASE("transgression identities on abelian fixtures") {
  auto ab = algebra("abelian-2");
  auto nv = std::make_shared<const NerveModel>(ab, 3);
  auto paths = std::make_shared<const PathSpaceModel>(nv, 60, PathKind::Free);
  ShiftedForm area = zero_form(nv, 1, 2);
  area.levels[1] = [](const Point&, const std::vector<Vec>& v) { return v[0](0) * v[1](1) - v[0](1) * v[1](0); };
  const TransgressionReport t = transgression_identities(area, paths, 5, 11);
  CHECK(t.d_identity <= 1e-8);
  CHECK(t.delta_identity <= 1e-10);
}

TEST_CASE("transgression quadrature order on a straight so3 path") {
  auto so3 = algebra("so3");
  auto nv = std::make_shared<const NerveModel>(so3, 2);
  Evaluator theta = [so3](const Point&, const std::vector<Vec>& v) { return so3->cartan_3form(v[0], v[1], v[2]); };
  Rng rng(6);
  const Vec a = so3->random_vector(rng, 0.5), u0 = rng.normal_vec(3), u1 = rng.normal_vec(3), v0 = rng.normal_vec(3);
  std::vector<double> grids = {8, 16, 32}, err;
  for (double rr : grids) {
    const int r = int(rr);
    Point gamma;
    Vec uu(3 * (r + 1)), vv(3 * (r + 1));
    for (int j = 0; j <= r; ++j) {
      const double t = double(j) / r;
      gamma.push_back(so3->exp(a * t));
      uu.segment(3 * j, 3) = u0 + t * t * u1;  // t^2 makes the cell average inexact
      vv.segment(3 * j, 3) = v0;
    }
    // int <a, [u0 + t^2 u1, v0]> dt = <a, [u0 + u1/3, v0]>.
    const double want = so3->pair(a, so3->bracket(u0 + u1 / 3.0, v0));
    err.push_back(std::abs(transgress_evaluator(nv, 1, theta, r)(gamma, {uu, vv}) - want));
  }
  CHECK(fitted_order(grids, err) >= 1.9);
}

TEST_CASE("fitted order") {
  CHECK(fitted_order({10, 20, 40}, {1.0, 0.25, 0.0625}) == doctest::Approx(2.0));
  CHECK(fitted_order({10, 20}, {1.0, 0.5}) == doctest::Approx(1.0));
}
