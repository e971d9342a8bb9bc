#include <doctest.h>

#include "sskit/manin.hpp"
#include "sskit/tangent.hpp"

#include <cmath>

using namespace sskit;

namespace {

std::shared_ptr<const ManinTriple> triple(const char* name) {
  return std::make_shared<const ManinTriple>(ManinTriple::builtin(name));
}

Mat plus_elem(const ManinTriple& t, Rng& rng, double s = 0.4) { return t.alg->exp(t.plus * rng.normal_vec(t.n_plus(), s)); }
Mat minus_elem(const ManinTriple& t, Rng& rng, double s = 0.4) {
  return t.alg->exp(t.minus * rng.normal_vec(t.n_minus(), s));
}

double gamma_distance(const GammaElement& a, const GammaElement& b) {
  return (a.h2 - b.h2).norm() + (a.a2 - b.a2).norm() + (a.a1 - b.a1).norm() + (a.h1 - b.h1).norm();
}

}  // namespace

TEST_CASE("Manin triple checks") {
  for (const char* name : {"aff1-double", "sl2c-iwasawa", "abelian-4"}) {
    CAPTURE(name);
    const ManinReport r = check_manin(*triple(name));
    CHECK(r.ok);
    CHECK(r.plus_closure <= 1e-12);
    CHECK(r.minus_isotropy <= 1e-12);
  }
  const auto t = triple("aff1-double");
  const ManinReport bad = check_manin(make_triple(t->alg, t->plus, t->plus));
  CHECK_FALSE(bad.ok);
  CHECK(bad.complement_min_sv < 1e-9);
}

TEST_CASE("factorization") {
  for (const char* name : {"aff1-double", "sl2c-iwasawa"}) {
    const auto t = triple(name);
    const Mat e = t->alg->identity();
    const Factorization fe = factorize(*t, e, FactorOrder::MinusPlus);
    CHECK((fe.first - e).norm() <= 1e-12);
    CHECK((fe.second - e).norm() <= 1e-12);
    Rng rng(5);
    for (int s = 0; s < 20; ++s) {
      const Mat a = minus_elem(*t, rng), h = plus_elem(*t, rng);
      const Factorization f = factorize(*t, a * h, FactorOrder::MinusPlus);
      CHECK((f.first - a).norm() <= 1e-9);
      CHECK((f.second - h).norm() <= 1e-9);
      const Factorization r = factorize(*t, h * a, FactorOrder::PlusMinus);
      CHECK((r.first - h).norm() <= 1e-9);
      CHECK((r.second - a).norm() <= 1e-9);
    }
  }
  // The semidirect product factors globally: far along a complete direction.
  const auto t = triple("aff1-double");
  Rng rng(6);
  const Mat a = minus_elem(*t, rng, 3.0), h = plus_elem(*t, rng, 1.5);
  const Factorization f = factorize(*t, a * h, FactorOrder::MinusPlus);
  CHECK((f.first * f.second - a * h).norm() <= 1e-9);
  CHECK((f.first - a).norm() <= 1e-8);
}

TEST_CASE("completing Gamma elements") {
  const auto t = triple("aff1-double");
  const Mat e = t->alg->identity();
  const GammaElement g = gamma_complete(*t, e, e);
  CHECK(gamma_distance(g, {e, e, e, e}) <= 1e-12);

  Rng rng(7);
  for (int s = 0; s < 20; ++s) CHECK(gamma_residual(gamma_complete(*t, plus_elem(*t, rng), minus_elem(*t, rng))) <= 1e-10);

  const auto ab = triple("abelian-4");
  const Mat h1 = plus_elem(*ab, rng), a2 = minus_elem(*ab, rng);
  const GammaElement x = gamma_complete(*ab, h1, a2);
  CHECK((x.h2 - h1).norm() <= 1e-12);
  CHECK((x.a1 - a2).norm() <= 1e-12);
}

TEST_CASE("Gamma multiplications") {
  const auto t = triple("sl2c-iwasawa");
  Rng rng(8);
  double inv = 0.0, interchange = 0.0;
  for (int s = 0; s < 10; ++s) {
    // x y on top, z w below.
    const GammaElement x = gamma_complete(*t, plus_elem(*t, rng), minus_elem(*t, rng));
    const GammaElement y = gamma_complete(*t, plus_elem(*t, rng), x.a1);
    const GammaElement z = gamma_from_top(*t, x.h1, minus_elem(*t, rng));
    const GammaElement w = gamma_from_corner(*t, y.h1, z.a1);
    for (const auto& c : {mult_h(x, z), mult_h(y, w), mult_v(x, y), mult_v(z, w)}) inv = std::max(inv, gamma_residual(c));
    const GammaElement a = mult_v(mult_h(x, z), mult_h(y, w));
    const GammaElement b = mult_h(mult_v(x, y), mult_v(z, w));
    interchange = std::max(interchange, gamma_distance(a, b));
  }
  CHECK(inv <= 1e-9);
  CHECK(interchange <= 1e-9);
}

TEST_CASE("omega^h") {
  const auto t = triple("aff1-double");
  const Mat e = t->alg->identity();
  const GammaElement id{e, e, e, e};
  const int np = t->n_plus(), nm = t->n_minus();
  Rng rng(9);
  const Vec vt = rng.normal_vec(nm), w = rng.normal_vec(np);
  Vec a(2 * np + 2 * nm), b(2 * np + 2 * nm);
  a << Vec::Zero(np), vt, vt, Vec::Zero(np);
  b << w, Vec::Zero(nm), Vec::Zero(nm), w;
  CHECK(gamma_tangent_residual(*t, id, a) <= 1e-12);
  CHECK(gamma_tangent_residual(*t, id, b) <= 1e-12);
  const double pair = t->alg->pair(t->minus * vt, t->plus * w);
  CHECK(omega_h(*t, id, a, b) == doctest::Approx(-2.0 * pair).epsilon(1e-12));

  const auto m = std::make_shared<const ManinModel>(t);
  for (int s = 0; s < 10; ++s) {
    const Point lam = m->random_point(2, rng);
    const GammaElement x = ManinModel::gamma_part(lam);
    const Vec v = m->random_tangent(2, lam, rng);
    const Vec gv = v.segment(nm, 2 * np + 2 * nm);  // after v~3
    CHECK(std::abs(omega_h(*t, x, gv, gv)) <= 1e-12);
  }
  Vec off = Vec::Zero(2 * np + 2 * nm);
  off.head(np) = w;
  CHECK_THROWS_AS(omega_h(*t, id, off, b), std::invalid_argument);
}

TEST_CASE("abelian triple: omega^h does not depend on the base point") {
  const auto t = triple("abelian-4");
  const Mat e = t->alg->identity();
  Rng rng(10);
  // v_h2 + v_a1 = v_a2 + v_h1 splits into v_h1 = v_h2 and v_a1 = v_a2.
  auto tangent = [&]() {
    const Vec h = rng.normal_vec(2), a = rng.normal_vec(2);
    Vec v(8);
    v << h, a, a, h;
    return v;
  };
  for (int s = 0; s < 5; ++s) {
    const GammaElement x = gamma_complete(*t, plus_elem(*t, rng), minus_elem(*t, rng));
    const Vec v = tangent(), w = tangent();
    CHECK(gamma_tangent_residual(*t, x, v) <= 1e-12);
    CHECK(omega_h(*t, x, v, w) == doctest::Approx(omega_h(*t, {e, e, e, e}, v, w)).epsilon(1e-12));
    CHECK(omega_h(*t, x, v, w) == doctest::Approx(-omega_h(*t, x, w, v)).epsilon(1e-12));
  }
}

TEST_CASE("bar model") {
  const auto t = triple("aff1-double");
  const auto m = std::make_shared<const ManinModel>(t);
  const IdentityResidual r = simplicial_identity_residual(*m, 5, 3);
  CHECK(r.points <= 1e-10);
  CHECK(r.tangents <= 1e-10);
  CHECK(r.constraints <= 1e-10);
  CHECK(is_normalized(bar_omega(m), 10, 4) <= 1e-12);
  CHECK(is_normalized(beta_form(m), 10, 5) <= 1e-12);
  CHECK(nondegeneracy_check(bar_omega(m), 6).nondegenerate);
}

TEST_CASE("Morita identities with the nerve") {
  for (const char* name : {"aff1-double", "sl2c-iwasawa", "abelian-4"}) {
    CAPTURE(name);
    const auto t = triple(name);
    const auto m = std::make_shared<const ManinModel>(t);
    const auto nv = std::make_shared<const NerveModel>(t->alg, 3);
    const auto phi = std::make_shared<const PhiMap>(m, nv);
    const MoritaReport r = check_morita(bar_omega(m), omega_bullet(nv), std::make_shared<const IdentityMap>(m), phi,
                                        beta_form(m), 20, 11, FdConfig{1e-5});
    for (const auto& l : r.levels) {
      CAPTURE(l.level);
      CHECK(l.residual <= (l.uses_fd ? 1e-6 : 1e-10));
    }
    const IdentityResidual c = map_commutation_residual(*phi, 3, 12);
    CHECK(std::max(c.points, c.tangents) <= 1e-10);
  }
}
