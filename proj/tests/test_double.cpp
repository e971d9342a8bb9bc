#include <doctest.h>

#include "sskit/double.hpp"

#include <cmath>

using namespace sskit;

namespace {

AlgebraPtr algebra(const char* name) { return std::make_shared<const LieAlgebra>(LieAlgebra::builtin(name)); }

}  // namespace

TEST_CASE("vertical unit and product use exact grid indices") {
  auto alg = algebra("so3");
  const int m = 6;
  auto l = std::make_shared<const LoopDouble>(alg, m, 3);
  Rng rng(1);
  const Point gamma = l->random_point(0, 1, rng);
  REQUIRE(gamma.size() == size_t(m + 1));
  const Point u = loop_unit(gamma, m, 1);
  REQUIRE(u.size() == size_t(2 * m + 1));
  for (int k = 0; k <= m; ++k) CHECK((u[k] - gamma[k]).norm() == 0.0);
  for (int k = m; k <= 2 * m; ++k) CHECK((u[k] - gamma[2 * m - k]).norm() == 0.0);

  const Point t1 = l->random_point(1, 1, rng), t2 = l->random_point(1, 1, rng);
  const Point c = loop_compose(t1, t2, m, 1);
  // First half from tau_2, second half from tau_1.
  REQUIRE(c.size() == size_t(2 * m + 1));
  for (int k = 0; k <= m; ++k) CHECK((c[k] - t2[k]).norm() == 0.0);
  for (int k = m + 1; k <= 2 * m; ++k) CHECK((c[k] - t1[k]).norm() == 0.0);
}

TEST_CASE("horizontal product of constant loops is constant") {
  auto alg = algebra("so3");
  const int m = 6;
  auto l = std::make_shared<const LoopDouble>(alg, m, 3);
  Rng rng(2);
  const Mat a = alg->random_element(rng), b = alg->random_element(rng);
  Point x;
  for (int k = 0; k <= 2 * m; ++k) {
    x.push_back(a);
    x.push_back(b);
  }
  const Point p = l->column(1)->face(2, 1, x);
  REQUIRE(p.size() == size_t(2 * m + 1));
  for (const Mat& g : p) CHECK((g - a * b).norm() <= 1e-14);
}

TEST_CASE("bisimplicial identities") {
  for (const char* name : {"abelian-2", "so3"}) {
    CAPTURE(name);
    auto alg = algebra(name);
    auto l = std::make_shared<const LoopDouble>(alg, 6, 3);
    for (int j = 0; j <= 2; ++j) {
      const IdentityResidual r = simplicial_identity_residual(*l->column(j), 1, 3);
      CHECK(std::max(r.points, r.tangents) <= 1e-12);
    }
    for (int i = 0; i <= 3; ++i) {
      const IdentityResidual r = simplicial_identity_residual(*l->row(i), 1, 4);
      CHECK(std::max(r.points, r.tangents) <= 1e-12);
    }
  }
}

TEST_CASE("triple D of zero") {
  auto alg = algebra("so3");
  auto l = std::make_shared<const LoopDouble>(alg, 6, 3);
  const DoubleShiftedForm z = double_zero(l, 1, 2, 0);
  const DoubleShiftedForm dz = triple_D(z);
  Rng rng(5);
  for (int j = 0; j <= 2; ++j)
    for (int i = 0; i <= 2; ++i) {
      const Point x = l->random_point(j, i, rng);
      std::vector<Vec> v;
      for (int a = 0; a < dz.degree(j, i); ++a) v.push_back(l->random_tangent(j, i, x, rng));
      if (dz.degree(j, i) >= 0) CHECK(dz.eval(j, i, x, v) == 0.0);
    }
}

TEST_CASE("eta") {
  SUBCASE("constant tau_2") {
    auto alg = algebra("so3");
    const int m = 6;
    auto l = std::make_shared<const LoopDouble>(alg, m, 3);
    Rng rng(6);
    Point x = l->random_point(1, 2, rng);
    for (int k = 0; k <= 2 * m; ++k) x[2 * k + 1] = alg->identity();
    CHECK(eta_form(*alg, 2 * m, x, rng.normal_vec(2 * 3 * (2 * m + 1))) == 0.0);
  }
  SUBCASE("abelian closed form") {
    auto alg = algebra("abelian-1");
    const double c = 0.8;
    auto run = [&](int cells) {
      Point x;
      Vec a = Vec::Zero(2 * (cells + 1));
      for (int k = 0; k <= cells; ++k) {
        const double t = double(k) / cells;
        x.push_back(alg->identity());
        x.push_back(alg->exp(Vec::Constant(1, c * std::sin(2 * M_PI * t))));
        a(2 * k) = std::cos(2 * M_PI * t) - 1.0;
      }
      // int 2 pi c cos (cos - 1) dt = pi c.
      return std::abs(eta_form(*alg, cells, x, a) - M_PI * c);
    };
    const double e1 = run(24), e2 = run(48);
    CHECK(e1 <= 0.05);
    CHECK(fitted_order({24, 48}, {e1, e2}) >= 1.9);
  }
}

TEST_CASE("two code paths for alpha on loops") {
  auto alg = algebra("so3");
  auto l = std::make_shared<const LoopDouble>(alg, 12, 3);
  Rng rng(7);
  for (int s = 0; s < 3; ++s) {
    const Point x = l->random_point(1, 1, rng);
    const Vec v = l->random_tangent(1, 1, x, rng);
    CHECK(loop_alpha(*alg, x, v) == doctest::Approx(alpha_p(*alg, x, v)).epsilon(1e-10));
  }
}

TEST_CASE("double Morita identity componentwise") {
  SUBCASE("abelian: every component exact") {
    auto l = std::make_shared<const LoopDouble>(algebra("abelian-2"), 24, 4);
    for (const auto& c : double_ev_residuals(l, 2, 8)) {
      CAPTURE(c.label);
      CHECK(c.residual <= 1e-10);
    }
  }
  SUBCASE("so3: exact components and convergence of the rest") {
    auto alg = algebra("so3");
    const auto a = double_ev_residuals(std::make_shared<const LoopDouble>(alg, 12, 4), 2, 9);
    const auto b = double_ev_residuals(std::make_shared<const LoopDouble>(alg, 24, 4), 2, 9);
    REQUIRE(a.size() == b.size());
    for (size_t k = 0; k < a.size(); ++k) {
      CAPTURE(a[k].label);
      if (a[k].exact)
        CHECK(a[k].residual <= 1e-10);
      else
        CHECK((std::max(a[k].residual, b[k].residual) <= 1e-9 || fitted_order({12, 24}, {a[k].residual, b[k].residual}) >= 1.0));
    }
  }
}
