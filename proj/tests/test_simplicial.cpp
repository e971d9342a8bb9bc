#include <doctest.h>

#include "sskit/nerve.hpp"
#include "sskit/simplicial.hpp"
#include "sskit/tangent.hpp"

#include <algorithm>
#include <numeric>
#include <set>

using namespace sskit;

namespace {

int parity_by_inversions(const std::vector<int>& p) {
  int inv = 0;
  for (size_t a = 0; a < p.size(); ++a)
    for (size_t b = a + 1; b < p.size(); ++b) inv += p[a] > p[b];
  return inv % 2 ? -1 : 1;
}

// All permutations of p+q that increase on both blocks, by brute force.
std::vector<std::vector<int>> shuffle_oracle(int p, int q) {
  std::vector<int> perm(p + q);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool ok = std::is_sorted(perm.begin(), perm.begin() + p) && std::is_sorted(perm.begin() + p, perm.end());
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

SimplicialVectorSpace random_space(Rng& rng, int n) {
  return gamma_construction(random_chain_complex(rng, n, 3), n + 2, &rng);
}

}  // namespace

TEST_CASE("normal forms of short words") {
  for (int i = 0; i <= 1; ++i) {
    const IndexWord w = normalize_word(make_word(1, {{'d', i}, {'s', i}}));
    CHECK(w.gens.empty());
    CHECK(w.source == 1);
  }
  CHECK(normalize_word(make_word(1, {{'d', 2}, {'s', 1}})).gens.empty());
  // d_1 d_3 = d_2 d_1 (i < j), the latter being the normal form.
  const IndexWord w = normalize_word(make_word(4, {{'d', 1}, {'d', 3}}));
  CHECK(w == make_word(4, {{'d', 2}, {'d', 1}}));
  // s_0 s_1 = s_2 s_0.
  CHECK(normalize_word(make_word(1, {{'s', 0}, {'s', 1}})) == make_word(1, {{'s', 2}, {'s', 0}}));
  // d_0 s_2 = s_1 d_0.
  CHECK(normalize_word(make_word(2, {{'d', 0}, {'s', 2}})) == make_word(2, {{'s', 1}, {'d', 0}}));
  CHECK_THROWS_AS(make_word(1, {{'d', 3}}), std::invalid_argument);
  CHECK(to_string(make_word(2, {{'d', 0}, {'s', 1}})) == "d0 s1 [2]");
}

TEST_CASE("normal form agrees with the matrix oracle") {
  const WordFuzzReport r = word_fuzz(2000, 7);
  CHECK(r.words == 2000);
  CHECK(r.mismatches == 0);
  CHECK(r.not_idempotent == 0);
  CHECK(r.max_defect <= 1e-10);
}

TEST_CASE("random words are composable") {
  Rng rng(4);
  for (int k = 0; k < 200; ++k) {
    const IndexWord w = random_word(rng, 4, 1 + k % 8);
    CHECK_NOTHROW(validate_word(w));
    CHECK(w.target() <= 4);
  }
}

TEST_CASE("shuffles") {
  const auto s11 = enumerate_shuffles(1, 1);
  REQUIRE(s11.size() == 2);
  CHECK(s11[0].image == std::vector<int>{0, 1});
  CHECK(s11[0].sign == 1);
  CHECK(s11[1].image == std::vector<int>{1, 0});
  CHECK(s11[1].sign == -1);
  for (int q = 0; q <= 3; ++q) {
    const auto s = enumerate_shuffles(0, q);
    REQUIRE(s.size() == 1);
    CHECK(s[0].sign == 1);
  }
  CHECK(enumerate_shuffles(2, 2).size() == 6);
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; p + q <= 6; ++q) {
      const auto got = enumerate_shuffles(p, q);
      const auto want = shuffle_oracle(p, q);
      CAPTURE(p);
      CAPTURE(q);
      REQUIRE(got.size() == want.size());
      std::set<std::vector<int>> g, w(want.begin(), want.end());
      int sg = 0, sw = 0;
      for (const auto& s : got) {
        g.insert(s.image);
        CHECK(s.sign == parity_by_inversions(s.image));
        sg += s.sign;
      }
      for (const auto& s : want) sw += parity_by_inversions(s);
      CHECK(g == w);
      CHECK(sg == sw);
    }
  CHECK(permutation_sign({2, 0, 1}) == 1);
  CHECK(permutation_sign({1, 0, 2}) == -1);
}

TEST_CASE("simplices, boundaries and horns") {
  for (int l = 0; l <= 3; ++l)
    for (int k = 0; k <= 3; ++k)
      CHECK(simplex_k(l, k).size() == size_t(binomial(l + k + 1, k + 1) + 0.5));
  // Surjections [k] -> [l] are exactly what the boundary omits.
  CHECK(simplex_k(2, 2).size() - boundary_k(2, 2).size() == 1);
  CHECK(simplex_k(2, 3).size() - boundary_k(2, 3).size() == 3);

  const auto h = horn_k(2, 1, 1);
  const Monotone d1 = {0, 2};  // the face opposite vertex 1
  CHECK(std::find(h.begin(), h.end(), d1) == h.end());
  CHECK(std::find(h.begin(), h.end(), Monotone{0, 1}) != h.end());
  CHECK(std::find(h.begin(), h.end(), Monotone{1, 2}) != h.end());
  CHECK(h.size() + 1 == boundary_k(2, 1).size());
}

TEST_CASE("nerve horn filler and boundary compatibility") {
  auto alg = std::make_shared<const LieAlgebra>(LieAlgebra::builtin("so3"));
  const NerveModel nv(alg, 4);
  Rng rng(8);
  const Mat g = alg->random_element(rng), h = alg->random_element(rng);
  // Lambda[2,1] with d_2 x = (g), d_0 x = (h): filler (g, h) and d_1 = g h.
  const Point x = {g, h};
  CHECK((nv.face(2, 2, x)[0] - g).norm() == 0.0);
  CHECK((nv.face(2, 0, x)[0] - h).norm() == 0.0);
  CHECK((nv.face(2, 1, x)[0] - g * h).norm() < 1e-14);

  auto face = [&](int lvl, int i, const Point& p) { return nv.face(lvl, i, p); };
  auto equal = [](const Point& a, const Point& b) {
    for (size_t k = 0; k < a.size(); ++k)
      if ((a[k] - b[k]).norm() > 1e-12) return false;
    return a.size() == b.size();
  };
  for (int s = 0; s < 10; ++s) {
    const Point c = nv.random_point(3, rng);
    std::vector<Point> faces;
    for (int i = 0; i <= 3; ++i) faces.push_back(nv.face(3, i, c));
    CHECK(faces_compatible<Point>(3, faces, std::vector<bool>(4, true), face, equal));
    faces[1][0] = faces[1][0] * alg->exp(0.1 * Vec::Unit(3, 0));
    CHECK_FALSE(faces_compatible<Point>(3, faces, std::vector<bool>(4, true), face, equal));
  }
}

TEST_CASE("constant space") {
  const SimplicialVectorSpace v = constant_space(3, 4);
  CHECK(v.identity_residual() == 0.0);
  const ChainComplex n = moore_complex(v);
  CHECK(n.dims == std::vector<int>{3, 0, 0, 0, 0});
}

TEST_CASE("nerve tangent space: Moore dims") {
  auto alg = std::make_shared<const LieAlgebra>(LieAlgebra::builtin("so3"));
  const NerveModel nv(alg, 4);
  const SimplicialVectorSpace v = linearize(nv, 4);
  CHECK(v.identity_residual() <= 1e-12);
  CHECK(moore_complex(v).dims == std::vector<int>{0, 3, 0, 0, 0});
  CHECK(quotient_complex(v).dims == std::vector<int>{0, 3, 0, 0, 0});
}

TEST_CASE("Dold-Kan on random spaces") {
  Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    const SimplicialVectorSpace v = random_space(rng, 1 + k % 3);
    CHECK(v.identity_residual() <= 1e-10);
    const DoldKanReport r = dold_kan_compare(v);
    CHECK(r.ok);
    CHECK(r.moore_dims == r.quotient_dims);
    CHECK(r.moore_homology == r.quotient_homology);
  }
}

TEST_CASE("Gamma of a complex recovers it as the Moore complex") {
  Rng rng(33);
  const ChainComplex c = random_chain_complex(rng, 2, 3);
  CHECK(c.square_residual() <= 1e-12);
  const SimplicialVectorSpace v = gamma_construction(c, 4, &rng);
  const ChainComplex n = moore_complex(v);
  for (int l = 0; l <= 2; ++l) CHECK(n.dims[l] == c.dims[l]);
  CHECK(n.dims[3] == 0);
  CHECK(homology(n).dims == std::vector<int>{homology(c).dims[0], homology(c).dims[1], homology(c).dims[2], 0, 0});
}

TEST_CASE("simplicial vector space json round trip") {
  Rng rng(2);
  const SimplicialVectorSpace v = random_space(rng, 2);
  const SimplicialVectorSpace w = SimplicialVectorSpace::from_json(v.to_json());
  CHECK(w.dims == v.dims);
  for (int l = 1; l <= v.top(); ++l)
    for (int i = 0; i <= l; ++i) CHECK((w.d(l, i) - v.d(l, i)).norm() <= 1e-15);
}

TEST_CASE("homology of small complexes") {
  ChainComplex zero;
  zero.dims = {0, 0};
  zero.boundary = {Mat(), Mat(0, 0)};
  CHECK(homology(zero).dims == std::vector<int>{0, 0});

  ChainComplex c;  // R <- R^2 -> rank 1, so H_0 = 0, H_1 = 1
  c.dims = {1, 2};
  c.boundary = {Mat(), (Mat(1, 2) << 1.0, 2.0).finished()};
  const HomologyBasis hb = homology(c);
  CHECK(hb.dims == std::vector<int>{0, 1});
  CHECK((c.d(1) * hb.reps[1]).norm() < 1e-14);
}
