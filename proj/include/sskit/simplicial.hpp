#pragma once

#include "sskit/chain.hpp"
#include "sskit/linalg.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sskit {

/// One generator of the simplex category acting on level `level` (its source).
struct Gen {
  char kind = 'd';  // 'd' face (level -> level-1), 's' degeneracy (level -> level+1)
  int level = 0;
  int index = 0;
  int target() const { return kind == 'd' ? level - 1 : level + 1; }
  bool operator==(const Gen&) const = default;
};

/// Written composition gens[0] o gens[1] o ... ; the last generator acts first.
/// The empty word is the identity on `source`.
struct IndexWord {
  std::vector<Gen> gens;
  int source = 0;
  int target() const { return gens.empty() ? source : gens.front().target(); }
  bool operator==(const IndexWord&) const = default;
};

/// Builds a word from (kind, index) pairs acting on `source`, filling in levels.
/// Throws std::invalid_argument if an index is out of range for its level.
IndexWord make_word(int source, const std::vector<std::pair<char, int>>& gens);
void validate_word(const IndexWord& w);
std::string to_string(const IndexWord& w);

/// Normal form s_{j1}..s_{jq} d_{i1}..d_{ip} with j1 > .. > jq and i1 >= .. >= ip.
IndexWord normalize_word(const IndexWord& w);

struct Shuffle {
  int p = 0, q = 0;
  std::vector<int> image;  // sigma(0..p+q-1)
  int sign = 1;
};
/// All (p,q)-shuffles: sigma increasing on [0,p) and on [p,p+q).
std::vector<Shuffle> enumerate_shuffles(int p, int q);
int permutation_sign(const std::vector<int>& perm);

/// Monotone map [k] -> [l] stored as its value list.
using Monotone = std::vector<int>;
/// (Delta[l])_k.
std::vector<Monotone> simplex_k(int l, int k);
/// (boundary Delta[l])_k: maps missing at least one vertex.
std::vector<Monotone> boundary_k(int l, int k);
/// (Lambda[l,j])_k: maps whose image avoids some vertex other than j.
std::vector<Monotone> horn_k(int l, int j, int k);

/// Compatibility of a family of (l-1)-cells along shared codimension-2 faces:
/// d_a x_b == d_{b-1} x_a for a < b, both present. `present[i]` marks supplied faces.
template <class Cell>
bool faces_compatible(int l, const std::vector<Cell>& x, const std::vector<bool>& present,
                      const std::function<Cell(int, int, const Cell&)>& face,
                      const std::function<bool(const Cell&, const Cell&)>& equal) {
  for (int b = 0; b <= l; ++b)
    for (int a = 0; a < b; ++a) {
      if (!present[a] || !present[b]) continue;
      if (!equal(face(l - 1, a, x[b]), face(l - 1, b - 1, x[a]))) return false;
    }
  return true;
}

/// Finite simplicial vector space truncated at level N = dims.size()-1.
struct SimplicialVectorSpace {
  std::vector<int> dims;
  std::vector<std::vector<Mat>> faces;  // faces[l][i]: dims[l-1] x dims[l], l >= 1
  std::vector<std::vector<Mat>> degens; // degens[l][j]: dims[l+1] x dims[l], l < N
  int top() const { return static_cast<int>(dims.size()) - 1; }

  const Mat& d(int l, int i) const { return faces.at(l).at(i); }
  const Mat& s(int l, int j) const { return degens.at(l).at(j); }

  /// Largest entry of any simplicial identity defect.
  double identity_residual() const;

  std::string to_json() const;
  static SimplicialVectorSpace from_json(const std::string& text);
};

/// Matrix of a word acting on V; every intermediate level must be <= V.top().
Mat evaluate_word(const SimplicialVectorSpace& v, const IndexWord& w);

/// Random chain complex C_0..C_n with dims <= max_dim and exact d^2 = 0.
ChainComplex random_chain_complex(Rng& rng, int n, int max_dim);

/// Dold-Kan Gamma(C) up to level `top`, followed by a random basis change per
/// level. Gamma of a complex concentrated in degrees <= n is a linear n-groupoid.
SimplicialVectorSpace gamma_construction(const ChainComplex& c, int top, Rng* basis_change);

SimplicialVectorSpace constant_space(int k, int top);

/// Normalized (Moore) complex: NV_l = cap_{i<l} ker d_i, boundary (-1)^l d_l.
/// `bases` receives the orthonormal basis of NV_l inside V_l if non-null.
ChainComplex moore_complex(const SimplicialVectorSpace& v, std::vector<Mat>* bases = nullptr);
/// V_l / sum_j im s_j via orthogonal complements, boundary sum (-1)^i d_i.
ChainComplex quotient_complex(const SimplicialVectorSpace& v, std::vector<Mat>* bases = nullptr);

struct DoldKanReport {
  std::vector<int> moore_dims, quotient_dims;
  std::vector<int> moore_homology, quotient_homology;
  bool ok = false;
};
DoldKanReport dold_kan_compare(const SimplicialVectorSpace& v);

/// Random composable word of `length` generators with every intermediate level in [0, max_level].
IndexWord random_word(Rng& rng, int max_level, int length);

struct WordFuzzReport {
  int words = 0;
  int mismatches = 0;         // normal form evaluates to a different matrix
  int not_idempotent = 0;     // normalize(normalize(w)) != normalize(w)
  double max_defect = 0.0;
};
/// Random words of length 1..8 on random Gamma-construction spaces of top level 4,
/// each compared with its normal form through the matrix oracle.
WordFuzzReport word_fuzz(int words, std::uint64_t seed);

/// dim K_l - sum_{i<l} (-1)^i C(l,i+1) dim K_{l-1-i}.
int rank_formula(const std::vector<int>& dims, int l);

}  // namespace sskit
