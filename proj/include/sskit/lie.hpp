#pragma once

#include "sskit/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sskit {

/// Raw description of a finite-dimensional real Lie algebra.
struct LieAlgebraSpec {
  std::string name;
  int dim = 0;
  /// C[i][j][k] stored at (i*dim + j)*dim + k, meaning [e_i,e_j] = sum_k C[i][j][k] e_k.
  std::vector<double> structure_constants;
  std::optional<Mat> pairing;
  std::vector<Mat> rep;  // rho(e_i), each rep_dim x rep_dim
  int rep_dim = 0;
};

struct QuadraticReport {
  double ad_invariance = 0.0;  // max |<[a,b],c> + <b,[a,c]>| over basis triples
  double min_singular = 0.0;   // of the pairing matrix
  double max_singular = 0.0;
  bool nondegenerate = false;
  bool ok = false;
};

/// Validated Lie algebra together with its matrix group arithmetic.
///
/// Group elements are plain matrices in the representation space; tangent
/// vectors cross every interface in left-trivialized basis coordinates.
class LieAlgebra {
 public:
  /// Throws std::invalid_argument if the spec violates antisymmetry, Jacobi,
  /// the homomorphism property or faithfulness of the representation.
  explicit LieAlgebra(LieAlgebraSpec spec);

  /// "abelian-k", "so3", "aff1-double", "sl2c-iwasawa".
  static LieAlgebra builtin(const std::string& name);
  /// Built-in name or path to a JSON config.
  static LieAlgebra load(const std::string& name_or_path);
  static LieAlgebra parse(const std::string& json_text);
  std::string dump() const;

  const std::string& name() const { return spec_.name; }
  int dim() const { return spec_.dim; }
  int rep_dim() const { return spec_.rep_dim; }
  const LieAlgebraSpec& spec() const { return spec_; }

  double c(int i, int j, int k) const {
    return spec_.structure_constants[(static_cast<size_t>(i) * dim() + j) * dim() + k];
  }
  Vec bracket(const Vec& a, const Vec& b) const;
  /// Matrix of ad_a in the basis.
  Mat ad(const Vec& a) const;
  Mat killing() const;

  bool has_pairing() const { return spec_.pairing.has_value(); }
  const Mat& pairing() const;
  double pair(const Vec& a, const Vec& b) const;

  Mat rep(const Vec& a) const;
  /// Basis coordinates of a matrix in span rho(e_i); throws std::domain_error
  /// when the least-squares residual exceeds 1e-9 (relative).
  Vec coords(const Mat& x) const;

  Mat exp(const Vec& a) const;
  /// Principal logarithm; throws std::domain_error outside its convergence region.
  Vec log(const Mat& g) const;
  Mat identity() const { return Mat::Identity(rep_dim(), rep_dim()); }

  /// Matrix of Ad_g in the basis.
  Mat adjoint_matrix(const Mat& g) const;
  Vec adjoint(const Mat& g, const Vec& x) const;

  Vec left_trivialize(const Mat& g, const Mat& v) const;
  Vec right_trivialize(const Mat& g, const Mat& v) const;

  /// <u,[v,w]> on left-trivialized inputs.
  double cartan_3form(const Vec& u, const Vec& v, const Vec& w) const;

  /// exp(a)^{-1} D exp(a)[x] = sum_k (-1)^k ad_a^k x / (k+1)!, truncated.
  Vec dexp_left(const Vec& a, const Vec& x, int terms = 12) const;

  double jacobi_residual() const;
  double rep_residual() const;

  Vec random_vector(Rng& rng, double sigma = 1.0) const { return rng.normal_vec(dim(), sigma); }
  Mat random_element(Rng& rng, double sigma = 0.5) const { return exp(random_vector(rng, sigma)); }

 private:
  LieAlgebraSpec spec_;
  std::vector<Mat> ad_basis_;  // ad(e_i)
  Mat basis_pinv_;             // maps vec(X) to coordinates
  Mat basis_;                  // columns vec(rho(e_i))
};

QuadraticReport check_quadratic(const LieAlgebra& alg);

}  // namespace sskit
