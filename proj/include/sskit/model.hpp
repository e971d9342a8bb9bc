#pragma once

#include "sskit/linalg.hpp"
#include "sskit/simplicial.hpp"

#include <memory>
#include <string>
#include <vector>

namespace sskit {

/// A point of some level: a tuple of matrices (group elements, or coordinate
/// columns for linear models). Tangents are flattened left-trivialized Vecs.
using Point = std::vector<Mat>;

/// Truncated simplicial manifold with explicit tangent data. Levels run
/// 0..top_level(); faces act on level >= 1, degeneracies on level < top_level().
class SimplicialModel {
 public:
  virtual ~SimplicialModel() = default;

  virtual std::string name() const = 0;
  virtual int top_level() const = 0;
  virtual int tangent_dim(int level) const = 0;

  virtual Point face(int level, int i, const Point& x) const = 0;
  virtual Vec tangent_face(int level, int i, const Point& x, const Vec& v) const = 0;
  virtual Point degeneracy(int level, int j, const Point& x) const = 0;
  virtual Vec tangent_degeneracy(int level, int j, const Point& x, const Vec& v) const = 0;

  virtual Point base_point(int level) const = 0;
  /// Rows cut out the tangent space inside the ambient coordinates; empty by default.
  virtual Mat tangent_constraints(int level, const Point& x) const;

  /// Whether constant-coordinate fields x -> x.exp(eps u) stay in level `level`.
  virtual bool has_variation(int level) const = 0;
  virtual Point vary(int level, const Point& x, const Vec& u, double eps) const;
  /// Bracket of two constant-coordinate fields (pointwise algebra bracket).
  virtual Vec bracket(int level, const Vec& u, const Vec& v) const;
  /// u with y = x.exp(u) componentwise; used for path increments.
  virtual Vec relative_log(int level, const Point& x, const Point& y) const;

  virtual Point random_point(int level, Rng& rng) const = 0;
  /// Random tangent satisfying the constraints at x.
  virtual Vec random_tangent(int level, const Point& x, Rng& rng) const;

  /// Dense matrices of the tangent maps at x.
  Mat tangent_face_matrix(int level, int i, const Point& x) const;
  Mat tangent_degeneracy_matrix(int level, int j, const Point& x) const;
  /// Orthonormal basis of the constrained tangent space at x.
  Mat tangent_basis(int level, const Point& x) const;
};

using ModelPtr = std::shared_ptr<const SimplicialModel>;

class SimplicialMap {
 public:
  virtual ~SimplicialMap() = default;
  virtual ModelPtr source() const = 0;
  virtual ModelPtr target() const = 0;
  virtual Point map(int level, const Point& x) const = 0;
  virtual Vec tangent_map(int level, const Point& x, const Vec& v) const = 0;
  Mat tangent_matrix(int level, const Point& x) const;
};

using MapPtr = std::shared_ptr<const SimplicialMap>;

class IdentityMap : public SimplicialMap {
 public:
  explicit IdentityMap(ModelPtr m) : m_(std::move(m)) {}
  ModelPtr source() const override { return m_; }
  ModelPtr target() const override { return m_; }
  Point map(int, const Point& x) const override { return x; }
  Vec tangent_map(int, const Point&, const Vec& v) const override { return v; }

 private:
  ModelPtr m_;
};

struct IdentityResidual {
  double points = 0.0;        // max entry defect of d d, d s, s s identities on random points
  double tangents = 0.0;      // same on random constrained tangents
  double constraints = 0.0;   // faces/degeneracies of constrained tangents violating the constraints
};
/// Checks all simplicial identities on levels up to the top with `samples` random points per level.
IdentityResidual simplicial_identity_residual(const SimplicialModel& model, int samples, std::uint64_t seed);
/// max defect of f d_i = d_i f and f s_j = s_j f on points and tangents.
IdentityResidual map_commutation_residual(const SimplicialMap& f, int samples, std::uint64_t seed);

/// A simplicial vector space viewed as a (flat) simplicial manifold.
class LinearModel : public SimplicialModel {
 public:
  explicit LinearModel(std::shared_ptr<const SimplicialVectorSpace> v);
  std::string name() const override { return "linear"; }
  int top_level() const override;
  int tangent_dim(int level) const override;
  Point face(int level, int i, const Point& x) const override;
  Vec tangent_face(int level, int i, const Point& x, const Vec& v) const override;
  Point degeneracy(int level, int j, const Point& x) const override;
  Vec tangent_degeneracy(int level, int j, const Point& x, const Vec& v) const override;
  Point base_point(int level) const override;
  bool has_variation(int) const override { return true; }
  Point vary(int level, const Point& x, const Vec& u, double eps) const override;
  Vec bracket(int level, const Vec& u, const Vec& v) const override;
  Vec relative_log(int level, const Point& x, const Point& y) const override;
  Point random_point(int level, Rng& rng) const override;
  const SimplicialVectorSpace& space() const { return *v_; }

 private:
  std::shared_ptr<const SimplicialVectorSpace> v_;
};

}  // namespace sskit
