#pragma once

#include "sskit/model.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace sskit {

/// Multilinear evaluator at one level: base point and tangent arguments.
using Evaluator = std::function<double(const Point&, const std::vector<Vec>&)>;

/// m-shifted k-form: alpha_i has degree k + m - i on level i. Missing levels are zero.
struct ShiftedForm {
  int m = 0;
  int k = 0;
  ModelPtr model;
  std::map<int, Evaluator> levels;

  int degree(int level) const { return k + m - level; }
  bool has(int level) const { return levels.count(level) > 0; }
  /// Throws std::invalid_argument on arity mismatch.
  double eval(int level, const Point& x, const std::vector<Vec>& v) const;
};

ShiftedForm zero_form(ModelPtr model, int m, int k);
/// a + c*b; both must live on the same model with equal (m, k).
ShiftedForm add(const ShiftedForm& a, const ShiftedForm& b, double c = 1.0);
ShiftedForm scale(const ShiftedForm& a, double c);
/// f^* a; the result lives on f->source().
ShiftedForm pullback(const ShiftedForm& a, MapPtr f);

struct FdConfig {
  double h = 1e-4;
};

/// (delta a)(x; v) at level p = sum_i (-1)^i a(d_i x; Td_i v), a evaluated on level p-1.
double simplicial_delta(const SimplicialModel& model, int p, const Evaluator& a, const Point& x,
                        const std::vector<Vec>& v);
/// Palais formula with constant-coordinate fields, central differences and exact brackets.
double de_rham_d(const SimplicialModel& model, int level, const Evaluator& a, const Point& x,
                 const std::vector<Vec>& v, const FdConfig& cfg = {});

Evaluator delta_evaluator(ModelPtr model, int p, Evaluator a);
Evaluator d_evaluator(ModelPtr model, int level, Evaluator a, FdConfig cfg = {});

/// D = delta + (-1)^p d on levels 0..min(m+1, top). The result is typed (m, k+1); retype it as
/// (m+1, k) before feeding it to anything that reads the shift (is_closed, im_form).
ShiftedForm total_D(const ShiftedForm& a, FdConfig cfg = {});

struct LevelResidual {
  int level = 0;
  double residual = 0.0;
  bool uses_fd = false;  // the component involves the de Rham differential
};

struct ClosedReport {
  std::vector<LevelResidual> levels;
  double max_exact = 0.0;  // components without d
  double max_fd = 0.0;
};
ClosedReport is_closed(const ShiftedForm& a, int samples, std::uint64_t seed, FdConfig cfg = {});

/// max |s_j^* a_p| over levels p >= 1, all j, random samples.
double is_normalized(const ShiftedForm& a, int samples, std::uint64_t seed);

/// max |a(.., v_i, .., v_j, ..) + a(.., v_j, .., v_i, ..)| over random swaps.
double alternation_residual(const ShiftedForm& a, int samples, std::uint64_t seed);

/// Generic residual of f^*alpha - g^*beta - D phi on levels 0..m of Z.
struct MoritaReport {
  std::vector<LevelResidual> levels;
  double max_exact = 0.0;
  double max_fd = 0.0;
};
MoritaReport check_morita(const ShiftedForm& alpha, const ShiftedForm& beta, MapPtr f, MapPtr g,
                          const ShiftedForm& phi, int samples, std::uint64_t seed, FdConfig cfg = {});

// ---------------------------------------------------------------------------
// Paths in a model. A level-l point of the path space is R+1 consecutive
// samples of X_l stored back to back; tangents likewise.

enum class PathKind { Free, Based, Loop };

class PathSpaceModel : public SimplicialModel {
 public:
  PathSpaceModel(ModelPtr x, int resolution, PathKind kind);
  std::string name() const override;
  int top_level() const override { return x_->top_level(); }
  int tangent_dim(int level) const override { return (r_ + 1) * x_->tangent_dim(level); }
  Point face(int level, int i, const Point& p) const override;
  Vec tangent_face(int level, int i, const Point& p, const Vec& v) const override;
  Point degeneracy(int level, int j, const Point& p) const override;
  Vec tangent_degeneracy(int level, int j, const Point& p, const Vec& v) const override;
  Point base_point(int level) const override;
  Mat tangent_constraints(int level, const Point& p) const override;
  bool has_variation(int level) const override { return x_->has_variation(level); }
  Point vary(int level, const Point& p, const Vec& u, double eps) const override;
  Vec bracket(int level, const Vec& u, const Vec& v) const override;
  Point random_point(int level, Rng& rng) const override;
  Vec random_tangent(int level, const Point& p, Rng& rng) const override;

  int resolution() const { return r_; }
  PathKind kind() const { return kind_; }
  ModelPtr inner() const { return x_; }
  Point sample(int level, const Point& p, int j) const;
  Vec sample_tangent(int level, const Vec& v, int j) const;
  /// Smooth random path x(t) = x0.exp(A(t)) with Fourier A, A(0) = 0 unless free.
  Point smooth_path(int level, const Point& x0, Rng& rng, double sigma = 0.5) const;

 private:
  int width(int level) const;
  ModelPtr x_;
  int r_;
  PathKind kind_;
};

/// Smooth Fourier tangent samples (R+1 values, n each) respecting the path kind.
Vec smooth_tangent_samples(int resolution, int n, PathKind kind, Rng& rng, double sigma = 1.0);

/// tr(a)_gamma(v_1..v_q) = sum over cells of a at the cell midpoint x_j.exp(nu_j/2),
/// fed with the increment nu_j = log(x_j^{-1} x_{j+1}) and the cell averages of v.
Evaluator transgress_evaluator(ModelPtr x, int level, Evaluator a, int resolution);
ShiftedForm transgress(const ShiftedForm& a, std::shared_ptr<const PathSpaceModel> paths);

/// Evaluation at sample index j (0 or R for the endpoints).
class EvalMap : public SimplicialMap {
 public:
  EvalMap(std::shared_ptr<const PathSpaceModel> paths, int sample) : p_(std::move(paths)), j_(sample) {}
  ModelPtr source() const override { return p_; }
  ModelPtr target() const override { return p_->inner(); }
  Point map(int level, const Point& x) const override { return p_->sample(level, x, j_); }
  Vec tangent_map(int level, const Point&, const Vec& v) const override { return p_->sample_tangent(level, v, j_); }

 private:
  std::shared_ptr<const PathSpaceModel> p_;
  int j_;
};

struct TransgressionReport {
  double d_identity = 0.0;      // tr(d a) - ev_1^* a + ev_0^* a + d tr(a)
  double delta_identity = 0.0;  // tr(delta a) - delta tr(a)
};
/// Checks both identities for the component a_level (and a_{level-1} for delta).
TransgressionReport transgression_identities(const ShiftedForm& a, std::shared_ptr<const PathSpaceModel> paths,
                                             int samples, std::uint64_t seed, FdConfig cfg = {});

/// Observed order of residuals e_i at resolutions r_i (least-squares slope of -log e vs log r).
double fitted_order(const std::vector<double>& resolutions, const std::vector<double>& residuals);

}  // namespace sskit
