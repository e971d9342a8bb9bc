#pragma once

#include "sskit/forms.hpp"
#include "sskit/nerve.hpp"

#include <string>
#include <utility>

namespace sskit {

/// Quadratic algebra with two complementary isotropic subalgebras, given by
/// basis matrices (columns in algebra coordinates).
struct ManinTriple {
  AlgebraPtr alg;
  Mat plus;   // n x n_+
  Mat minus;  // n x n_-

  int dim() const { return alg->dim(); }
  int n_plus() const { return static_cast<int>(plus.cols()); }
  int n_minus() const { return static_cast<int>(minus.cols()); }
  /// Subalgebra coordinates of an algebra vector (least squares onto the basis).
  Vec plus_coords(const Vec& x) const;
  Vec minus_coords(const Vec& x) const;

  /// "aff1-double", "sl2c-iwasawa", "abelian-2k" (abelian with the split pairing).
  static ManinTriple builtin(const std::string& name);
  /// Built-in name or JSON file: algebra keys plus "plus_basis"/"minus_basis"
  /// (index lists or n x k matrices).
  static ManinTriple load(const std::string& name_or_path);
  static ManinTriple parse(const std::string& json_text);

 private:
  Mat plus_pinv_, minus_pinv_;
  friend ManinTriple make_triple(AlgebraPtr, Mat, Mat);
};

ManinTriple make_triple(AlgebraPtr alg, Mat plus, Mat minus);

struct ManinReport {
  double plus_closure = 0.0, minus_closure = 0.0;
  double plus_isotropy = 0.0, minus_isotropy = 0.0;
  double complement_min_sv = 0.0;
  bool ok = false;
};
ManinReport check_manin(const ManinTriple& t);

enum class FactorOrder { PlusMinus, MinusPlus };

struct Factorization {
  Mat first, second;  // g = first * second in the requested order
  int iterations = 0;
  double residual = 0.0;
};
/// Newton solve of exp(x) exp(y) = g over the two subalgebras; throws
/// std::domain_error when no convergence within 50 iterations.
Factorization factorize(const ManinTriple& t, const Mat& g, FactorOrder order);

/// (h2, a2, a1, h1) with h2 a1 = a2 h1.
struct GammaElement {
  Mat h2, a2, a1, h1;
};
double gamma_residual(const GammaElement& x);
/// Given h1 and a2, factor a2 h1 = h2 a1.
GammaElement gamma_complete(const ManinTriple& t, const Mat& h1, const Mat& a2);
/// Given h2 and a1, factor h2 a1 = a2 h1.
GammaElement gamma_from_top(const ManinTriple& t, const Mat& h2, const Mat& a1);
/// Given h2 and a2, factor a2^{-1} h2 = h1 a1^{-1}.
GammaElement gamma_from_corner(const ManinTriple& t, const Mat& h2, const Mat& a2);
/// Horizontal product (needs x.h1 = y.h2) and vertical product (needs x.a1 = y.a2).
GammaElement mult_h(const GammaElement& x, const GammaElement& y);
GammaElement mult_v(const GammaElement& x, const GammaElement& y);

/// Tangent to Gamma: (v_h2, v_a2, v_a1, v_h1), left-trivialized, subalgebra coordinates.
/// Residual of the linearized invariant.
double gamma_tangent_residual(const ManinTriple& t, const GammaElement& x, const Vec& v);
/// omega^h; throws std::invalid_argument on inputs off the tangent space (1e-8).
double omega_h(const ManinTriple& t, const GammaElement& x, const Vec& v, const Vec& w);

/// Local Lie 2-group H_- x Gamma x H_+ => H_- x H_+ => pt.
/// Level 1 point {a, h}, tangent (v~, v). Level 2 point {a3, h3, a2, a1, h2, h1},
/// tangent (v~3, v3, v~2, v~1, v2, v1).
class ManinModel : public SimplicialModel {
 public:
  explicit ManinModel(std::shared_ptr<const ManinTriple> t);
  std::string name() const override { return "manin(" + t_->alg->name() + ")"; }
  int top_level() const override { return 2; }
  int tangent_dim(int level) const override;
  Point face(int level, int i, const Point& x) const override;
  Vec tangent_face(int level, int i, const Point& x, const Vec& v) const override;
  Point degeneracy(int level, int j, const Point& x) const override;
  Vec tangent_degeneracy(int level, int j, const Point& x, const Vec& v) const override;
  Point base_point(int level) const override;
  Mat tangent_constraints(int level, const Point& x) const override;
  bool has_variation(int level) const override { return level < 2; }
  Point vary(int level, const Point& x, const Vec& u, double eps) const override;
  Vec bracket(int level, const Vec& u, const Vec& v) const override;
  Vec relative_log(int level, const Point& x, const Point& y) const override;
  Point random_point(int level, Rng& rng) const override;

  const ManinTriple& triple() const { return *t_; }
  std::shared_ptr<const ManinTriple> triple_ptr() const { return t_; }
  static GammaElement gamma_part(const Point& lambda) { return {lambda[1], lambda[2], lambda[3], lambda[4]}; }

 private:
  std::shared_ptr<const ManinTriple> t_;
};

/// omega-bar = pr^* omega^h as a 2-shifted 2-form.
ShiftedForm bar_omega(std::shared_ptr<const ManinModel> model);
/// beta = <theta^l_{H_-}, theta^r_{H_+}> as a 1-shifted 2-form.
ShiftedForm beta_form(std::shared_ptr<const ManinModel> model);
/// The value of the IM pairing claimed in the paper's computation: -2<v~,w> - 2<w~,v>.
double manin_claimed_pairing(const ManinTriple& t, const Vec& v, const Vec& w);

/// Phi: (a,h) -> a h, lambda -> (a3 h3, a1 h1).
class PhiMap : public SimplicialMap {
 public:
  PhiMap(std::shared_ptr<const ManinModel> model, std::shared_ptr<const NerveModel> nerve);
  ModelPtr source() const override { return m_; }
  ModelPtr target() const override { return nerve_; }
  Point map(int level, const Point& x) const override;
  Vec tangent_map(int level, const Point& x, const Vec& v) const override;

 private:
  Vec slot(const Mat& h, const Vec& vm, const Vec& vp) const;
  std::shared_ptr<const ManinModel> m_;
  std::shared_ptr<const NerveModel> nerve_;
};

}  // namespace sskit
