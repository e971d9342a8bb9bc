#pragma once

#include "sskit/forms.hpp"
#include "sskit/lie.hpp"
#include "sskit/model.hpp"

#include <memory>

namespace sskit {

using AlgebraPtr = std::shared_ptr<const LieAlgebra>;

/// Nerve of a matrix group: level p holds (g_1..g_p), tangents are p stacked
/// left-trivialized vectors.
class NerveModel : public SimplicialModel {
 public:
  explicit NerveModel(AlgebraPtr alg, int top = 4);
  std::string name() const override { return "nerve(" + alg_->name() + ")"; }
  int top_level() const override { return top_; }
  int tangent_dim(int level) const override { return level * alg_->dim(); }
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

  const LieAlgebra& algebra() const { return *alg_; }
  AlgebraPtr algebra_ptr() const { return alg_; }

 private:
  void check(int level, int index, int max_index) const;
  AlgebraPtr alg_;
  int top_;
};

/// Omega_{(g,h)}(V, W) = <v1, Ad_h w2> - <w1, Ad_h v2> on left-trivialized inputs.
double omega_2form(const LieAlgebra& alg, const Point& gh, const Vec& v, const Vec& w);
/// Same form assembled as <d_2^* theta^l, d_0^* theta^r> from the model's tangent faces.
double omega_2form_pullback(const NerveModel& nerve, const Point& gh, const Vec& v, const Vec& w);
/// Theta_g(u, v, w) = <u, [v, w]>.
double theta_3form(const LieAlgebra& alg, const Vec& u, const Vec& v, const Vec& w);

/// Omega - Theta as a 2-shifted 2-form on the nerve.
ShiftedForm omega_bullet(std::shared_ptr<const NerveModel> nerve);
/// c * (Omega - Theta).
ShiftedForm scaled_omega_bullet(std::shared_ptr<const NerveModel> nerve, double c);

/// Random smooth 1-shifted 2-form: phi_1(g; u, v) = u^T (B + tr(g - 1) C) v with B, C antisymmetric,
/// phi_0 = 0.
ShiftedForm random_nerve_gauge(std::shared_ptr<const NerveModel> nerve, Rng& rng);

/// VE(v, w) = -Omega_{(e,e)}((w,0),(0,v)) over the basis.
Mat van_est_pairing(const NerveModel& nerve);

}  // namespace sskit
