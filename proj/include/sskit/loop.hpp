#pragma once

#include "sskit/forms.hpp"
#include "sskit/nerve.hpp"

namespace sskit {

/// Grid model of the path/loop Lie 2-group. Level 1: based paths on R+1
/// samples; level 2: based loops on 3R+1 samples; level 3: three glued loops
/// (tau_0, tau_1, tau_2) stored back to back. R must be a multiple of 6.
class LoopModel : public SimplicialModel {
 public:
  LoopModel(AlgebraPtr alg, int resolution);
  std::string name() const override { return "loop(" + alg_->name() + ")"; }
  int top_level() const override { return 3; }
  int tangent_dim(int level) const override;
  Point face(int level, int i, const Point& x) const override;
  Vec tangent_face(int level, int i, const Point& x, const Vec& v) const override;
  Point degeneracy(int level, int j, const Point& x) const override;
  Vec tangent_degeneracy(int level, int j, const Point& x, const Vec& v) const override;
  Point base_point(int level) const override;
  Mat tangent_constraints(int level, const Point& x) const override;
  bool has_variation(int) const override { return true; }
  Point vary(int level, const Point& x, const Vec& u, double eps) const override;
  Vec bracket(int level, const Vec& u, const Vec& v) const override;
  Vec relative_log(int level, const Point& x, const Point& y) const override;
  /// Smooth fixtures: Fourier charts on levels 1-2, glued smooth thirds on level 3.
  Point random_point(int level, Rng& rng) const override;
  Vec random_tangent(int level, const Point& x, Rng& rng) const override;

  const LieAlgebra& algebra() const { return *alg_; }
  AlgebraPtr algebra_ptr() const { return alg_; }
  int resolution() const { return r_; }
  int loop_cells() const { return 3 * r_; }
  /// Max violation of the level-3 gluing conditions (samplewise, matrix norm).
  double gluing_residual(const Point& x) const;

 private:
  int samples(int level) const;
  void check(int level) const;
  Point loop_face(int i, const Point& tau) const;
  Vec loop_tangent_face(int i, const Point& tau, const Vec& a) const;
  Point path_degeneracy(int j, const Point& g) const;
  Vec path_tangent_degeneracy(int j, const Vec& u) const;
  Point tetra_d3(const Point& x) const;
  Vec tetra_tangent_d3(const Point& x, const Vec& a) const;
  AlgebraPtr alg_;
  int r_;
};

/// Segal's form: periodic central differences of a-hat and trapezoid quadrature.
double segal_form(const LieAlgebra& alg, int cells, const Vec& a, const Vec& b);
/// omega^P = 1/2 int <u',v> - <u,v'> with per-cell differences and averages.
double omega_p(const LieAlgebra& alg, int cells, const Vec& u, const Vec& v);
/// alpha^P = int <gamma-hat, u-hat>; gamma-hat from logarithms of the one-step increments.
double alpha_p(const LieAlgebra& alg, const Point& gamma, const Vec& u);

/// omega_bullet = omega + 0 + 0 (2-shifted 2-form, level 2 only).
ShiftedForm segal_bullet(std::shared_ptr<const LoopModel> loop);
/// omega^P_bullet = omega^P + 0 (1-shifted 2-form, level 1 only).
ShiftedForm omega_p_bullet(std::shared_ptr<const LoopModel> loop);
Evaluator alpha_p_evaluator(std::shared_ptr<const LoopModel> loop);

/// ev: loop model -> nerve, levels 0..3.
class EvMap : public SimplicialMap {
 public:
  EvMap(std::shared_ptr<const LoopModel> loop, std::shared_ptr<const NerveModel> nerve);
  ModelPtr source() const override { return loop_; }
  ModelPtr target() const override { return nerve_; }
  Point map(int level, const Point& x) const override;
  Vec tangent_map(int level, const Point& x, const Vec& v) const override;

 private:
  std::shared_ptr<const LoopModel> loop_;
  std::shared_ptr<const NerveModel> nerve_;
};

/// tr(Theta) - d alpha^P + 2 omega^P at a level-1 point.
double brylinski_residual(std::shared_ptr<const LoopModel> loop, const Point& gamma, const Vec& u, const Vec& v,
                          FdConfig cfg = {});

}  // namespace sskit
