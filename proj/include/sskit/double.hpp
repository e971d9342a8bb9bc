#pragma once

#include "sskit/forms.hpp"
#include "sskit/loop.hpp"
#include "sskit/nerve.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace sskit {

/// Bisimplicial manifold G_{j,i}: j vertical, i horizontal. column(j) is the
/// simplicial model i -> G_{j,i} with horizontal structure maps, row(i) is
/// j -> G_{j,i} with vertical ones. Both use the same point/tangent layout.
class BisimplicialModel {
 public:
  virtual ~BisimplicialModel() = default;
  virtual std::string name() const = 0;
  virtual int top_vertical() const = 0;
  virtual int top_horizontal() const = 0;
  virtual ModelPtr column(int j) const = 0;
  virtual ModelPtr row(int i) const = 0;

  Point random_point(int j, int i, Rng& rng) const { return column(j)->random_point(i, rng); }
  Vec random_tangent(int j, int i, const Point& x, Rng& rng) const { return column(j)->random_tangent(i, x, rng); }
};
using DoubleModelPtr = std::shared_ptr<const BisimplicialModel>;

class BisimplicialMap {
 public:
  virtual ~BisimplicialMap() = default;
  virtual DoubleModelPtr source() const = 0;
  virtual DoubleModelPtr target() const = 0;
  virtual Point map(int j, int i, const Point& x) const = 0;
  virtual Vec tangent_map(int j, int i, const Point& x, const Vec& v) const = 0;
};
using DoubleMapPtr = std::shared_ptr<const BisimplicialMap>;

/// (q,p)-shifted k-form: alpha_{j,i} has degree k + p + q - i - j. Missing components are zero.
struct DoubleShiftedForm {
  int q = 0, p = 0, k = 0;
  DoubleModelPtr model;
  std::map<std::pair<int, int>, Evaluator> comps;

  int degree(int j, int i) const { return k + p + q - i - j; }
  bool has(int j, int i) const { return comps.count({j, i}) > 0; }
  double eval(int j, int i, const Point& x, const std::vector<Vec>& v) const;
};

DoubleShiftedForm double_zero(DoubleModelPtr model, int q, int p, int k);
/// a + c*b; same model, same total degree k + p + q (components are added by bidegree).
DoubleShiftedForm double_add(const DoubleShiftedForm& a, const DoubleShiftedForm& b, double c = 1.0);
DoubleShiftedForm double_scale(const DoubleShiftedForm& a, double c);
DoubleShiftedForm double_pullback(const DoubleShiftedForm& a, DoubleMapPtr f);

/// delta^h: a on G_{j,i-1} -> G_{j,i}; delta^v: a on G_{j-1,i} -> G_{j,i}.
Evaluator delta_h_evaluator(DoubleModelPtr model, int j, int i, Evaluator a);
Evaluator delta_v_evaluator(DoubleModelPtr model, int j, int i, Evaluator a);

/// D~ = delta^h + (-1)^i delta^v + (-1)^{i+j} d, i and j of the output component.
DoubleShiftedForm triple_D(const DoubleShiftedForm& a, FdConfig cfg = {});

// ---------------------------------------------------------------------------

/// G_{j,i} = G^i for every j: horizontal nerve, vertical unit groupoid.
class GroupDouble : public BisimplicialModel {
 public:
  GroupDouble(AlgebraPtr alg, int top_horizontal = 4, int top_vertical = 2);
  std::string name() const override { return "double(" + nerve_->name() + ")"; }
  int top_vertical() const override { return top_v_; }
  int top_horizontal() const override { return nerve_->top_level(); }
  ModelPtr column(int j) const override;
  ModelPtr row(int i) const override;
  std::shared_ptr<const NerveModel> nerve() const { return nerve_; }

 private:
  std::shared_ptr<const NerveModel> nerve_;
  int top_v_;
  std::vector<ModelPtr> rows_;
};

/// Omega G => P_e G with pointwise horizontal products. Paths use M cells on [0,1],
/// loops 2M cells. Level j = 0 is P_e G, j = 1 is Omega G, j = 2 is composable
/// pairs (tau_1, tau_2) with tau_1(t/2) = tau_2(1 - t/2), stored as two loop blocks.
/// Within a block the samples of the i factors are interleaved (sample-major).
class LoopDouble : public BisimplicialModel {
 public:
  LoopDouble(AlgebraPtr alg, int m, int top_horizontal = 4);
  std::string name() const override;
  int top_vertical() const override { return 2; }
  int top_horizontal() const override { return nerve_->top_level(); }
  ModelPtr column(int j) const override { return columns_.at(j); }
  ModelPtr row(int i) const override { return rows_.at(i); }

  int half_cells() const { return m_; }
  std::shared_ptr<const NerveModel> nerve() const { return nerve_; }
  std::shared_ptr<const PathSpaceModel> paths() const { return paths_; }
  std::shared_ptr<const PathSpaceModel> loops() const { return loops_; }

 private:
  int m_;
  std::shared_ptr<const NerveModel> nerve_;
  std::shared_ptr<const PathSpaceModel> paths_, loops_;
  std::vector<ModelPtr> columns_, rows_;
};

/// ev_{0,i}: gamma -> gamma(1); ev_{1,i}: tau -> tau(1/2); ev_{2,i}: (tau_1, tau_2) -> tau_1(1/2).
class DoubleEvMap : public BisimplicialMap {
 public:
  DoubleEvMap(std::shared_ptr<const LoopDouble> loops, std::shared_ptr<const GroupDouble> group);
  DoubleModelPtr source() const override { return src_; }
  DoubleModelPtr target() const override { return dst_; }
  Point map(int j, int i, const Point& x) const override;
  Vec tangent_map(int j, int i, const Point& x, const Vec& v) const override;

 private:
  std::shared_ptr<const LoopDouble> src_;
  std::shared_ptr<const GroupDouble> dst_;
};

/// Vertical unit u(gamma)(t) = gamma(2t) on [0,1/2], gamma(2-2t) on [1/2,1] (grid indices).
Point loop_unit(const Point& gamma, int m, int width);
/// Vertical product: tau_2 on [0,1/2], tau_1 on [1/2,1].
Point loop_compose(const Point& tau1, const Point& tau2, int m, int width);

/// eta((tau_1,tau_2); (a_1,a_2)) = int <tau_2' tau_2^{-1}, a-hat_1>: per cell the
/// right-trivialized increment log(tau_2[k+1] tau_2[k]^{-1}) against the cell average of a-hat_1.
/// x and a in the G_{1,2} layout.
double eta_form(const LieAlgebra& alg, int cells, const Point& x, const Vec& a);
/// alpha = int <tau-hat', a-hat> on a loop, with node velocities averaged from the two
/// adjacent one-step logarithms (trapezoid weights).
double loop_alpha(const LieAlgebra& alg, const Point& tau, const Vec& a);

/// Omega_{..}: Omega at (0,2), -Theta at (0,1); (0,2)-shifted 2-form.
DoubleShiftedForm big_omega_double(std::shared_ptr<const GroupDouble> g);
/// omega_{..}: Segal omega at (1,1), -eta at (1,2); (1,2)-shifted 1-form.
DoubleShiftedForm segal_double(std::shared_ptr<const LoopDouble> l);
/// alpha_{..}: -alpha at (1,1), -tr(Omega) at (0,2), -tr(Theta) at (0,1); (1,2)-shifted 0-form.
DoubleShiftedForm alpha_double(std::shared_ptr<const LoopDouble> l);

struct ComponentResidual {
  int j = 0, i = 0;
  std::string label;
  double residual = 0.0;
  bool exact = false;  // identity holds exactly on the grid
};

/// Componentwise residuals of -omega_{..} - 1/2 ev^* Omega_{..} - D~(1/2 alpha_{..})
/// on all bidegrees j <= 2, i <= 3.
std::vector<ComponentResidual> double_ev_residuals(std::shared_ptr<const LoopDouble> l, int samples,
                                                   std::uint64_t seed, FdConfig cfg = {});

}  // namespace sskit
