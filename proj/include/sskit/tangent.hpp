#pragma once

#include "sskit/chain.hpp"
#include "sskit/forms.hpp"
#include "sskit/model.hpp"
#include "sskit/simplicial.hpp"

#include <vector>

namespace sskit {

/// Tangent spaces of the model at its base points as a simplicial vector space,
/// in orthonormal coordinates of the constrained tangent spaces (`bases[l]`).
SimplicialVectorSpace linearize(const SimplicialModel& model, int max_level, std::vector<Mat>* bases = nullptr);

enum class TangentVariant { Kernel, Quotient };

struct TangentComplex {
  ChainComplex complex;
  /// embed[l]: ambient tangent coordinates of a basis of T_l (kernel variant: actual
  /// subspace; quotient variant: chosen complement representatives).
  std::vector<Mat> embed;
  TangentVariant variant = TangentVariant::Kernel;
};

/// max_level < 0 means the model's top level.
TangentComplex tangent_complex(const SimplicialModel& model, TangentVariant variant = TangentVariant::Kernel,
                               int max_level = -1);

struct RankFormulaReport {
  std::vector<int> space_dims;    // dim T K_l at the base
  std::vector<int> kernel_dims;   // brute-force kernel dims
  std::vector<int> formula_dims;  // combinatorial formula
  bool ok = false;
};
RankFormulaReport rank_formula_check(const SimplicialVectorSpace& v);
RankFormulaReport rank_formula_check(const SimplicialModel& model, int max_level = -1);

/// Shuffle pairing of v in T_{base}K_l and w in T_{base}K_{m-l} through the top component.
double im_form(const ShiftedForm& a, int l, const Vec& v, const Vec& w);
/// Matrix of im_form over the columns of V and W.
Mat im_matrix(const ShiftedForm& a, int l, const Mat& v, const Mat& w);

struct PairingBlock {
  int l = 0;
  Mat pairing;  // H_l x H_{m-l}
  double min_sv = 0.0, max_sv = 0.0;
  bool ok = false;
};

struct NondegeneracyReport {
  std::vector<int> homology_dims;
  std::vector<PairingBlock> blocks;
  double descent_residual = 0.0;         // infinitesimal multiplicativity on T
  double representative_residual = 0.0;  // change under shifting representatives by boundaries
  bool ill_conditioned = false;
  bool nondegenerate = false;
};
NondegeneracyReport nondegeneracy_check(const ShiftedForm& a, std::uint64_t seed, double rel_threshold = 1e-3,
                                        double descent_tol = 1e-6);

/// a + D phi with D phi retyped as an m-shifted 2-form.
ShiftedForm gauge_move(const ShiftedForm& a, const ShiftedForm& phi, FdConfig cfg = {});

struct AppendixEReport {
  double degenerate = 0.0;       // lambda(Ts_i u, w)
  double multiplicative = 0.0;   // lambda(du, w) + (-1)^{l+1} lambda(u, dw)
  double gauge = 0.0;            // lambda^{a + D phi} - lambda^{a} on cycles
  double gauge_homotopy = 0.0;   // lambda^{D phi}(u, w) - lambda^{phi}(du, w) - (-1)^l lambda^{phi}(u, dw)
};
/// `phi` may be null; then the gauge entries stay 0. lambda^{D phi} is only a chain
/// homotopy term on the full complex, so invariance is sampled on cycles.
AppendixEReport appendix_e_properties(const ShiftedForm& a, const ShiftedForm* phi, int samples, std::uint64_t seed);

/// Random antisymmetric A on V_level with s_j^*A = 0 for every degeneracy into V_level;
/// with `closed`, also sum_i (-1)^i d_i^*A = 0 on V_{level+1}. Throws if only A = 0 qualifies.
Mat random_normalized_bilinear(const SimplicialVectorSpace& v, int level, bool closed, Rng& rng);

/// Constant m-shifted 2-form on a linear model whose only component is a random normalized
/// closed 2-form at level m. Needs top level >= m + 1.
ShiftedForm synthetic_multiplicative_form(std::shared_ptr<const LinearModel> model, int m, Rng& rng);
/// Constant (m-1)-shifted 2-form with a random normalized component at level m-1 only.
ShiftedForm synthetic_gauge_form(std::shared_ptr<const LinearModel> model, int m, Rng& rng);

struct HypercoverLevel {
  int level = 0;
  int rank = 0;
  int horn_dim = 0;     // dim of the compatible data space W_i
  int source_dim = 0;   // dim T K_i
  bool surjective = false;
  bool injective = false;
};
struct HypercoverReport {
  std::vector<HypercoverLevel> levels;
  std::vector<int> source_homology, target_homology;
  std::vector<int> induced_rank;
  bool homology_iso = false;
  bool ok = false;  // surjective below n, bijective at n, homology iso
};
HypercoverReport hypercover_tangent_check(const SimplicialMap& f, int n);

/// max |lambda^{beta}(h, h') - lambda^{alpha}(Tf h, Tf h')| over homology representatives.
double pairing_transport_residual(const SimplicialMap& f, const ShiftedForm& beta_on_source,
                                  const ShiftedForm& alpha_on_target);

}  // namespace sskit
