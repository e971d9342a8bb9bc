#pragma once

#include "sskit/linalg.hpp"

#include <vector>

namespace sskit {

/// Finite real chain complex C_0 <- C_1 <- ... <- C_N.
struct ChainComplex {
  std::vector<int> dims;
  std::vector<Mat> boundary;  // boundary[l]: dims[l-1] x dims[l] for l >= 1; boundary[0] unused
  double sv_cutoff = kRankCutoff;

  int top() const { return static_cast<int>(dims.size()) - 1; }
  /// d_l, or an empty map for l == 0 / l > top.
  Mat d(int l) const;
  double square_residual() const;
};

struct HomologyBasis {
  std::vector<int> dims;
  std::vector<Mat> reps;  // reps[l]: dims_l x h_l cycle representatives
  std::vector<bool> ill_conditioned;
  bool any_ill_conditioned() const;
};

/// Representatives span the orthogonal complement of im d_{l+1} inside ker d_l.
HomologyBasis homology(const ChainComplex& c);

}  // namespace sskit
