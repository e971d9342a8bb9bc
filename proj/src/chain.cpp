#include "sskit/chain.hpp"

namespace sskit {

Mat ChainComplex::d(int l) const {
  if (l <= 0 || l > top()) {
    int rows = (l <= 0) ? 0 : dims[top()];
    int cols = (l <= 0) ? (dims.empty() ? 0 : dims[0]) : 0;
    return Mat::Zero(rows, cols);
  }
  return boundary[l];
}

double ChainComplex::square_residual() const {
  double worst = 0.0;
  for (int l = 2; l <= top(); ++l) {
    Mat p = boundary[l - 1] * boundary[l];
    if (p.size()) worst = std::max(worst, p.cwiseAbs().maxCoeff());
  }
  return worst;
}

bool HomologyBasis::any_ill_conditioned() const {
  for (bool b : ill_conditioned)
    if (b) return true;
  return false;
}

HomologyBasis homology(const ChainComplex& c) {
  HomologyBasis h;
  const int n = c.top();
  h.dims.resize(n + 1);
  h.reps.resize(n + 1);
  h.ill_conditioned.assign(n + 1, false);
  for (int l = 0; l <= n; ++l) {
    const int dl = c.dims[l];
    Mat z = (l == 0) ? Mat(Mat::Identity(dl, dl)) : null_space(c.boundary[l], c.sv_cutoff);
    if (l > 0 && rank_split(c.boundary[l], c.sv_cutoff).ill_conditioned) h.ill_conditioned[l] = true;
    Mat b = (l < n) ? range_basis(c.boundary[l + 1], c.sv_cutoff) : Mat(dl, 0);
    if (l < n && rank_split(c.boundary[l + 1], c.sv_cutoff).ill_conditioned) h.ill_conditioned[l] = true;
    h.reps[l] = complement_in(z, b, c.sv_cutoff);
    h.dims[l] = static_cast<int>(h.reps[l].cols());
  }
  return h;
}

}  // namespace sskit
