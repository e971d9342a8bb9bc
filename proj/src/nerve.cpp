#include "sskit/nerve.hpp"

#include <stdexcept>

namespace sskit {

NerveModel::NerveModel(AlgebraPtr alg, int top) : alg_(std::move(alg)), top_(top) {
  if (!alg_) throw std::invalid_argument("nerve: null algebra");
  if (top_ < 2) throw std::invalid_argument("nerve: top level must be >= 2");
}

void NerveModel::check(int level, int index, int max_index) const {
  if (level < 0 || level > top_ || index < 0 || index > max_index)
    throw std::out_of_range("nerve: index " + std::to_string(index) + " out of range on level " +
                            std::to_string(level));
}

Point NerveModel::face(int level, int i, const Point& x) const {
  check(level, i, level);
  if (level == 0) throw std::out_of_range("nerve: no faces on level 0");
  Point y;
  for (int k = 0; k < level; ++k) {
    if (i == 0 && k == 0) continue;
    if (i == level && k == level - 1) continue;
    if (i > 0 && i < level && k == i - 1) {
      y.push_back(x[i - 1] * x[i]);
      ++k;
      continue;
    }
    y.push_back(x[k]);
  }
  return y;
}

Vec NerveModel::tangent_face(int level, int i, const Point& x, const Vec& v) const {
  check(level, i, level);
  const int n = alg_->dim();
  Vec out(n * (level - 1));
  int slot = 0;
  for (int k = 0; k < level; ++k) {
    if (i == 0 && k == 0) continue;
    if (i == level && k == level - 1) continue;
    if (i > 0 && i < level && k == i - 1) {
      out.segment(slot * n, n) = alg_->adjoint(x[i].inverse(), v.segment(k * n, n)) + v.segment((k + 1) * n, n);
      ++slot;
      ++k;
      continue;
    }
    out.segment(slot * n, n) = v.segment(k * n, n);
    ++slot;
  }
  return out;
}

Point NerveModel::degeneracy(int level, int j, const Point& x) const {
  check(level, j, level);
  if (level >= top_) throw std::out_of_range("nerve: no degeneracy above the top level");
  Point y = x;
  y.insert(y.begin() + j, alg_->identity());
  return y;
}

Vec NerveModel::tangent_degeneracy(int level, int j, const Point&, const Vec& v) const {
  check(level, j, level);
  const int n = alg_->dim();
  Vec out = Vec::Zero(n * (level + 1));
  out.head(j * n) = v.head(j * n);
  out.tail((level - j) * n) = v.tail((level - j) * n);
  return out;
}

Point NerveModel::base_point(int level) const { return Point(level, alg_->identity()); }

Point NerveModel::vary(int level, const Point& x, const Vec& u, double eps) const {
  const int n = alg_->dim();
  Point y = x;
  for (int k = 0; k < level; ++k) y[k] = x[k] * alg_->exp(eps * u.segment(k * n, n));
  return y;
}

Vec NerveModel::bracket(int level, const Vec& u, const Vec& v) const {
  const int n = alg_->dim();
  Vec out(n * level);
  for (int k = 0; k < level; ++k) out.segment(k * n, n) = alg_->bracket(u.segment(k * n, n), v.segment(k * n, n));
  return out;
}

Vec NerveModel::relative_log(int level, const Point& x, const Point& y) const {
  const int n = alg_->dim();
  Vec out(n * level);
  for (int k = 0; k < level; ++k) out.segment(k * n, n) = alg_->log(x[k].inverse() * y[k]);
  return out;
}

Point NerveModel::random_point(int level, Rng& rng) const {
  Point x;
  for (int k = 0; k < level; ++k) x.push_back(alg_->random_element(rng));
  return x;
}

double omega_2form(const LieAlgebra& alg, const Point& gh, const Vec& v, const Vec& w) {
  const int n = alg.dim();
  const Mat ad_h = alg.adjoint_matrix(gh[1]);
  return alg.pair(v.head(n), ad_h * w.tail(n)) - alg.pair(w.head(n), ad_h * v.tail(n));
}

double omega_2form_pullback(const NerveModel& nerve, const Point& gh, const Vec& v, const Vec& w) {
  const LieAlgebra& alg = nerve.algebra();
  // d_2 keeps g, d_0 keeps h; theta^r at h needs the actual matrix tangent h.w2.
  const Mat h = nerve.face(2, 0, gh)[0];
  auto theta_l = [&](const Vec& x) { return nerve.tangent_face(2, 2, gh, x); };
  auto theta_r = [&](const Vec& x) { return alg.right_trivialize(h, h * alg.rep(nerve.tangent_face(2, 0, gh, x))); };
  return alg.pair(theta_l(v), theta_r(w)) - alg.pair(theta_l(w), theta_r(v));
}

double theta_3form(const LieAlgebra& alg, const Vec& u, const Vec& v, const Vec& w) {
  return alg.cartan_3form(u, v, w);
}

ShiftedForm scaled_omega_bullet(std::shared_ptr<const NerveModel> nerve, double c) {
  if (!nerve->algebra().has_pairing()) throw std::invalid_argument("omega_bullet: algebra has no pairing");
  ShiftedForm f;
  f.m = 2;
  f.k = 2;
  f.model = nerve;
  AlgebraPtr alg = nerve->algebra_ptr();
  f.levels[2] = [alg, c](const Point& x, const std::vector<Vec>& v) { return c * omega_2form(*alg, x, v[0], v[1]); };
  f.levels[1] = [alg, c](const Point&, const std::vector<Vec>& v) {
    return -c * theta_3form(*alg, v[0], v[1], v[2]);
  };
  return f;
}

ShiftedForm omega_bullet(std::shared_ptr<const NerveModel> nerve) { return scaled_omega_bullet(std::move(nerve), 1.0); }

Mat van_est_pairing(const NerveModel& nerve) {
  const LieAlgebra& alg = nerve.algebra();
  const int n = alg.dim();
  const Point e = nerve.base_point(2);
  Mat ve(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Vec w0 = Vec::Zero(2 * n), v0 = Vec::Zero(2 * n);
      w0(b) = 1.0;      // (w, 0)
      v0(n + a) = 1.0;  // (0, v)
      ve(a, b) = -omega_2form(alg, e, w0, v0);
    }
  return ve;
}

ShiftedForm random_nerve_gauge(std::shared_ptr<const NerveModel> nerve, Rng& rng) {
  const int n = nerve->algebra().dim();
  Mat b = rng.normal_mat(n, n), c = rng.normal_mat(n, n);
  b = b - Mat(b.transpose());
  c = 0.5 * (c - Mat(c.transpose()));
  ShiftedForm f = zero_form(nerve, 1, 2);
  f.levels[1] = [b, c](const Point& x, const std::vector<Vec>& v) {
    const Mat& g = x.at(0);
    const double t = g.trace() - static_cast<double>(g.rows());
    return v.at(0).dot((b + t * c) * v.at(1));
  };
  return f;
}

}  // namespace sskit
