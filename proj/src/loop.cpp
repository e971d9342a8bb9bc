#include "sskit/loop.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sskit {

namespace {

Vec slot(const Vec& v, int j, int n) { return v.segment(j * n, n); }

// Smooth group segment from a to b on m cells.
std::vector<Mat> group_segment(const LieAlgebra& alg, const Mat& a, const Mat& b, int m, Rng& rng) {
  const Vec l = alg.log(a.inverse() * b);
  const Mat c = rng.normal_mat(alg.dim(), 3, 0.2);
  std::vector<Mat> out;
  for (int k = 0; k <= m; ++k) {
    const double s = static_cast<double>(k) / m;
    Vec x = s * l;
    for (int q = 1; q <= 3; ++q) x += c.col(q - 1) * std::sin(std::numbers::pi * q * s) / q;
    out.push_back(a * alg.exp(x));
  }
  return out;
}

std::vector<Vec> vector_segment(const Vec& a, const Vec& b, int m, Rng& rng) {
  const Mat c = rng.normal_mat(static_cast<int>(a.size()), 3, 0.5);
  std::vector<Vec> out;
  for (int k = 0; k <= m; ++k) {
    const double s = static_cast<double>(k) / m;
    Vec x = a + s * (b - a);
    for (int q = 1; q <= 3; ++q) x += c.col(q - 1) * std::sin(std::numbers::pi * q * s) / q;
    out.push_back(x);
  }
  return out;
}

}  // namespace

LoopModel::LoopModel(AlgebraPtr alg, int resolution) : alg_(std::move(alg)), r_(resolution) {
  if (!alg_) throw std::invalid_argument("loop: null algebra");
  if (r_ < 6 || r_ % 6 != 0) throw std::invalid_argument("loop: resolution must be a positive multiple of 6");
}

int LoopModel::samples(int level) const {
  switch (level) {
    case 0: return 0;
    case 1: return r_ + 1;
    case 2: return 3 * r_ + 1;
    case 3: return 3 * (3 * r_ + 1);
  }
  throw std::out_of_range("loop: level " + std::to_string(level));
}

void LoopModel::check(int level) const { samples(level); }

int LoopModel::tangent_dim(int level) const { return samples(level) * alg_->dim(); }

Point LoopModel::loop_face(int i, const Point& tau) const {
  const int nn = loop_cells();
  Point out(r_ + 1);
  const Mat inv = tau[r_].inverse();
  for (int j = 0; j <= r_; ++j) {
    if (i == 0) out[j] = tau[j];
    else if (i == 1) out[j] = tau[nn - j];
    else out[j] = tau[r_ + j] * inv;
  }
  return out;
}

Vec LoopModel::loop_tangent_face(int i, const Point& tau, const Vec& a) const {
  const int n = alg_->dim(), nn = loop_cells();
  Vec out(n * (r_ + 1));
  Mat ad;
  if (i == 2) ad = alg_->adjoint_matrix(tau[r_]);
  for (int j = 0; j <= r_; ++j) {
    if (i == 0) out.segment(j * n, n) = slot(a, j, n);
    else if (i == 1) out.segment(j * n, n) = slot(a, nn - j, n);
    else out.segment(j * n, n) = ad * (slot(a, r_ + j, n) - slot(a, r_, n));
  }
  return out;
}

Point LoopModel::path_degeneracy(int j, const Point& g) const {
  const int nn = loop_cells();
  Point out(nn + 1);
  for (int k = 0; k <= nn; ++k) {
    if (k <= r_) out[k] = j == 0 ? g[k] : alg_->identity();
    else if (k <= 2 * r_) out[k] = j == 0 ? g[r_] : g[k - r_];
    else out[k] = g[nn - k];
  }
  return out;
}

Vec LoopModel::path_tangent_degeneracy(int j, const Vec& u) const {
  const int n = alg_->dim(), nn = loop_cells();
  Vec out = Vec::Zero(n * (nn + 1));
  for (int k = 0; k <= nn; ++k) {
    if (k <= r_) {
      if (j == 0) out.segment(k * n, n) = slot(u, k, n);
    } else if (k <= 2 * r_) {
      out.segment(k * n, n) = slot(u, j == 0 ? r_ : k - r_, n);
    } else {
      out.segment(k * n, n) = slot(u, nn - k, n);
    }
  }
  return out;
}

Point LoopModel::tetra_d3(const Point& x) const {
  const int nn = loop_cells(), w = nn + 1;
  auto t = [&](int i, int k) -> const Mat& { return x[i * w + k]; };
  const Mat inv = t(0, r_).inverse();
  Point out(w);
  for (int k = 0; k <= nn; ++k) {
    if (k <= r_) out[k] = t(0, k + r_) * inv;
    else if (k <= 2 * r_) out[k] = t(2, k) * inv;
    else out[k] = t(1, 4 * r_ - k) * inv;
  }
  return out;
}

Vec LoopModel::tetra_tangent_d3(const Point& x, const Vec& a) const {
  const int n = alg_->dim(), nn = loop_cells(), w = nn + 1;
  const Mat ad = alg_->adjoint_matrix(x[r_]);
  const Vec a0r = slot(a, r_, n);
  Vec out(n * w);
  for (int k = 0; k <= nn; ++k) {
    int src;
    if (k <= r_) src = k + r_;
    else if (k <= 2 * r_) src = 2 * w + k;
    else src = w + 4 * r_ - k;
    out.segment(k * n, n) = ad * (slot(a, src, n) - a0r);
  }
  return out;
}

Point LoopModel::face(int level, int i, const Point& x) const {
  check(level);
  if (level == 0 || i < 0 || i > level) throw std::out_of_range("loop: face index out of range");
  if (level == 1) return {};
  if (level == 2) return loop_face(i, x);
  const int w = loop_cells() + 1;
  if (i == 3) return tetra_d3(x);
  return Point(x.begin() + i * w, x.begin() + (i + 1) * w);
}

Vec LoopModel::tangent_face(int level, int i, const Point& x, const Vec& v) const {
  check(level);
  if (level == 0 || i < 0 || i > level) throw std::out_of_range("loop: face index out of range");
  if (level == 1) return Vec(0);
  if (level == 2) return loop_tangent_face(i, x, v);
  const int n = alg_->dim(), w = loop_cells() + 1;
  if (i == 3) return tetra_tangent_d3(x, v);
  return v.segment(i * w * n, w * n);
}

Point LoopModel::degeneracy(int level, int j, const Point& x) const {
  check(level);
  if (level >= 3 || j < 0 || j > level) throw std::out_of_range("loop: degeneracy index out of range");
  if (level == 0) return Point(r_ + 1, alg_->identity());
  if (level == 1) return path_degeneracy(j, x);
  // Level 3 is determined by the faces d_0, d_1, d_2.
  std::vector<Point> parts;
  if (j == 0) parts = {x, x, path_degeneracy(0, loop_face(1, x))};
  else if (j == 1) parts = {path_degeneracy(0, loop_face(0, x)), x, x};
  else parts = {path_degeneracy(1, loop_face(0, x)), path_degeneracy(1, loop_face(1, x)), x};
  Point out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Vec LoopModel::tangent_degeneracy(int level, int j, const Point& x, const Vec& v) const {
  check(level);
  if (level >= 3 || j < 0 || j > level) throw std::out_of_range("loop: degeneracy index out of range");
  if (level == 0) return Vec::Zero(tangent_dim(1));
  if (level == 1) return path_tangent_degeneracy(j, v);
  std::vector<Vec> parts;
  if (j == 0) parts = {v, v, path_tangent_degeneracy(0, loop_tangent_face(1, x, v))};
  else if (j == 1) parts = {path_tangent_degeneracy(0, loop_tangent_face(0, x, v)), v, v};
  else
    parts = {path_tangent_degeneracy(1, loop_tangent_face(0, x, v)),
             path_tangent_degeneracy(1, loop_tangent_face(1, x, v)), v};
  Vec out(tangent_dim(3));
  const int w = static_cast<int>(v.size());
  for (int i = 0; i < 3; ++i) out.segment(i * w, w) = parts[i];
  return out;
}

Point LoopModel::base_point(int level) const { return Point(samples(level), alg_->identity()); }

Mat LoopModel::tangent_constraints(int level, const Point&) const {
  check(level);
  const int n = alg_->dim(), nn = loop_cells(), w = nn + 1;
  std::vector<std::pair<int, int>> eq;  // slot a = slot b (b < 0 means zero)
  if (level == 1) eq = {{0, -1}};
  if (level == 2) eq = {{0, -1}, {nn, -1}};
  if (level == 3) {
    for (int i = 0; i < 3; ++i) {
      eq.push_back({i * w, -1});
      eq.push_back({i * w + nn, -1});
    }
    for (int j = 0; j <= r_; ++j) {
      eq.push_back({j, w + j});
      eq.push_back({2 * r_ + j, 2 * w + r_ - j});
      eq.push_back({w + 2 * r_ + j, 2 * w + 2 * r_ + j});
    }
  }
  Mat c = Mat::Zero(n * static_cast<int>(eq.size()), tangent_dim(level));
  for (size_t q = 0; q < eq.size(); ++q) {
    const int row = static_cast<int>(q) * n;
    c.block(row, eq[q].first * n, n, n) = Mat::Identity(n, n);
    if (eq[q].second >= 0) c.block(row, eq[q].second * n, n, n) -= Mat::Identity(n, n);
  }
  return c;
}

double LoopModel::gluing_residual(const Point& x) const {
  const int nn = loop_cells(), w = nn + 1;
  double r = 0.0;
  const Mat e = alg_->identity();
  for (int i = 0; i < 3; ++i) r = std::max({r, (x[i * w] - e).norm(), (x[i * w + nn] - e).norm()});
  for (int j = 0; j <= r_; ++j) {
    r = std::max(r, (x[j] - x[w + j]).norm());
    r = std::max(r, (x[2 * r_ + j] - x[2 * w + r_ - j]).norm());
    r = std::max(r, (x[w + 2 * r_ + j] - x[2 * w + 2 * r_ + j]).norm());
  }
  return r;
}

Point LoopModel::vary(int level, const Point& x, const Vec& u, double eps) const {
  const int n = alg_->dim();
  Point y = x;
  for (size_t k = 0; k < x.size(); ++k) y[k] = x[k] * alg_->exp(eps * slot(u, static_cast<int>(k), n));
  (void)level;
  return y;
}

Vec LoopModel::bracket(int level, const Vec& u, const Vec& v) const {
  const int n = alg_->dim(), s = samples(level);
  Vec out(n * s);
  for (int k = 0; k < s; ++k) out.segment(k * n, n) = alg_->bracket(slot(u, k, n), slot(v, k, n));
  return out;
}

Vec LoopModel::relative_log(int level, const Point& x, const Point& y) const {
  const int n = alg_->dim(), s = samples(level);
  Vec out(n * s);
  for (int k = 0; k < s; ++k) out.segment(k * n, n) = alg_->log(x[k].inverse() * y[k]);
  return out;
}

Point LoopModel::random_point(int level, Rng& rng) const {
  check(level);
  const int n = alg_->dim(), nn = loop_cells();
  if (level == 0) return {};
  if (level < 3) {
    const int cells = level == 1 ? r_ : nn;
    Vec a = smooth_tangent_samples(cells, n, level == 1 ? PathKind::Based : PathKind::Loop, rng, 0.3);
    Point out;
    for (int k = 0; k <= cells; ++k) out.push_back(alg_->exp(slot(a, k, n)));
    return out;
  }
  const Mat e = alg_->identity();
  const Mat p1 = alg_->random_element(rng, 0.3), p2 = alg_->random_element(rng, 0.3);
  const Mat q = alg_->random_element(rng, 0.3);
  auto s01 = group_segment(*alg_, e, p1, r_, rng);
  auto s02 = group_segment(*alg_, p1, p2, r_, rng);
  auto s03 = group_segment(*alg_, p2, e, r_, rng);
  auto s12 = group_segment(*alg_, p1, q, r_, rng);
  auto s13 = group_segment(*alg_, q, e, r_, rng);
  auto s22 = group_segment(*alg_, p2, q, r_, rng);
  Point out(samples(3));
  const int w = nn + 1;
  for (int j = 0; j <= r_; ++j) {
    out[j] = s01[j];
    out[r_ + j] = s02[j];
    out[2 * r_ + j] = s03[j];
    out[w + j] = s01[j];
    out[w + r_ + j] = s12[j];
    out[w + 2 * r_ + j] = s13[j];
    out[2 * w + j] = s03[r_ - j];
    out[2 * w + r_ + j] = s22[j];
    out[2 * w + 2 * r_ + j] = s13[j];
  }
  return out;
}

Vec LoopModel::random_tangent(int level, const Point&, Rng& rng) const {
  check(level);
  const int n = alg_->dim(), nn = loop_cells();
  if (level == 0) return Vec(0);
  if (level == 1) return smooth_tangent_samples(r_, n, PathKind::Based, rng);
  if (level == 2) return smooth_tangent_samples(nn, n, PathKind::Loop, rng);
  const Vec z = Vec::Zero(n);
  const Vec a1 = rng.normal_vec(n), a2 = rng.normal_vec(n), q = rng.normal_vec(n);
  auto s01 = vector_segment(z, a1, r_, rng);
  auto s02 = vector_segment(a1, a2, r_, rng);
  auto s03 = vector_segment(a2, z, r_, rng);
  auto s12 = vector_segment(a1, q, r_, rng);
  auto s13 = vector_segment(q, z, r_, rng);
  auto s22 = vector_segment(a2, q, r_, rng);
  Vec out(tangent_dim(3));
  const int w = nn + 1;
  auto put = [&](int k, const Vec& x) { out.segment(k * n, n) = x; };
  for (int j = 0; j <= r_; ++j) {
    put(j, s01[j]);
    put(r_ + j, s02[j]);
    put(2 * r_ + j, s03[j]);
    put(w + j, s01[j]);
    put(w + r_ + j, s12[j]);
    put(w + 2 * r_ + j, s13[j]);
    put(2 * w + j, s03[r_ - j]);
    put(2 * w + r_ + j, s22[j]);
    put(2 * w + 2 * r_ + j, s13[j]);
  }
  return out;
}

double segal_form(const LieAlgebra& alg, int cells, const Vec& a, const Vec& b) {
  const int n = alg.dim();
  if (a.size() != n * (cells + 1) || b.size() != a.size()) throw std::invalid_argument("segal_form: size mismatch");
  // Periodic grid 0..cells-1; the derivative carries 1/(2 dt), the quadrature dt.
  double s = 0.0;
  for (int j = 0; j < cells; ++j) {
    const int next = j + 1, prev = j == 0 ? cells - 1 : j - 1;
    s += 0.5 * alg.pair(slot(a, next, n) - slot(a, prev, n), slot(b, j, n));
  }
  return s;
}

double omega_p(const LieAlgebra& alg, int cells, const Vec& u, const Vec& v) {
  const int n = alg.dim();
  if (u.size() != n * (cells + 1) || v.size() != u.size()) throw std::invalid_argument("omega_p: size mismatch");
  double s = 0.0;
  for (int j = 0; j < cells; ++j) {
    const Vec du = slot(u, j + 1, n) - slot(u, j, n), dv = slot(v, j + 1, n) - slot(v, j, n);
    const Vec mu = 0.5 * (slot(u, j + 1, n) + slot(u, j, n)), mv = 0.5 * (slot(v, j + 1, n) + slot(v, j, n));
    s += 0.5 * (alg.pair(du, mv) - alg.pair(mu, dv));
  }
  return s;
}

double alpha_p(const LieAlgebra& alg, const Point& gamma, const Vec& u) {
  const int n = alg.dim();
  double s = 0.0;
  for (size_t j = 0; j + 1 < gamma.size(); ++j) {
    const int k = static_cast<int>(j);
    s += alg.pair(alg.log(gamma[j].inverse() * gamma[j + 1]), 0.5 * (slot(u, k, n) + slot(u, k + 1, n)));
  }
  return s;
}

ShiftedForm segal_bullet(std::shared_ptr<const LoopModel> loop) {
  ShiftedForm f = zero_form(loop, 2, 2);
  AlgebraPtr alg = loop->algebra_ptr();
  const int cells = loop->loop_cells();
  f.levels[2] = [alg, cells](const Point&, const std::vector<Vec>& v) { return segal_form(*alg, cells, v[0], v[1]); };
  return f;
}

ShiftedForm omega_p_bullet(std::shared_ptr<const LoopModel> loop) {
  ShiftedForm f = zero_form(loop, 1, 2);
  AlgebraPtr alg = loop->algebra_ptr();
  const int cells = loop->resolution();
  f.levels[1] = [alg, cells](const Point&, const std::vector<Vec>& v) { return omega_p(*alg, cells, v[0], v[1]); };
  return f;
}

Evaluator alpha_p_evaluator(std::shared_ptr<const LoopModel> loop) {
  AlgebraPtr alg = loop->algebra_ptr();
  return [alg](const Point& x, const std::vector<Vec>& v) { return alpha_p(*alg, x, v[0]); };
}

EvMap::EvMap(std::shared_ptr<const LoopModel> loop, std::shared_ptr<const NerveModel> nerve)
    : loop_(std::move(loop)), nerve_(std::move(nerve)) {
  if (nerve_->top_level() < 3) throw std::invalid_argument("ev: nerve must reach level 3");
  if (loop_->algebra().name() != nerve_->algebra().name()) throw std::invalid_argument("ev: algebra mismatch");
}

Point EvMap::map(int level, const Point& x) const {
  const int r = loop_->resolution(), w = loop_->loop_cells() + 1;
  auto quotient = [&](int off) -> Mat { return x[off + 2 * r] * x[off + r].inverse(); };
  switch (level) {
    case 0: return {};
    case 1: return {x[r]};
    case 2: return {quotient(0), x[r]};
    case 3: return {quotient(2 * w), quotient(0), x[r]};
  }
  throw std::out_of_range("ev: level " + std::to_string(level));
}

Vec EvMap::tangent_map(int level, const Point& x, const Vec& v) const {
  const LieAlgebra& alg = loop_->algebra();
  const int n = alg.dim(), r = loop_->resolution(), w = loop_->loop_cells() + 1;
  auto quotient = [&](int off) -> Vec {
    return alg.adjoint(x[off + r], slot(v, off + 2 * r, n) - slot(v, off + r, n));
  };
  Vec out(n * level);
  switch (level) {
    case 0: return out;
    case 1: return slot(v, r, n);
    case 2: out << quotient(0), slot(v, r, n); return out;
    case 3: out << quotient(2 * w), quotient(0), slot(v, r, n); return out;
  }
  throw std::out_of_range("ev: level " + std::to_string(level));
}

double brylinski_residual(std::shared_ptr<const LoopModel> loop, const Point& gamma, const Vec& u, const Vec& v,
                          FdConfig cfg) {
  AlgebraPtr alg = loop->algebra_ptr();
  auto nerve = std::make_shared<const NerveModel>(alg, 3);
  Evaluator theta = [alg](const Point&, const std::vector<Vec>& a) { return alg->cartan_3form(a[0], a[1], a[2]); };
  const double tr = transgress_evaluator(nerve, 1, theta, loop->resolution())(gamma, {u, v});
  const double da = de_rham_d(*loop, 1, alpha_p_evaluator(loop), gamma, {u, v}, cfg);
  return tr - da + 2.0 * omega_p(*alg, loop->resolution(), u, v);
}

}  // namespace sskit
