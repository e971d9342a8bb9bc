#include "sskit/model.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace sskit {

Mat SimplicialModel::tangent_constraints(int level, const Point&) const { return Mat(0, tangent_dim(level)); }

Point SimplicialModel::vary(int level, const Point&, const Vec&, double) const {
  throw std::logic_error(name() + ": no exponential variation on level " + std::to_string(level));
}

Vec SimplicialModel::bracket(int level, const Vec&, const Vec&) const {
  throw std::logic_error(name() + ": no field bracket on level " + std::to_string(level));
}

Vec SimplicialModel::relative_log(int level, const Point&, const Point&) const {
  throw std::logic_error(name() + ": no relative logarithm on level " + std::to_string(level));
}

Vec SimplicialModel::random_tangent(int level, const Point& x, Rng& rng) const {
  Mat b = tangent_basis(level, x);
  return b * rng.normal_vec(static_cast<int>(b.cols()));
}

Mat SimplicialModel::tangent_face_matrix(int level, int i, const Point& x) const {
  const int n = tangent_dim(level);
  Mat m(tangent_dim(level - 1), n);
  for (int c = 0; c < n; ++c) m.col(c) = tangent_face(level, i, x, Vec::Unit(n, c));
  return m;
}

Mat SimplicialModel::tangent_degeneracy_matrix(int level, int j, const Point& x) const {
  const int n = tangent_dim(level);
  Mat m(tangent_dim(level + 1), n);
  for (int c = 0; c < n; ++c) m.col(c) = tangent_degeneracy(level, j, x, Vec::Unit(n, c));
  return m;
}

Mat SimplicialModel::tangent_basis(int level, const Point& x) const {
  Mat c = tangent_constraints(level, x);
  const int n = tangent_dim(level);
  if (c.rows() == 0) return Mat::Identity(n, n);
  return null_space(c);
}

Mat SimplicialMap::tangent_matrix(int level, const Point& x) const {
  const int n = source()->tangent_dim(level);
  Mat m(target()->tangent_dim(level), n);
  for (int c = 0; c < n; ++c) m.col(c) = tangent_map(level, x, Vec::Unit(n, c));
  return m;
}

LinearModel::LinearModel(std::shared_ptr<const SimplicialVectorSpace> v) : v_(std::move(v)) {}

int LinearModel::top_level() const { return v_->top(); }
int LinearModel::tangent_dim(int level) const { return v_->dims.at(level); }

Point LinearModel::face(int level, int i, const Point& x) const { return {v_->d(level, i) * x[0]}; }
Vec LinearModel::tangent_face(int level, int i, const Point&, const Vec& v) const { return v_->d(level, i) * v; }
Point LinearModel::degeneracy(int level, int j, const Point& x) const { return {v_->s(level, j) * x[0]}; }
Vec LinearModel::tangent_degeneracy(int level, int j, const Point&, const Vec& v) const {
  return v_->s(level, j) * v;
}
Point LinearModel::base_point(int level) const { return {Mat::Zero(v_->dims.at(level), 1)}; }
Point LinearModel::vary(int, const Point& x, const Vec& u, double eps) const { return {x[0] + eps * Mat(u)}; }
Vec LinearModel::bracket(int level, const Vec&, const Vec&) const { return Vec::Zero(tangent_dim(level)); }
Vec LinearModel::relative_log(int, const Point& x, const Point& y) const { return y[0].col(0) - x[0].col(0); }
Point LinearModel::random_point(int level, Rng& rng) const {
  return {Mat(rng.normal_vec(v_->dims.at(level)))};
}

namespace {

double point_defect(const Point& a, const Point& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols()) return std::numeric_limits<double>::infinity();
    if (a[i].size()) m = std::max(m, (a[i] - b[i]).cwiseAbs().maxCoeff());
  }
  return m;
}

double vec_defect(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

double constraint_defect(const SimplicialModel& m, int level, const Point& x, const Vec& v) {
  const Mat c = m.tangent_constraints(level, x);
  return c.rows() ? (c * v).cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

IdentityResidual simplicial_identity_residual(const SimplicialModel& m, int samples, std::uint64_t seed) {
  Rng rng(seed);
  IdentityResidual r;
  const int top = m.top_level();
  auto pt = [&](double d) { r.points = std::max(r.points, d); };
  auto tg = [&](double d) { r.tangents = std::max(r.tangents, d); };
  auto cs = [&](double d) { r.constraints = std::max(r.constraints, d); };
  for (int s = 0; s < samples; ++s) {
    for (int l = 0; l <= top; ++l) {
      const Point x = m.random_point(l, rng);
      const Vec v = m.random_tangent(l, x, rng);
      // d_i d_j = d_{j-1} d_i for i < j
      for (int j = 1; l >= 2 && j <= l; ++j)
        for (int i = 0; i < j; ++i) {
          const Point xj = m.face(l, j, x), xi = m.face(l, i, x);
          pt(point_defect(m.face(l - 1, i, xj), m.face(l - 1, j - 1, xi)));
          tg(vec_defect(m.tangent_face(l - 1, i, xj, m.tangent_face(l, j, x, v)),
                        m.tangent_face(l - 1, j - 1, xi, m.tangent_face(l, i, x, v))));
        }
      for (int i = 0; l >= 1 && i <= l; ++i)
        cs(constraint_defect(m, l - 1, m.face(l, i, x), m.tangent_face(l, i, x, v)));
      if (l == top) continue;
      for (int j = 0; j <= l; ++j) {
        const Point y = m.degeneracy(l, j, x);
        const Vec w = m.tangent_degeneracy(l, j, x, v);
        cs(constraint_defect(m, l + 1, y, w));
        for (int i = 0; i <= l + 1; ++i) {
          const Point z = m.face(l + 1, i, y);
          const Vec tz = m.tangent_face(l + 1, i, y, w);
          Point e;
          Vec te;
          if (i < j) {
            const Point f = m.face(l, i, x);
            e = m.degeneracy(l - 1, j - 1, f);
            te = m.tangent_degeneracy(l - 1, j - 1, f, m.tangent_face(l, i, x, v));
          } else if (i == j || i == j + 1) {
            e = x;
            te = v;
          } else {
            const Point f = m.face(l, i - 1, x);
            e = m.degeneracy(l - 1, j, f);
            te = m.tangent_degeneracy(l - 1, j, f, m.tangent_face(l, i - 1, x, v));
          }
          pt(point_defect(z, e));
          tg(vec_defect(tz, te));
        }
        // s_i s_j = s_{j+1} s_i for i <= j
        for (int i = 0; l + 2 <= top && i <= j; ++i) {
          const Point a = m.degeneracy(l + 1, i, y);
          const Point xi = m.degeneracy(l, i, x);
          pt(point_defect(a, m.degeneracy(l + 1, j + 1, xi)));
          tg(vec_defect(m.tangent_degeneracy(l + 1, i, y, w),
                        m.tangent_degeneracy(l + 1, j + 1, xi, m.tangent_degeneracy(l, i, x, v))));
        }
      }
    }
  }
  return r;
}

IdentityResidual map_commutation_residual(const SimplicialMap& f, int samples, std::uint64_t seed) {
  Rng rng(seed);
  IdentityResidual r;
  const SimplicialModel& a = *f.source();
  const SimplicialModel& b = *f.target();
  const int top = std::min(a.top_level(), b.top_level());
  for (int s = 0; s < samples; ++s) {
    for (int l = 0; l <= top; ++l) {
      const Point x = a.random_point(l, rng);
      const Vec v = a.random_tangent(l, x, rng);
      const Point fx = f.map(l, x);
      const Vec fv = f.tangent_map(l, x, v);
      r.constraints = std::max(r.constraints, constraint_defect(b, l, fx, fv));
      for (int i = 0; l >= 1 && i <= l; ++i) {
        const Point xi = a.face(l, i, x);
        r.points = std::max(r.points, point_defect(f.map(l - 1, xi), b.face(l, i, fx)));
        r.tangents = std::max(r.tangents, vec_defect(f.tangent_map(l - 1, xi, a.tangent_face(l, i, x, v)),
                                                     b.tangent_face(l, i, fx, fv)));
      }
      for (int j = 0; l < top && j <= l; ++j) {
        const Point y = a.degeneracy(l, j, x);
        r.points = std::max(r.points, point_defect(f.map(l + 1, y), b.degeneracy(l, j, fx)));
        r.tangents = std::max(r.tangents, vec_defect(f.tangent_map(l + 1, y, a.tangent_degeneracy(l, j, x, v)),
                                                     b.tangent_degeneracy(l, j, fx, fv)));
      }
    }
  }
  return r;
}

}  // namespace sskit
