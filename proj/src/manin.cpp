#include "sskit/manin.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sskit {

namespace {

Mat pinv(const Mat& b) { return b.completeOrthogonalDecomposition().pseudoInverse(); }

Mat select_columns(const nlohmann::json& j, int n) {
  if (j.empty()) throw std::invalid_argument("manin config: empty basis");
  if (j[0].is_number_integer()) {
    Mat b = Mat::Zero(n, static_cast<int>(j.size()));
    for (size_t c = 0; c < j.size(); ++c) {
      const int idx = j[c].get<int>();
      if (idx < 0 || idx >= n) throw std::invalid_argument("manin config: basis index out of range");
      b(idx, static_cast<int>(c)) = 1.0;
    }
    return b;
  }
  // Rows are basis vectors.
  const int k = static_cast<int>(j.size());
  Mat b(n, k);
  for (int c = 0; c < k; ++c) {
    if (static_cast<int>(j[c].size()) != n) throw std::invalid_argument("manin config: basis vector of wrong length");
    for (int r = 0; r < n; ++r) b(r, c) = j[c][r].get<double>();
  }
  return b;
}

Mat index_basis(int n, std::initializer_list<int> idx) {
  Mat b = Mat::Zero(n, static_cast<int>(idx.size()));
  int c = 0;
  for (int i : idx) b(i, c++) = 1.0;
  return b;
}

LieAlgebraSpec abelian_split_spec(int k) {
  LieAlgebraSpec s;
  s.name = "abelian-" + std::to_string(2 * k);
  s.dim = 2 * k;
  s.rep_dim = 2 * k;
  s.structure_constants.assign(static_cast<size_t>(8) * k * k * k, 0.0);
  Mat p = Mat::Zero(2 * k, 2 * k);
  p.topRightCorner(k, k) = Mat::Identity(k, k);
  p.bottomLeftCorner(k, k) = Mat::Identity(k, k);
  s.pairing = p;
  for (int i = 0; i < 2 * k; ++i) {
    Mat e = Mat::Zero(2 * k, 2 * k);
    e(i, i) = 1.0;
    s.rep.push_back(e);
  }
  return s;
}

// Matrix of x -> dexp_left(a, x) restricted to a subalgebra basis.
Mat dexp_matrix(const LieAlgebra& alg, const Vec& a, const Mat& basis) {
  Mat m(alg.dim(), basis.cols());
  for (int c = 0; c < basis.cols(); ++c) m.col(c) = alg.dexp_left(a, basis.col(c));
  return m;
}

}  // namespace

ManinTriple make_triple(AlgebraPtr alg, Mat plus, Mat minus) {
  if (!alg) throw std::invalid_argument("manin: null algebra");
  if (!alg->has_pairing()) throw std::invalid_argument("manin: algebra has no pairing");
  if (plus.rows() != alg->dim() || minus.rows() != alg->dim()) throw std::invalid_argument("manin: basis size mismatch");
  ManinTriple t;
  t.alg = std::move(alg);
  t.plus = std::move(plus);
  t.minus = std::move(minus);
  t.plus_pinv_ = pinv(t.plus);
  t.minus_pinv_ = pinv(t.minus);
  return t;
}

Vec ManinTriple::plus_coords(const Vec& x) const { return plus_pinv_ * x; }
Vec ManinTriple::minus_coords(const Vec& x) const { return minus_pinv_ * x; }

ManinTriple ManinTriple::builtin(const std::string& name) {
  if (name == "aff1-double") {
    auto alg = std::make_shared<const LieAlgebra>(LieAlgebra::builtin(name));
    return make_triple(alg, index_basis(4, {0, 1}), index_basis(4, {2, 3}));
  }
  if (name == "sl2c-iwasawa") {
    auto alg = std::make_shared<const LieAlgebra>(LieAlgebra::builtin(name));
    return make_triple(alg, index_basis(6, {0, 1, 2}), index_basis(6, {3, 4, 5}));
  }
  if (name.rfind("abelian-", 0) == 0) {
    const int n = std::stoi(name.substr(8));
    if (n <= 0 || n % 2) throw std::invalid_argument("abelian triple needs an even dimension");
    const int k = n / 2;
    auto alg = std::make_shared<const LieAlgebra>(abelian_split_spec(k));
    return make_triple(alg, Mat::Identity(n, n).leftCols(k), Mat::Identity(n, n).rightCols(k));
  }
  throw std::invalid_argument("unknown Manin triple: " + name);
}

ManinTriple ManinTriple::load(const std::string& name_or_path) {
  std::ifstream in(name_or_path);
  if (!in) return builtin(name_or_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

ManinTriple ManinTriple::parse(const std::string& json_text) {
  auto alg = std::make_shared<const LieAlgebra>(LieAlgebra::parse(json_text));
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (!j.contains("plus_basis") || !j.contains("minus_basis"))
    throw std::invalid_argument("manin config: plus_basis and minus_basis are required");
  const int n = alg->dim();
  return make_triple(alg, select_columns(j["plus_basis"], n), select_columns(j["minus_basis"], n));
}

ManinReport check_manin(const ManinTriple& t) {
  ManinReport r;
  const LieAlgebra& alg = *t.alg;
  auto closure = [&](const Mat& b) {
    const Mat proj = b * pinv(b);
    double res = 0.0;
    for (int i = 0; i < b.cols(); ++i)
      for (int j = 0; j < b.cols(); ++j) {
        const Vec c = alg.bracket(b.col(i), b.col(j));
        res = std::max(res, (c - proj * c).norm());
      }
    return res;
  };
  r.plus_closure = closure(t.plus);
  r.minus_closure = closure(t.minus);
  r.plus_isotropy = (t.plus.transpose() * alg.pairing() * t.plus).cwiseAbs().maxCoeff();
  r.minus_isotropy = (t.minus.transpose() * alg.pairing() * t.minus).cwiseAbs().maxCoeff();
  Mat both(t.dim(), t.n_plus() + t.n_minus());
  both << t.plus, t.minus;
  const Vec s = singular_values(both);
  r.complement_min_sv = both.cols() == t.dim() && s.size() ? s(s.size() - 1) / s(0) : 0.0;
  const QuadraticReport q = check_quadratic(alg);
  r.ok = q.ok && r.plus_closure <= 1e-12 && r.minus_closure <= 1e-12 && r.plus_isotropy <= 1e-12 &&
         r.minus_isotropy <= 1e-12 && both.cols() == t.dim() && r.complement_min_sv > 1e-9;
  return r;
}

namespace {

bool newton(const ManinTriple& t, const Mat& g, FactorOrder order, Vec& x, Vec& y, Factorization& out) {
  const LieAlgebra& alg = *t.alg;
  for (int it = 0; it <= 50; ++it) {
    const Vec xp = t.plus * x, ym = t.minus * y;
    const Mat ex = alg.exp(xp), ey = alg.exp(ym);
    const Mat f = order == FactorOrder::PlusMinus ? Mat(ex * ey) : Mat(ey * ex);
    Vec r;
    try {
      r = alg.log(f.inverse() * g);
    } catch (const std::domain_error&) {
      return false;
    }
    out.residual = r.norm();
    out.iterations = it;
    if (out.residual <= 1e-12 || (it == 50 && out.residual <= 1e-10)) {
      out.first = order == FactorOrder::PlusMinus ? ex : ey;
      out.second = order == FactorOrder::PlusMinus ? ey : ex;
      return true;
    }
    if (it == 50) return false;
    Mat jac(alg.dim(), t.n_plus() + t.n_minus());
    if (order == FactorOrder::PlusMinus) {
      jac << alg.adjoint_matrix(ey.inverse()) * dexp_matrix(alg, xp, t.plus), dexp_matrix(alg, ym, t.minus);
    } else {
      jac << dexp_matrix(alg, xp, t.plus), alg.adjoint_matrix(ex.inverse()) * dexp_matrix(alg, ym, t.minus);
    }
    const Vec step = jac.colPivHouseholderQr().solve(r);
    if (!step.allFinite()) return false;
    x += step.head(t.n_plus());
    y += step.tail(t.n_minus());
  }
  return false;
}

}  // namespace

Factorization factorize(const ManinTriple& t, const Mat& g, FactorOrder order) {
  const LieAlgebra& alg = *t.alg;
  Factorization out;
  Vec l;
  try {
    l = alg.log(g);
  } catch (const std::domain_error&) {
    throw std::domain_error("factorize: element outside the logarithm chart");
  }
  Vec x = t.plus_coords(l), y = t.minus_coords(l);
  if (newton(t, g, order, x, y, out)) return out;
  // Continuation along exp(s log g) from the identity.
  for (int steps = 2; steps <= 64; steps *= 2) {
    x.setZero(t.n_plus());
    y.setZero(t.n_minus());
    bool ok = true;
    for (int k = 1; k <= steps && ok; ++k) ok = newton(t, alg.exp((static_cast<double>(k) / steps) * l), order, x, y, out);
    if (ok) return out;
  }
  throw std::domain_error("factorize: Newton iteration did not converge");
}

double gamma_residual(const GammaElement& x) { return (x.h2 * x.a1 - x.a2 * x.h1).norm(); }

GammaElement gamma_complete(const ManinTriple& t, const Mat& h1, const Mat& a2) {
  Factorization f = factorize(t, a2 * h1, FactorOrder::PlusMinus);
  return {f.first, a2, f.second, h1};
}

GammaElement gamma_from_top(const ManinTriple& t, const Mat& h2, const Mat& a1) {
  Factorization f = factorize(t, h2 * a1, FactorOrder::MinusPlus);
  return {h2, f.first, a1, f.second};
}

GammaElement gamma_from_corner(const ManinTriple& t, const Mat& h2, const Mat& a2) {
  Factorization f = factorize(t, a2.inverse() * h2, FactorOrder::PlusMinus);
  return {h2, a2, f.second.inverse(), f.first};
}

GammaElement mult_h(const GammaElement& x, const GammaElement& y) { return {x.h2, x.a2 * y.a2, x.a1 * y.a1, y.h1}; }
GammaElement mult_v(const GammaElement& x, const GammaElement& y) { return {x.h2 * y.h2, x.a2, y.a1, x.h1 * y.h1}; }

namespace {

struct GammaTangent {
  Vec h2, a2, a1, h1;  // algebra coordinates
};

GammaTangent split_tangent(const ManinTriple& t, const Vec& v) {
  const int np = t.n_plus(), nm = t.n_minus();
  if (v.size() != 2 * (np + nm)) throw std::invalid_argument("gamma tangent of wrong size");
  return {t.plus * v.segment(0, np), t.minus * v.segment(np, nm), t.minus * v.segment(np + nm, nm),
          t.plus * v.segment(np + 2 * nm, np)};
}

}  // namespace

double gamma_tangent_residual(const ManinTriple& t, const GammaElement& x, const Vec& v) {
  const LieAlgebra& alg = *t.alg;
  const GammaTangent g = split_tangent(t, v);
  return (alg.adjoint(x.a1.inverse(), g.h2) + g.a1 - alg.adjoint(x.h1.inverse(), g.a2) - g.h1).norm();
}

double omega_h(const ManinTriple& t, const GammaElement& x, const Vec& v, const Vec& w) {
  const LieAlgebra& alg = *t.alg;
  const double scale = 1.0 + v.norm() + w.norm();
  if (gamma_tangent_residual(t, x, v) > 1e-8 * scale || gamma_tangent_residual(t, x, w) > 1e-8 * scale)
    throw std::invalid_argument("omega_h: argument is not tangent to Gamma");
  const GammaTangent a = split_tangent(t, v), b = split_tangent(t, w);
  const Mat ad_a1 = alg.adjoint_matrix(x.a1), ad_h1 = alg.adjoint_matrix(x.h1);
  return alg.pair(a.h2, ad_a1 * b.a1) - alg.pair(b.h2, ad_a1 * a.a1) - alg.pair(a.a2, ad_h1 * b.h1) +
         alg.pair(b.a2, ad_h1 * a.h1);
}

// ---------------------------------------------------------------------------

ManinModel::ManinModel(std::shared_ptr<const ManinTriple> t) : t_(std::move(t)) {}

int ManinModel::tangent_dim(int level) const {
  if (level < 0 || level > 2) throw std::out_of_range("manin: level out of range");
  return level == 0 ? 0 : level == 1 ? t_->dim() : 3 * t_->dim();
}

namespace {

// Offsets of (v~3, v3, v~2, v~1, v2, v1) inside a level-2 tangent.
struct Level2Layout {
  int np, nm;
  int off(int k) const {
    const int sizes[6] = {nm, np, nm, nm, np, np};
    int o = 0;
    for (int i = 0; i < k; ++i) o += sizes[i];
    return o;
  }
  int size(int k) const { return (k == 1 || k >= 4) ? np : nm; }
};

}  // namespace

Point ManinModel::face(int level, int i, const Point& x) const {
  if (level < 1 || level > 2 || i < 0 || i > level) throw std::out_of_range("manin: face index out of range");
  if (level == 1) return {};
  if (i == 0) return {x[3], x[5]};
  if (i == 1) return {x[0] * x[2], x[4] * x[5]};
  return {x[0], x[1]};
}

Vec ManinModel::tangent_face(int level, int i, const Point& x, const Vec& v) const {
  if (level < 1 || level > 2 || i < 0 || i > level) throw std::out_of_range("manin: face index out of range");
  if (level == 1) return Vec(0);
  const LieAlgebra& alg = *t_->alg;
  const Level2Layout l{t_->n_plus(), t_->n_minus()};
  auto seg = [&](int k) { return v.segment(l.off(k), l.size(k)); };
  Vec out(t_->dim());
  const int nm = t_->n_minus();
  if (i == 0) {
    out << seg(3), seg(5);
  } else if (i == 2) {
    out << seg(0), seg(1);
  } else {
    out << t_->minus_coords(alg.adjoint(x[2].inverse(), t_->minus * seg(0))) + seg(2),
        t_->plus_coords(alg.adjoint(x[5].inverse(), t_->plus * seg(4))) + seg(5);
  }
  (void)nm;
  return out;
}

Point ManinModel::degeneracy(int level, int j, const Point& x) const {
  if (level < 0 || level > 1 || j < 0 || j > level) throw std::out_of_range("manin: degeneracy index out of range");
  const Mat e = t_->alg->identity();
  if (level == 0) return {e, e};
  const Mat &a = x[0], &h = x[1];
  if (j == 0) return {e, e, a, a, e, h};
  return {a, h, e, e, h, e};
}

Vec ManinModel::tangent_degeneracy(int level, int j, const Point&, const Vec& v) const {
  if (level < 0 || level > 1 || j < 0 || j > level) throw std::out_of_range("manin: degeneracy index out of range");
  if (level == 0) return Vec::Zero(t_->dim());
  const int np = t_->n_plus(), nm = t_->n_minus();
  const Vec vm = v.head(nm), vp = v.tail(np);
  const Vec zm = Vec::Zero(nm), zp = Vec::Zero(np);
  Vec out(3 * t_->dim());
  if (j == 0) out << zm, zp, vm, vm, zp, vp;
  else out << vm, vp, zm, zm, vp, zp;
  return out;
}

Point ManinModel::base_point(int level) const {
  const int count[3] = {0, 2, 6};
  return Point(count[level], t_->alg->identity());
}

Mat ManinModel::tangent_constraints(int level, const Point& x) const {
  if (level < 2) return Mat(0, tangent_dim(level));
  const LieAlgebra& alg = *t_->alg;
  const Level2Layout l{t_->n_plus(), t_->n_minus()};
  Mat c = Mat::Zero(t_->dim(), tangent_dim(2));
  c.middleCols(l.off(1), l.size(1)) = alg.adjoint_matrix(x[3].inverse()) * t_->plus;
  c.middleCols(l.off(3), l.size(3)) = t_->minus;
  c.middleCols(l.off(2), l.size(2)) = -alg.adjoint_matrix(x[4].inverse()) * t_->minus;
  c.middleCols(l.off(4), l.size(4)) = -t_->plus;
  return c;
}

Point ManinModel::vary(int level, const Point& x, const Vec& u, double eps) const {
  if (level == 0) return x;
  if (level != 1) throw std::logic_error("manin: no exponential variation on level 2");
  const LieAlgebra& alg = *t_->alg;
  const int nm = t_->n_minus();
  return {x[0] * alg.exp(eps * (t_->minus * u.head(nm))), x[1] * alg.exp(eps * (t_->plus * u.tail(t_->n_plus())))};
}

Vec ManinModel::bracket(int level, const Vec& u, const Vec& v) const {
  if (level == 0) return Vec(0);
  if (level != 1) throw std::logic_error("manin: no field bracket on level 2");
  const LieAlgebra& alg = *t_->alg;
  const int nm = t_->n_minus(), np = t_->n_plus();
  Vec out(t_->dim());
  out << t_->minus_coords(alg.bracket(t_->minus * u.head(nm), t_->minus * v.head(nm))),
      t_->plus_coords(alg.bracket(t_->plus * u.tail(np), t_->plus * v.tail(np)));
  return out;
}

Vec ManinModel::relative_log(int level, const Point& x, const Point& y) const {
  if (level == 0) return Vec(0);
  if (level != 1) throw std::logic_error("manin: no relative logarithm on level 2");
  const LieAlgebra& alg = *t_->alg;
  Vec out(t_->dim());
  out << t_->minus_coords(alg.log(x[0].inverse() * y[0])), t_->plus_coords(alg.log(x[1].inverse() * y[1]));
  return out;
}

Point ManinModel::random_point(int level, Rng& rng) const {
  const LieAlgebra& alg = *t_->alg;
  auto rm = [&] { return alg.exp(t_->minus * rng.normal_vec(t_->n_minus(), 0.5)); };
  auto rp = [&] { return alg.exp(t_->plus * rng.normal_vec(t_->n_plus(), 0.5)); };
  if (level == 0) return {};
  if (level == 1) return {rm(), rp()};
  const Mat a3 = rm(), h1 = rp();
  const GammaElement g = gamma_complete(*t_, rp(), rm());
  return {a3, g.h2, g.a2, g.a1, g.h1, h1};
}

ShiftedForm bar_omega(std::shared_ptr<const ManinModel> model) {
  ShiftedForm f = zero_form(model, 2, 2);
  auto t = model->triple_ptr();
  const Level2Layout l{t->n_plus(), t->n_minus()};
  const int off = l.off(1), len = l.off(5) - l.off(1);
  f.levels[2] = [t, off, len](const Point& x, const std::vector<Vec>& v) {
    return omega_h(*t, ManinModel::gamma_part(x), v[0].segment(off, len), v[1].segment(off, len));
  };
  return f;
}

ShiftedForm beta_form(std::shared_ptr<const ManinModel> model) {
  ShiftedForm f = zero_form(model, 1, 2);
  auto t = model->triple_ptr();
  f.levels[1] = [t](const Point& x, const std::vector<Vec>& v) {
    const LieAlgebra& alg = *t->alg;
    const int nm = t->n_minus(), np = t->n_plus();
    const Mat ad_h = alg.adjoint_matrix(x[1]);
    return alg.pair(t->minus * v[0].head(nm), ad_h * (t->plus * v[1].tail(np))) -
           alg.pair(t->minus * v[1].head(nm), ad_h * (t->plus * v[0].tail(np)));
  };
  return f;
}

double manin_claimed_pairing(const ManinTriple& t, const Vec& v, const Vec& w) {
  const int nm = t.n_minus(), np = t.n_plus();
  const LieAlgebra& alg = *t.alg;
  return -2.0 * alg.pair(t.minus * v.head(nm), t.plus * w.tail(np)) -
         2.0 * alg.pair(t.minus * w.head(nm), t.plus * v.tail(np));
}

PhiMap::PhiMap(std::shared_ptr<const ManinModel> model, std::shared_ptr<const NerveModel> nerve)
    : m_(std::move(model)), nerve_(std::move(nerve)) {
  if (m_->triple().alg->name() != nerve_->algebra().name()) throw std::invalid_argument("Phi: algebra mismatch");
}

Point PhiMap::map(int level, const Point& x) const {
  switch (level) {
    case 0: return {};
    case 1: return {x[0] * x[1]};
    case 2: return {x[0] * x[1], x[3] * x[5]};
  }
  throw std::out_of_range("Phi: level out of range");
}

Vec PhiMap::slot(const Mat& h, const Vec& vm, const Vec& vp) const {
  const ManinTriple& t = m_->triple();
  return t.alg->adjoint(h.inverse(), t.minus * vm) + t.plus * vp;
}

Vec PhiMap::tangent_map(int level, const Point& x, const Vec& v) const {
  const ManinTriple& t = m_->triple();
  const int nm = t.n_minus(), np = t.n_plus(), n = t.dim();
  const Level2Layout l{np, nm};
  Vec out(n * level);
  switch (level) {
    case 0: return out;
    case 1: return slot(x[1], v.head(nm), v.tail(np));
    case 2:
      out << slot(x[1], v.segment(l.off(0), nm), v.segment(l.off(1), np)),
          slot(x[5], v.segment(l.off(3), nm), v.segment(l.off(5), np));
      return out;
  }
  throw std::out_of_range("Phi: level out of range");
}

}  // namespace sskit
