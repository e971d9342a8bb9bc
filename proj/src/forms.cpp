#include "sskit/forms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sskit {

namespace {

double sgn(int p) { return (p % 2) ? -1.0 : 1.0; }

std::vector<Vec> random_tangents(const SimplicialModel& m, int level, const Point& x, int count, Rng& rng) {
  std::vector<Vec> v;
  for (int i = 0; i < count; ++i) v.push_back(m.random_tangent(level, x, rng));
  return v;
}

Point concat(const std::vector<Point>& parts) {
  Point out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

double ShiftedForm::eval(int level, const Point& x, const std::vector<Vec>& v) const {
  if (static_cast<int>(v.size()) != degree(level))
    throw std::invalid_argument("form of degree " + std::to_string(degree(level)) + " at level " +
                                std::to_string(level) + " given " + std::to_string(v.size()) + " arguments");
  auto it = levels.find(level);
  if (it == levels.end()) return 0.0;
  return it->second(x, v);
}

ShiftedForm zero_form(ModelPtr model, int m, int k) {
  ShiftedForm f;
  f.m = m;
  f.k = k;
  f.model = std::move(model);
  return f;
}

ShiftedForm add(const ShiftedForm& a, const ShiftedForm& b, double c) {
  if (a.m != b.m || a.k != b.k) throw std::invalid_argument("adding forms of different type");
  if (a.model != b.model) throw std::invalid_argument("adding forms on different models");
  ShiftedForm out = zero_form(a.model, a.m, a.k);
  for (int l = 0; l <= a.model->top_level(); ++l) {
    const bool ha = a.has(l), hb = b.has(l);
    if (ha && hb) {
      Evaluator ea = a.levels.at(l), eb = b.levels.at(l);
      out.levels[l] = [ea, eb, c](const Point& x, const std::vector<Vec>& v) { return ea(x, v) + c * eb(x, v); };
    } else if (ha) {
      out.levels[l] = a.levels.at(l);
    } else if (hb) {
      Evaluator eb = b.levels.at(l);
      out.levels[l] = [eb, c](const Point& x, const std::vector<Vec>& v) { return c * eb(x, v); };
    }
  }
  return out;
}

ShiftedForm scale(const ShiftedForm& a, double c) {
  ShiftedForm out = zero_form(a.model, a.m, a.k);
  for (const auto& [l, e] : a.levels) {
    Evaluator ee = e;
    out.levels[l] = [ee, c](const Point& x, const std::vector<Vec>& v) { return c * ee(x, v); };
  }
  return out;
}

ShiftedForm pullback(const ShiftedForm& a, MapPtr f) {
  if (f->target() != a.model) throw std::invalid_argument("pullback: map target is not the form's model");
  ShiftedForm out = zero_form(f->source(), a.m, a.k);
  for (const auto& [l, e] : a.levels) {
    Evaluator ee = e;
    const int lvl = l;
    out.levels[l] = [ee, f, lvl](const Point& x, const std::vector<Vec>& v) {
      std::vector<Vec> tv;
      for (const auto& vi : v) tv.push_back(f->tangent_map(lvl, x, vi));
      return ee(f->map(lvl, x), tv);
    };
  }
  return out;
}

double simplicial_delta(const SimplicialModel& model, int p, const Evaluator& a, const Point& x,
                        const std::vector<Vec>& v) {
  double s = 0.0;
  for (int i = 0; i <= p; ++i) {
    std::vector<Vec> tv;
    for (const auto& vi : v) tv.push_back(model.tangent_face(p, i, x, vi));
    s += sgn(i) * a(model.face(p, i, x), tv);
  }
  return s;
}

double de_rham_d(const SimplicialModel& model, int level, const Evaluator& a, const Point& x,
                 const std::vector<Vec>& v, const FdConfig& cfg) {
  if (!(cfg.h > 0.0) || cfg.h < 1e-12) throw std::invalid_argument("finite-difference step underflow");
  if (!model.has_variation(level))
    throw std::logic_error(model.name() + ": de Rham differential unavailable on level " + std::to_string(level));
  const int q = static_cast<int>(v.size());
  double s = 0.0;
  for (int i = 0; i < q; ++i) {
    std::vector<Vec> rest;
    for (int j = 0; j < q; ++j)
      if (j != i) rest.push_back(v[j]);
    const double fp = a(model.vary(level, x, v[i], cfg.h), rest);
    const double fm = a(model.vary(level, x, v[i], -cfg.h), rest);
    s += sgn(i) * (fp - fm) / (2.0 * cfg.h);
  }
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) {
      std::vector<Vec> args{model.bracket(level, v[i], v[j])};
      for (int k = 0; k < q; ++k)
        if (k != i && k != j) args.push_back(v[k]);
      s += sgn(i + j) * a(x, args);
    }
  if (!std::isfinite(s)) throw std::runtime_error("de Rham differential produced a non-finite value");
  return s;
}

Evaluator delta_evaluator(ModelPtr model, int p, Evaluator a) {
  return [model, p, a](const Point& x, const std::vector<Vec>& v) { return simplicial_delta(*model, p, a, x, v); };
}

Evaluator d_evaluator(ModelPtr model, int level, Evaluator a, FdConfig cfg) {
  return [model, level, a, cfg](const Point& x, const std::vector<Vec>& v) {
    return de_rham_d(*model, level, a, x, v, cfg);
  };
}

ShiftedForm total_D(const ShiftedForm& a, FdConfig cfg) {
  ShiftedForm out = zero_form(a.model, a.m, a.k + 1);
  const int top = std::min(a.m + 1, a.model->top_level());
  for (int p = 0; p <= top; ++p) {
    const bool hd = p >= 1 && a.has(p - 1);
    const bool hh = p <= a.m && a.has(p);
    if (!hd && !hh) continue;
    Evaluator ed = hd ? delta_evaluator(a.model, p, a.levels.at(p - 1)) : Evaluator();
    Evaluator eh = hh ? d_evaluator(a.model, p, a.levels.at(p), cfg) : Evaluator();
    const double sign = sgn(p);
    out.levels[p] = [ed, eh, sign](const Point& x, const std::vector<Vec>& v) {
      double s = 0.0;
      if (ed) s += ed(x, v);
      if (eh) s += sign * eh(x, v);
      return s;
    };
  }
  return out;
}

ClosedReport is_closed(const ShiftedForm& a, int samples, std::uint64_t seed, FdConfig cfg) {
  ClosedReport r;
  ShiftedForm d = total_D(a, cfg);
  const int top = std::min(a.m + 1, a.model->top_level());
  for (int p = 0; p <= top; ++p) {
    LevelResidual lr;
    lr.level = p;
    lr.uses_fd = p <= a.m && a.has(p);
    const int deg = d.degree(p);
    if (deg >= 0 && d.has(p)) {
      Rng rng(derive_seed(seed, "closed/" + std::to_string(p)));
      for (int s = 0; s < samples; ++s) {
        Point x = a.model->random_point(p, rng);
        auto v = random_tangents(*a.model, p, x, deg, rng);
        lr.residual = std::max(lr.residual, std::abs(d.eval(p, x, v)));
      }
    }
    (lr.uses_fd ? r.max_fd : r.max_exact) = std::max(lr.uses_fd ? r.max_fd : r.max_exact, lr.residual);
    r.levels.push_back(lr);
  }
  return r;
}

double is_normalized(const ShiftedForm& a, int samples, std::uint64_t seed) {
  double worst = 0.0;
  for (const auto& [p, e] : a.levels) {
    if (p < 1) continue;
    const int deg = a.degree(p);
    Rng rng(derive_seed(seed, "normalized/" + std::to_string(p)));
    for (int j = 0; j < p; ++j)
      for (int s = 0; s < samples; ++s) {
        Point x = a.model->random_point(p - 1, rng);
        auto v = random_tangents(*a.model, p - 1, x, deg, rng);
        std::vector<Vec> tv;
        for (const auto& vi : v) tv.push_back(a.model->tangent_degeneracy(p - 1, j, x, vi));
        worst = std::max(worst, std::abs(e(a.model->degeneracy(p - 1, j, x), tv)));
      }
  }
  return worst;
}

double alternation_residual(const ShiftedForm& a, int samples, std::uint64_t seed) {
  double worst = 0.0;
  for (const auto& [p, e] : a.levels) {
    const int deg = a.degree(p);
    if (deg < 2) continue;
    Rng rng(derive_seed(seed, "alternation/" + std::to_string(p)));
    for (int s = 0; s < samples; ++s) {
      Point x = a.model->random_point(p, rng);
      auto v = random_tangents(*a.model, p, x, deg, rng);
      const int i = rng.uniform_int(0, deg - 2);
      const int j = rng.uniform_int(i + 1, deg - 1);
      auto w = v;
      std::swap(w[i], w[j]);
      worst = std::max(worst, std::abs(e(x, v) + e(x, w)));
    }
  }
  return worst;
}

MoritaReport check_morita(const ShiftedForm& alpha, const ShiftedForm& beta, MapPtr f, MapPtr g,
                          const ShiftedForm& phi, int samples, std::uint64_t seed, FdConfig cfg) {
  if (f->source() != g->source() || phi.model != f->source())
    throw std::invalid_argument("check_morita: maps and correction form need a common source");
  if (alpha.m != beta.m || phi.m != alpha.m - 1 || alpha.k != beta.k || phi.k != alpha.k)
    throw std::invalid_argument("check_morita: incompatible form types");
  ShiftedForm lhs = add(pullback(alpha, f), pullback(beta, g), -1.0);
  ShiftedForm dphi = total_D(phi, cfg);
  // D phi has the same level degrees as alpha; relabel its type.
  dphi.m = alpha.m;
  dphi.k = alpha.k;
  ShiftedForm res = add(lhs, dphi, -1.0);
  MoritaReport r;
  ModelPtr z = phi.model;
  for (int p = 0; p <= std::min(alpha.m, z->top_level()); ++p) {
    LevelResidual lr;
    lr.level = p;
    lr.uses_fd = phi.has(p);
    const int deg = res.degree(p);
    if (deg >= 0 && res.has(p)) {
      Rng rng(derive_seed(seed, "morita/" + std::to_string(p)));
      for (int s = 0; s < samples; ++s) {
        Point x = z->random_point(p, rng);
        auto v = random_tangents(*z, p, x, deg, rng);
        lr.residual = std::max(lr.residual, std::abs(res.eval(p, x, v)));
      }
    }
    (lr.uses_fd ? r.max_fd : r.max_exact) = std::max(lr.uses_fd ? r.max_fd : r.max_exact, lr.residual);
    r.levels.push_back(lr);
  }
  return r;
}

// ---------------------------------------------------------------------------

PathSpaceModel::PathSpaceModel(ModelPtr x, int resolution, PathKind kind) : x_(std::move(x)), r_(resolution), kind_(kind) {
  if (r_ < 6) throw std::invalid_argument("path resolution must be at least 6");
}

std::string PathSpaceModel::name() const { return "paths(" + x_->name() + ")"; }

int PathSpaceModel::width(int level) const { return static_cast<int>(x_->base_point(level).size()); }

Point PathSpaceModel::sample(int level, const Point& p, int j) const {
  const int w = width(level);
  return Point(p.begin() + j * w, p.begin() + (j + 1) * w);
}

Vec PathSpaceModel::sample_tangent(int level, const Vec& v, int j) const {
  const int n = x_->tangent_dim(level);
  return v.segment(j * n, n);
}

Point PathSpaceModel::face(int level, int i, const Point& p) const {
  std::vector<Point> parts;
  for (int j = 0; j <= r_; ++j) parts.push_back(x_->face(level, i, sample(level, p, j)));
  return concat(parts);
}

Vec PathSpaceModel::tangent_face(int level, int i, const Point& p, const Vec& v) const {
  const int n = x_->tangent_dim(level - 1);
  Vec out(n * (r_ + 1));
  for (int j = 0; j <= r_; ++j)
    out.segment(j * n, n) = x_->tangent_face(level, i, sample(level, p, j), sample_tangent(level, v, j));
  return out;
}

Point PathSpaceModel::degeneracy(int level, int j, const Point& p) const {
  std::vector<Point> parts;
  for (int s = 0; s <= r_; ++s) parts.push_back(x_->degeneracy(level, j, sample(level, p, s)));
  return concat(parts);
}

Vec PathSpaceModel::tangent_degeneracy(int level, int j, const Point& p, const Vec& v) const {
  const int n = x_->tangent_dim(level + 1);
  Vec out(n * (r_ + 1));
  for (int s = 0; s <= r_; ++s)
    out.segment(s * n, n) = x_->tangent_degeneracy(level, j, sample(level, p, s), sample_tangent(level, v, s));
  return out;
}

Point PathSpaceModel::base_point(int level) const {
  std::vector<Point> parts(r_ + 1, x_->base_point(level));
  return concat(parts);
}

Mat PathSpaceModel::tangent_constraints(int level, const Point&) const {
  const int n = x_->tangent_dim(level);
  std::vector<int> pinned;
  if (kind_ != PathKind::Free) pinned.push_back(0);
  if (kind_ == PathKind::Loop) pinned.push_back(r_);
  Mat c = Mat::Zero(static_cast<int>(pinned.size()) * n, (r_ + 1) * n);
  for (size_t a = 0; a < pinned.size(); ++a) c.block(a * n, pinned[a] * n, n, n) = Mat::Identity(n, n);
  return c;
}

Point PathSpaceModel::vary(int level, const Point& p, const Vec& u, double eps) const {
  std::vector<Point> parts;
  for (int j = 0; j <= r_; ++j) parts.push_back(x_->vary(level, sample(level, p, j), sample_tangent(level, u, j), eps));
  return concat(parts);
}

Vec PathSpaceModel::bracket(int level, const Vec& u, const Vec& v) const {
  const int n = x_->tangent_dim(level);
  Vec out(u.size());
  for (int j = 0; j <= r_; ++j)
    out.segment(j * n, n) = x_->bracket(level, u.segment(j * n, n), v.segment(j * n, n));
  return out;
}

Vec smooth_tangent_samples(int resolution, int n, PathKind kind, Rng& rng, double sigma) {
  constexpr int kModes = 3;
  const double pi = std::numbers::pi;
  Mat c = rng.normal_mat(n, kModes, sigma), d = rng.normal_mat(n, kModes, sigma);
  Vec c0 = rng.normal_vec(n, sigma);
  Vec out(n * (resolution + 1));
  for (int j = 0; j <= resolution; ++j) {
    const double t = static_cast<double>(j) / resolution;
    Vec a = (kind == PathKind::Free) ? c0 : Vec(Vec::Zero(n));
    for (int k = 1; k <= kModes; ++k) {
      if (kind == PathKind::Loop)
        a += c.col(k - 1) * std::sin(2 * pi * k * t) + d.col(k - 1) * (std::cos(2 * pi * k * t) - 1.0);
      else
        a += (c.col(k - 1) * std::sin(pi * k * t) + d.col(k - 1) * (1.0 - std::cos(pi * k * t))) / k;
    }
    out.segment(j * n, n) = a;
  }
  return out;
}

Point PathSpaceModel::smooth_path(int level, const Point& x0, Rng& rng, double sigma) const {
  const int n = x_->tangent_dim(level);
  PathKind k = kind_ == PathKind::Free ? PathKind::Based : kind_;
  Vec a = smooth_tangent_samples(r_, n, k, rng, sigma);
  std::vector<Point> parts;
  for (int j = 0; j <= r_; ++j) parts.push_back(x_->vary(level, x0, a.segment(j * n, n), 1.0));
  return concat(parts);
}

Point PathSpaceModel::random_point(int level, Rng& rng) const {
  Point x0 = kind_ == PathKind::Free ? x_->random_point(level, rng) : x_->base_point(level);
  return smooth_path(level, x0, rng);
}

Vec PathSpaceModel::random_tangent(int level, const Point&, Rng& rng) const {
  return smooth_tangent_samples(r_, x_->tangent_dim(level), kind_, rng);
}

Evaluator transgress_evaluator(ModelPtr x, int level, Evaluator a, int resolution) {
  const int w = static_cast<int>(x->base_point(level).size());
  const int n = x->tangent_dim(level);
  return [x, level, a, resolution, w, n](const Point& p, const std::vector<Vec>& v) {
    double s = 0.0;
    for (int j = 0; j < resolution; ++j) {
      Point xj(p.begin() + j * w, p.begin() + (j + 1) * w);
      Point xk(p.begin() + (j + 1) * w, p.begin() + (j + 2) * w);
      Vec nu = x->relative_log(level, xj, xk);
      std::vector<Vec> args{nu};
      for (const auto& vi : v) args.push_back(0.5 * (vi.segment(j * n, n) + vi.segment((j + 1) * n, n)));
      s += a(x->vary(level, xj, nu, 0.5), args);
    }
    return s;
  };
}

ShiftedForm transgress(const ShiftedForm& a, std::shared_ptr<const PathSpaceModel> paths) {
  if (paths->inner() != a.model) throw std::invalid_argument("transgress: path space over a different model");
  ShiftedForm out = zero_form(paths, a.m, a.k - 1);
  for (const auto& [l, e] : a.levels)
    if (a.degree(l) >= 1) out.levels[l] = transgress_evaluator(a.model, l, e, paths->resolution());
  return out;
}

TransgressionReport transgression_identities(const ShiftedForm& a, std::shared_ptr<const PathSpaceModel> paths,
                                             int samples, std::uint64_t seed, FdConfig cfg) {
  TransgressionReport r;
  ModelPtr x = a.model;
  const int res = paths->resolution();
  for (const auto& [l, e] : a.levels) {
    const int deg = a.degree(l);
    if (deg < 1) continue;
    Evaluator tr = transgress_evaluator(x, l, e, res);
    Evaluator tr_d = transgress_evaluator(x, l, d_evaluator(x, l, e, cfg), res);
    Rng rng(derive_seed(seed, "transgression/d/" + std::to_string(l)));
    for (int s = 0; s < samples; ++s) {
      Point g = paths->random_point(l, rng);
      std::vector<Vec> v;
      for (int i = 0; i < deg; ++i) v.push_back(paths->random_tangent(l, g, rng));
      std::vector<Vec> v0, v1;
      for (const auto& vi : v) {
        v0.push_back(paths->sample_tangent(l, vi, 0));
        v1.push_back(paths->sample_tangent(l, vi, res));
      }
      const double lhs = tr_d(g, v);
      const double rhs = e(paths->sample(l, g, res), v1) - e(paths->sample(l, g, 0), v0) -
                         de_rham_d(*paths, l, tr, g, v, cfg);
      r.d_identity = std::max(r.d_identity, std::abs(lhs - rhs));
    }
    if (l + 1 > x->top_level()) continue;
    Evaluator tr_delta = transgress_evaluator(x, l + 1, delta_evaluator(x, l + 1, e), res);
    Rng rng2(derive_seed(seed, "transgression/delta/" + std::to_string(l)));
    for (int s = 0; s < samples; ++s) {
      Point g = paths->random_point(l + 1, rng2);
      std::vector<Vec> v;
      for (int i = 0; i < deg - 1; ++i) v.push_back(paths->random_tangent(l + 1, g, rng2));
      const double diff = tr_delta(g, v) - simplicial_delta(*paths, l + 1, tr, g, v);
      r.delta_identity = std::max(r.delta_identity, std::abs(diff));
    }
  }
  return r;
}

double fitted_order(const std::vector<double>& resolutions, const std::vector<double>& residuals) {
  const size_t n = resolutions.size();
  if (n < 2 || residuals.size() != n) throw std::invalid_argument("fitted_order needs at least two resolutions");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = std::log(resolutions[i]);
    const double y = std::log(std::max(residuals[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

}  // namespace sskit
