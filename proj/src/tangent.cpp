#include "sskit/tangent.hpp"

#include <cmath>
#include <stdexcept>

namespace sskit {

namespace {

double sgn(int p) { return (p % 2) ? -1.0 : 1.0; }

Mat apply_cols(const Mat& b, const std::function<Vec(const Vec&)>& f, int out_dim) {
  Mat out(out_dim, b.cols());
  for (int c = 0; c < b.cols(); ++c) out.col(c) = f(b.col(c));
  return out;
}

int resolve_top(const SimplicialModel& m, int max_level) {
  return max_level < 0 ? m.top_level() : std::min(max_level, m.top_level());
}

// Boundary of the kernel-variant tangent complex in ambient coordinates.
Vec ambient_boundary(const SimplicialModel& m, int l, const Vec& u) {
  return sgn(l) * m.tangent_face(l, l, m.base_point(l), u);
}

Vec push_degeneracies(const SimplicialModel& m, int level, const std::vector<int>& idx, Vec v) {
  // idx lists the degeneracies in the order they act.
  for (int j : idx) {
    v = m.tangent_degeneracy(level, j, m.base_point(level), v);
    ++level;
  }
  return v;
}

}  // namespace

SimplicialVectorSpace linearize(const SimplicialModel& model, int max_level, std::vector<Mat>* bases) {
  const int top = resolve_top(model, max_level);
  std::vector<Mat> b(top + 1);
  std::vector<Point> base(top + 1);
  for (int l = 0; l <= top; ++l) {
    base[l] = model.base_point(l);
    b[l] = model.tangent_basis(l, base[l]);
  }
  SimplicialVectorSpace v;
  v.faces.assign(top + 1, {});
  v.degens.assign(top + 1, {});
  for (int l = 0; l <= top; ++l) v.dims.push_back(static_cast<int>(b[l].cols()));
  for (int l = 1; l <= top; ++l)
    for (int i = 0; i <= l; ++i) {
      Mat img = apply_cols(b[l], [&](const Vec& x) { return model.tangent_face(l, i, base[l], x); },
                           model.tangent_dim(l - 1));
      v.faces[l].push_back(b[l - 1].transpose() * img);
    }
  for (int l = 0; l < top; ++l)
    for (int j = 0; j <= l; ++j) {
      Mat img = apply_cols(b[l], [&](const Vec& x) { return model.tangent_degeneracy(l, j, base[l], x); },
                           model.tangent_dim(l + 1));
      v.degens[l].push_back(b[l + 1].transpose() * img);
    }
  if (bases) *bases = b;
  return v;
}

TangentComplex tangent_complex(const SimplicialModel& model, TangentVariant variant, int max_level) {
  std::vector<Mat> b;
  SimplicialVectorSpace lin = linearize(model, max_level, &b);
  TangentComplex t;
  t.variant = variant;
  std::vector<Mat> inner;
  t.complex = variant == TangentVariant::Kernel ? moore_complex(lin, &inner) : quotient_complex(lin, &inner);
  for (size_t l = 0; l < b.size(); ++l) t.embed.push_back(b[l] * inner[l]);
  return t;
}

RankFormulaReport rank_formula_check(const SimplicialVectorSpace& v) {
  RankFormulaReport r;
  r.space_dims = v.dims;
  r.kernel_dims = moore_complex(v).dims;
  for (int l = 0; l <= v.top(); ++l) r.formula_dims.push_back(rank_formula(v.dims, l));
  r.ok = r.kernel_dims == r.formula_dims;
  return r;
}

RankFormulaReport rank_formula_check(const SimplicialModel& model, int max_level) {
  return rank_formula_check(linearize(model, max_level));
}

double im_form(const ShiftedForm& a, int l, const Vec& v, const Vec& w) {
  const int m = a.m;
  if (l < 0 || l > m) return 0.0;
  if (a.degree(m) != 2) throw std::invalid_argument("im_form needs a 2-form in the top component");
  if (v.size() != a.model->tangent_dim(l) || w.size() != a.model->tangent_dim(m - l))
    throw std::invalid_argument("im_form: level mismatch");
  if (!a.has(m)) return 0.0;
  const SimplicialModel& mod = *a.model;
  const Point top = mod.base_point(m);
  double s = 0.0;
  for (const auto& sh : enumerate_shuffles(l, m - l)) {
    std::vector<int> for_v(sh.image.begin() + l, sh.image.end());    // sigma(l) .. sigma(m-1)
    std::vector<int> for_w(sh.image.begin(), sh.image.begin() + l);  // sigma(0) .. sigma(l-1)
    Vec pv = push_degeneracies(mod, l, for_v, v);
    Vec pw = push_degeneracies(mod, m - l, for_w, w);
    s += sh.sign * a.levels.at(m)(top, {pv, pw});
  }
  return s;
}

Mat im_matrix(const ShiftedForm& a, int l, const Mat& v, const Mat& w) {
  Mat out(v.cols(), w.cols());
  for (int i = 0; i < v.cols(); ++i)
    for (int j = 0; j < w.cols(); ++j) out(i, j) = im_form(a, l, v.col(i), w.col(j));
  return out;
}

NondegeneracyReport nondegeneracy_check(const ShiftedForm& a, std::uint64_t seed, double rel_threshold,
                                        double descent_tol) {
  const SimplicialModel& mod = *a.model;
  const int m = a.m;
  const int top = std::min(m + 1, mod.top_level());
  TangentComplex t = tangent_complex(mod, TangentVariant::Kernel, top);
  HomologyBasis h = homology(t.complex);
  NondegeneracyReport r;
  r.homology_dims = h.dims;
  r.ill_conditioned = h.any_ill_conditioned();
  auto reps = [&](int l) -> Mat { return t.embed[l] * h.reps[l]; };
  Rng rng(derive_seed(seed, "nondegeneracy"));

  bool all_ok = true;
  for (int l = 0; l <= m; ++l) {
    PairingBlock b;
    b.l = l;
    Mat hl = reps(l), hr = reps(m - l);
    if (hl.cols() == 0 && hr.cols() == 0) {
      b.ok = true;
    } else {
      b.pairing = im_matrix(a, l, hl, hr);
      Vec s = singular_values(b.pairing);
      b.max_sv = s.size() ? s(0) : 0.0;
      b.min_sv = s.size() ? s(s.size() - 1) : 0.0;
      b.ok = hl.cols() == hr.cols() && b.max_sv > kZeroFloor && b.min_sv >= rel_threshold * b.max_sv;
      // Representatives shifted by boundaries must give the same pairing.
      if (l + 1 <= top && m - l + 1 <= top) {
        Mat hl2 = hl, hr2 = hr;
        for (int c = 0; c < hl.cols(); ++c)
          hl2.col(c) += ambient_boundary(mod, l + 1, t.embed[l + 1] * rng.normal_vec(static_cast<int>(t.embed[l + 1].cols())));
        for (int c = 0; c < hr.cols(); ++c)
          hr2.col(c) +=
              ambient_boundary(mod, m - l + 1, t.embed[m - l + 1] * rng.normal_vec(static_cast<int>(t.embed[m - l + 1].cols())));
        Mat shifted = im_matrix(a, l, hl2, hr2);
        if (shifted.size())
          r.representative_residual = std::max(r.representative_residual, (shifted - b.pairing).cwiseAbs().maxCoeff());
      }
    }
    all_ok = all_ok && b.ok;
    r.blocks.push_back(b);
  }
  for (int l = 0; l < m; ++l) {
    for (int s = 0; s < 4; ++s) {
      Vec u = t.embed[l + 1] * rng.normal_vec(static_cast<int>(t.embed[l + 1].cols()));
      Vec w = t.embed[m - l] * rng.normal_vec(static_cast<int>(t.embed[m - l].cols()));
      double v = im_form(a, l, ambient_boundary(mod, l + 1, u), w) +
                 sgn(l + 1) * im_form(a, l + 1, u, ambient_boundary(mod, m - l, w));
      r.descent_residual = std::max(r.descent_residual, std::abs(v));
    }
  }
  r.nondegenerate = all_ok && r.descent_residual <= descent_tol;
  return r;
}

ShiftedForm gauge_move(const ShiftedForm& a, const ShiftedForm& phi, FdConfig cfg) {
  if (phi.m != a.m - 1 || phi.k != a.k || phi.model != a.model)
    throw std::invalid_argument("gauge form must be an (m-1)-shifted 2-form on the same model");
  ShiftedForm dphi = total_D(phi, cfg);
  dphi.m = a.m;
  dphi.k = a.k;
  return add(a, dphi);
}

AppendixEReport appendix_e_properties(const ShiftedForm& a, const ShiftedForm* phi, int samples, std::uint64_t seed) {
  const SimplicialModel& mod = *a.model;
  const int m = a.m;
  AppendixEReport r;
  Rng rng(derive_seed(seed, "appendix-e"));
  for (int p = 1; p <= m; ++p)
    for (int i = 0; i < p; ++i)
      for (int s = 0; s < samples; ++s) {
        Vec u = mod.random_tangent(p - 1, mod.base_point(p - 1), rng);
        Vec w = mod.random_tangent(m - p, mod.base_point(m - p), rng);
        Vec su = mod.tangent_degeneracy(p - 1, i, mod.base_point(p - 1), u);
        r.degenerate = std::max(r.degenerate, std::abs(im_form(a, p, su, w)));
      }

  const int top = std::min(m + 1, mod.top_level());
  TangentComplex t = tangent_complex(mod, TangentVariant::Kernel, top);
  auto rnd = [&](int l) -> Vec { return t.embed[l] * rng.normal_vec(static_cast<int>(t.embed[l].cols())); };
  for (int l = 0; l < m; ++l)
    for (int s = 0; s < samples; ++s) {
      Vec u = rnd(l + 1), w = rnd(m - l);
      double v = im_form(a, l, ambient_boundary(mod, l + 1, u), w) +
                 sgn(l + 1) * im_form(a, l + 1, u, ambient_boundary(mod, m - l, w));
      r.multiplicative = std::max(r.multiplicative, std::abs(v));
    }

  if (phi) {
    ShiftedForm moved = gauge_move(a, *phi);
    ShiftedForm dphi = add(moved, a, -1.0);
    auto cycle = [&](int l) -> Vec {
      Mat z = l >= 1 && l <= t.complex.top() ? null_space(t.complex.d(l)) : Mat::Identity(t.embed[l].cols(), t.embed[l].cols());
      return t.embed[l] * (z * rng.normal_vec(static_cast<int>(z.cols())));
    };
    for (int l = 0; l <= m; ++l)
      for (int s = 0; s < samples; ++s) {
        Vec u = cycle(l), w = cycle(m - l);
        r.gauge = std::max(r.gauge, std::abs(im_form(moved, l, u, w) - im_form(a, l, u, w)));
        u = rnd(l);
        w = rnd(m - l);
        const double lhs = im_form(dphi, l, u, w);
        double rhs = 0.0;
        if (l >= 1) rhs += im_form(*phi, l - 1, ambient_boundary(mod, l, u), w);
        if (m - l >= 1) rhs += sgn(l) * im_form(*phi, l, u, ambient_boundary(mod, m - l, w));
        r.gauge_homotopy = std::max(r.gauge_homotopy, std::abs(lhs - rhs));
      }
  }
  return r;
}

HypercoverReport hypercover_tangent_check(const SimplicialMap& f, int n) {
  const SimplicialModel& k = *f.source();
  const SimplicialModel& j = *f.target();
  if (n > k.top_level() || n > j.top_level()) throw std::invalid_argument("hypercover check beyond model levels");
  std::vector<Mat> bk(n + 1), bj(n + 1);
  std::vector<Point> xk(n + 1), xj(n + 1);
  for (int l = 0; l <= n; ++l) {
    xk[l] = k.base_point(l);
    xj[l] = j.base_point(l);
    bk[l] = k.tangent_basis(l, xk[l]);
    bj[l] = j.tangent_basis(l, xj[l]);
  }
  auto dk = [&](int l, int i) {
    return Mat(bk[l - 1].transpose() *
               apply_cols(bk[l], [&](const Vec& x) { return k.tangent_face(l, i, xk[l], x); }, k.tangent_dim(l - 1)));
  };
  auto dj = [&](int l, int i) {
    return Mat(bj[l - 1].transpose() *
               apply_cols(bj[l], [&](const Vec& x) { return j.tangent_face(l, i, xj[l], x); }, j.tangent_dim(l - 1)));
  };
  auto tf = [&](int l) {
    return Mat(bj[l].transpose() *
               apply_cols(bk[l], [&](const Vec& x) { return f.tangent_map(l, xk[l], x); }, j.tangent_dim(l)));
  };

  HypercoverReport r;
  bool ok = true;
  for (int i = 0; i <= n; ++i) {
    HypercoverLevel lv;
    lv.level = i;
    lv.source_dim = static_cast<int>(bk[i].cols());
    Mat tq;
    if (i == 0) {
      lv.horn_dim = static_cast<int>(bj[0].cols());
      tq = tf(0);
    } else {
      const int kk = static_cast<int>(bk[i - 1].cols());
      const int kj = static_cast<int>(bj[i].cols());
      const int unknowns = (i + 1) * kk + kj;
      std::vector<Mat> rows;
      if (i >= 2) {
        std::vector<Mat> dkm(i);
        for (int a = 0; a < i; ++a) dkm[a] = dk(i - 1, a);
        for (int b = 0; b <= i; ++b)
          for (int a = 0; a < b; ++a) {
            Mat c = Mat::Zero(dkm[0].rows(), unknowns);
            c.middleCols(b * kk, kk) += dkm[a];
            c.middleCols(a * kk, kk) -= dkm[b - 1];
            rows.push_back(c);
          }
      }
      Mat fprev = tf(i - 1);
      for (int a = 0; a <= i; ++a) {
        Mat c = Mat::Zero(fprev.rows(), unknowns);
        c.middleCols(a * kk, kk) += fprev;
        c.rightCols(kj) -= dj(i, a);
        rows.push_back(c);
      }
      int nr = 0;
      for (auto& m : rows) nr += static_cast<int>(m.rows());
      Mat cons(nr, unknowns);
      int r0 = 0;
      for (auto& m : rows) {
        cons.middleRows(r0, m.rows()) = m;
        r0 += static_cast<int>(m.rows());
      }
      lv.horn_dim = static_cast<int>(null_space(cons).cols());
      tq = Mat(unknowns, lv.source_dim);
      for (int a = 0; a <= i; ++a) tq.middleRows(a * kk, kk) = dk(i, a);
      tq.bottomRows(kj) = tf(i);
    }
    lv.rank = numerical_rank(tq);
    lv.surjective = lv.rank == lv.horn_dim;
    lv.injective = lv.rank == lv.source_dim;
    ok = ok && lv.surjective && (i < n || lv.injective);
    r.levels.push_back(lv);
  }

  const int topk = std::min(n + 1, k.top_level()), topj = std::min(n + 1, j.top_level());
  TangentComplex tk = tangent_complex(k, TangentVariant::Kernel, topk);
  TangentComplex tj = tangent_complex(j, TangentVariant::Kernel, topj);
  HomologyBasis hk = homology(tk.complex), hj = homology(tj.complex);
  bool iso = true;
  for (int l = 0; l <= n; ++l) {
    r.source_homology.push_back(hk.dims[l]);
    r.target_homology.push_back(hj.dims[l]);
    Mat src = tk.embed[l] * hk.reps[l];
    Mat img = apply_cols(src, [&](const Vec& x) { return f.tangent_map(l, xk[l], x); }, j.tangent_dim(l));
    Mat cls = (tj.embed[l] * hj.reps[l]).transpose() * img;
    const int rk = cls.size() ? numerical_rank(cls) : 0;
    r.induced_rank.push_back(rk);
    iso = iso && hk.dims[l] == hj.dims[l] && rk == hk.dims[l];
  }
  r.homology_iso = iso;
  r.ok = ok && iso;
  return r;
}

double pairing_transport_residual(const SimplicialMap& f, const ShiftedForm& beta, const ShiftedForm& alpha) {
  const SimplicialModel& k = *f.source();
  const int m = beta.m;
  const int top = std::min(m + 1, k.top_level());
  TangentComplex t = tangent_complex(k, TangentVariant::Kernel, top);
  HomologyBasis h = homology(t.complex);
  double worst = 0.0;
  for (int l = 0; l <= m; ++l) {
    Mat hl = t.embed[l] * h.reps[l], hr = t.embed[m - l] * h.reps[m - l];
    const Point xl = k.base_point(l), xr = k.base_point(m - l);
    for (int a = 0; a < hl.cols(); ++a)
      for (int b = 0; b < hr.cols(); ++b) {
        double lhs = im_form(beta, l, hl.col(a), hr.col(b));
        double rhs = im_form(alpha, l, f.tangent_map(l, xl, hl.col(a)), f.tangent_map(m - l, xr, hr.col(b)));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  }
  return worst;
}

Mat random_normalized_bilinear(const SimplicialVectorSpace& v, int level, bool closed, Rng& rng) {
  const int n = v.dims.at(level);
  std::vector<std::pair<int, int>> idx;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) idx.emplace_back(a, b);
  if (idx.empty()) throw std::invalid_argument("no antisymmetric forms on this level");
  if (closed && level + 1 > v.top()) throw std::invalid_argument("closedness needs level + 1");

  auto constraints = [&](const Mat& a) {
    std::vector<double> out;
    if (level >= 1)
      for (int j = 0; j < level; ++j) {
        const Mat& sj = v.s(level - 1, j);
        Mat c = sj.transpose() * a * sj;
        out.insert(out.end(), c.data(), c.data() + c.size());
      }
    if (closed) {
      Mat c = Mat::Zero(v.dims[level + 1], v.dims[level + 1]);
      for (int i = 0; i <= level + 1; ++i) c += sgn(i) * v.d(level + 1, i).transpose() * a * v.d(level + 1, i);
      out.insert(out.end(), c.data(), c.data() + c.size());
    }
    return out;
  };
  auto basis = [&](std::size_t k) {
    Mat a = Mat::Zero(n, n);
    a(idx[k].first, idx[k].second) = 1.0;
    a(idx[k].second, idx[k].first) = -1.0;
    return a;
  };
  const std::vector<double> probe = constraints(Mat::Zero(n, n));
  Mat c(static_cast<int>(probe.size()), static_cast<int>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    std::vector<double> col = constraints(basis(k));
    for (std::size_t r = 0; r < col.size(); ++r) c(static_cast<int>(r), static_cast<int>(k)) = col[r];
  }
  Mat ker = c.rows() ? null_space(c) : Mat::Identity(c.cols(), c.cols());
  if (ker.cols() == 0) throw std::runtime_error("only the zero form is normalized and closed here");
  Vec coef = ker * rng.normal_vec(static_cast<int>(ker.cols()));
  Mat a = Mat::Zero(n, n);
  for (std::size_t k = 0; k < idx.size(); ++k) a += coef(static_cast<int>(k)) * basis(k);
  return a;
}

namespace {

Evaluator constant_two_form(Mat a) {
  return [a = std::move(a)](const Point&, const std::vector<Vec>& v) { return v.at(0).dot(a * v.at(1)); };
}

}  // namespace

ShiftedForm synthetic_multiplicative_form(std::shared_ptr<const LinearModel> model, int m, Rng& rng) {
  ShiftedForm f = zero_form(model, m, 2);
  f.levels[m] = constant_two_form(random_normalized_bilinear(model->space(), m, true, rng));
  return f;
}

ShiftedForm synthetic_gauge_form(std::shared_ptr<const LinearModel> model, int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("gauge form needs m >= 1");
  ShiftedForm f = zero_form(model, m - 1, 2);
  f.levels[m - 1] = constant_two_form(random_normalized_bilinear(model->space(), m - 1, false, rng));
  return f;
}

}  // namespace sskit
