#include "sskit/suites.hpp"

#include "sskit/double.hpp"
#include "sskit/loop.hpp"
#include "sskit/manin.hpp"
#include "sskit/nerve.hpp"
#include "sskit/simplicial.hpp"
#include "sskit/tangent.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace sskit {

namespace {

using Suite = std::function<VerificationReport(const RunConfig&)>;

const std::string kNerveDefault = "so3";
const std::string kTripleDefault = "aff1-double";

struct Ctx {
  const RunConfig& cfg;
  VerificationReport& rep;

  std::string algebra(const std::string& fallback = kNerveDefault) const {
    return cfg.algebra.empty() ? fallback : cfg.algebra;
  }
  std::string triple() const { return cfg.triple.empty() ? kTripleDefault : cfg.triple; }
  int grid(int fallback) const { return cfg.grid > 0 ? cfg.grid : fallback; }
  int samples(int fallback) const { return cfg.samples > 0 ? cfg.samples : fallback; }
  double h(double fallback = 1e-4) const { return cfg.fd_step > 0 ? cfg.fd_step : fallback; }
  std::uint64_t seed(const std::string& label) const { return derive_seed(cfg.seed, label); }
  double tol(double t) const { return t * cfg.tol_scale; }

  bool check(const std::string& label, const std::string& anchor, double residual, double tolerance,
             Json meta = Json::object()) const {
    return rep.check(label, anchor, residual, tol(tolerance), std::move(meta));
  }
};

AlgebraPtr algebra_ptr(const std::string& name) { return std::make_shared<const LieAlgebra>(LieAlgebra::load(name)); }

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::vector<Vec> random_tangents(const SimplicialModel& m, int level, const Point& x, int k, Rng& rng) {
  std::vector<Vec> v;
  for (int i = 0; i < k; ++i) v.push_back(m.random_tangent(level, x, rng));
  return v;
}

double worst(const std::vector<LevelResidual>& levels, bool fd) {
  double r = 0.0;
  for (const auto& l : levels)
    if (l.uses_fd == fd) r = std::max(r, l.residual);
  return r;
}

double level_residual(const std::vector<LevelResidual>& levels, int level) {
  for (const auto& l : levels)
    if (l.level == level) return l.residual;
  return 0.0;
}

void identity_checks(const Ctx& c, const std::string& what, const SimplicialModel& m, int samples,
                     const std::string& seed_label) {
  const IdentityResidual r = simplicial_identity_residual(m, samples, c.seed(seed_label));
  c.check(what + ": simplicial identities on points", "simplicial identities", r.points, 1e-10);
  c.check(what + ": simplicial identities on tangents", "simplicial identities (tangent maps)", r.tangents, 1e-10);
  c.check(what + ": structure maps preserve constraints", "constraint preservation", r.constraints, 1e-10);
}

void map_checks(const Ctx& c, const std::string& what, const SimplicialMap& f, int samples,
                const std::string& seed_label) {
  const IdentityResidual r = map_commutation_residual(f, samples, c.seed(seed_label));
  c.check(what + " commutes with faces and degeneracies", "simplicial morphism", std::max(r.points, r.tangents),
          1e-10);
}

void nondegeneracy_checks(const Ctx& c, const std::string& what, const ShiftedForm& a, const std::string& seed_label) {
  const NondegeneracyReport nd = nondegeneracy_check(a, c.seed(seed_label));
  Json meta;
  meta["homology_dims"] = nd.homology_dims;
  Json blocks = Json::array();
  for (const auto& b : nd.blocks) blocks.push_back({{"l", b.l}, {"min_sv", b.min_sv}, {"max_sv", b.max_sv}});
  meta["blocks"] = blocks;
  c.rep.require(what + ": pairing nondegenerate on homology", "nondegeneracy on tangent homology",
                nd.nondegenerate && !nd.ill_conditioned, meta);
  c.check(what + ": infinitesimal multiplicativity on the tangent complex", "infinitesimal multiplicativity",
          nd.descent_residual, 1e-6);
  c.check(what + ": pairing independent of representatives", "pairing descends to homology",
          nd.representative_residual, 1e-6);
}

void appendix_e_checks(const Ctx& c, const std::string& what, const ShiftedForm& a, const ShiftedForm* phi,
                       int samples, const std::string& seed_label) {
  const AppendixEReport r = appendix_e_properties(a, phi, samples, c.seed(seed_label));
  c.check(what + ": lambda vanishes on degenerate vectors", "IM form vanishes on degeneracies", r.degenerate, 1e-8);
  c.check(what + ": lambda infinitesimally multiplicative", "IM form infinitesimal multiplicativity",
          r.multiplicative, 1e-8);
  if (phi) {
    c.check(what + ": lambda gauge invariant on cycles", "IM form gauge invariance", r.gauge, 1e-8);
    c.check(what + ": lambda^{D phi} is the chain homotopy term", "IM form of an exact form", r.gauge_homotopy, 1e-8);
  }
}

// Smooth function on any point layout, used to probe delta^2 = 0.
double probe_function(const Point& x) {
  double s = 0.0;
  for (size_t k = 0; k < x.size(); ++k) s += static_cast<double>(k + 1) * std::sin(x[k].trace() + 0.3 * x[k](0, 0));
  return s;
}

// ---------------------------------------------------------------------------

VerificationReport nerve_suite(const RunConfig& cfg) {
  VerificationReport rep("nerve", cfg.to_json());
  Ctx c{cfg, rep};
  const AlgebraPtr alg = algebra_ptr(c.algebra());
  const QuadraticReport q = check_quadratic(*alg);
  c.check("algebra: Jacobi identity", "Lie algebra axioms", alg->jacobi_residual(), 1e-12);
  c.check("algebra: representation is a homomorphism", "Lie algebra axioms", alg->rep_residual(), 1e-12);
  c.check("algebra: pairing ad-invariant", "quadratic Lie algebra", q.ad_invariance, 1e-12);
  rep.require("algebra: pairing nondegenerate", "quadratic Lie algebra", q.nondegenerate);

  auto nv = std::make_shared<const NerveModel>(alg, 4);
  const ShiftedForm om = omega_bullet(nv);
  const int n = c.samples(20);
  const double h = c.h();
  identity_checks(c, "nerve", *nv, 5, "nerve/identities");

  const ClosedReport c1 = is_closed(om, n, c.seed("nerve/closed"), FdConfig{h});
  const ClosedReport c2 = is_closed(om, n, c.seed("nerve/closed"), FdConfig{h / 2});
  c.check("delta Omega = 0", "nerve: delta Omega = 0", level_residual(c1.levels, 3), 1e-12);
  const std::pair<int, const char*> fd_levels[] = {{2, "delta Theta - d Omega = 0"}, {1, "d Theta = 0"}};
  for (const auto& [lvl, label] : fd_levels) {
    const double r1 = level_residual(c1.levels, lvl), r2 = level_residual(c2.levels, lvl);
    c.check(label, std::string("nerve: ") + label, r1, 1e-6, {{"h", h}});
    rep.converge(std::string(label) + " under h -> h/2", std::string("nerve: ") + label, {1.0 / h, 2.0 / h}, {r1, r2},
                 std::log2(3.5), kFdFloor, {{"kind", "finite-difference step"}});
  }
  c.check("s_i^* Omega = 0", "nerve: Omega normalized", is_normalized(om, n, c.seed("nerve/normalized")), 1e-12);
  c.check("components alternate", "forms are alternating", alternation_residual(om, n, c.seed("nerve/alt")), 1e-10);

  {
    Rng rng(c.seed("nerve/delta2"));
    Evaluator dd = delta_evaluator(nv, 3, delta_evaluator(nv, 2, om.levels.at(1)));
    double r = 0.0;
    for (int s = 0; s < n; ++s) {
      const Point x = nv->random_point(3, rng);
      r = std::max(r, std::abs(dd(x, random_tangents(*nv, 3, x, 3, rng))));
    }
    c.check("delta delta Theta = 0", "delta squares to zero", r, 1e-10);
  }
  {
    Rng rng(c.seed("nerve/omega-paths"));
    double r = 0.0;
    const int dim = alg->dim();
    for (int s = 0; s < n; ++s) {
      const Point x = nv->random_point(2, rng);
      const Vec v = rng.normal_vec(2 * dim), w = rng.normal_vec(2 * dim);
      r = std::max(r, std::abs(omega_2form(*alg, x, v, w) - omega_2form_pullback(*nv, x, v, w)));
    }
    c.check("Omega closed formula = pullback formula", "nerve: Omega from Maurer-Cartan forms", r, 1e-12);
  }

  const TangentComplex tc = tangent_complex(*nv);
  const Mat e1 = tc.embed[1];
  const Mat lam = im_matrix(om, 1, e1, e1);
  c.check("lambda = 2<.,.>", "nerve: IM form is twice the pairing", max_abs(lam - 2.0 * e1.transpose() * alg->pairing() * e1),
          1e-12);
  c.check("VE(Omega) = -<.,.>", "nerve: van Est image of Omega", max_abs(van_est_pairing(*nv) + alg->pairing()), 1e-12);
  nondegeneracy_checks(c, "nerve", om, "nerve/nondegeneracy");

  Rng grng(c.seed("nerve/gauge"));
  const ShiftedForm phi = random_nerve_gauge(nv, grng);
  appendix_e_checks(c, "nerve", om, &phi, 10, "nerve/appendix-e");
  return rep;
}

// ---------------------------------------------------------------------------

struct LoopResiduals {
  double closed_exact = 0, closed_fd = 0, morita_exact = 0, morita_fd = 0, brylinski = 0, lambda = 0;
};

LoopResiduals loop_residuals(const Ctx& c, AlgebraPtr alg, int r, int samples, double h) {
  auto lp = std::make_shared<const LoopModel>(alg, r);
  auto nv = std::make_shared<const NerveModel>(alg, 4);
  auto ev = std::make_shared<const EvMap>(lp, nv);
  auto idm = std::make_shared<const IdentityMap>(lp);
  const ShiftedForm om = segal_bullet(lp);
  LoopResiduals out;
  const ClosedReport cr = is_closed(om, samples, c.seed("loop/closed"), FdConfig{h});
  out.closed_exact = worst(cr.levels, false);
  out.closed_fd = worst(cr.levels, true);
  const MoritaReport mr =
      check_morita(om, scaled_omega_bullet(nv, 0.5), idm, ev, omega_p_bullet(lp), samples, c.seed("loop/morita"),
                   FdConfig{h});
  out.morita_exact = worst(mr.levels, false);
  out.morita_fd = worst(mr.levels, true);
  Rng rng(c.seed("loop/brylinski"));
  for (int s = 0; s < samples; ++s) {
    const Point g = lp->random_point(1, rng);
    const Vec u = lp->random_tangent(1, g, rng), v = lp->random_tangent(1, g, rng);
    out.brylinski = std::max(out.brylinski, std::abs(brylinski_residual(lp, g, u, v, FdConfig{h})));
  }
  Rng lrng(c.seed("loop/lambda"));
  const int n = alg->dim();
  for (int s = 0; s < samples; ++s) {
    const Point e = lp->base_point(1);
    const Vec u = lp->random_tangent(1, e, lrng), v = lp->random_tangent(1, e, lrng);
    const double target = alg->pair(u.segment(r * n, n), v.segment(r * n, n));
    out.lambda = std::max(out.lambda, std::abs(im_form(om, 1, u, v) - target));
  }
  return out;
}

VerificationReport loop_suite(const RunConfig& cfg) {
  VerificationReport rep("loop", cfg.to_json());
  Ctx c{cfg, rep};
  const AlgebraPtr alg = algebra_ptr(c.algebra());
  const int r = c.grid(36);
  const int n = c.samples(5);
  const double h = c.h();
  if (r % 6 != 0 || r < 6) throw std::invalid_argument("loop grid must be a positive multiple of 6");

  auto lp = std::make_shared<const LoopModel>(alg, r);
  auto nv = std::make_shared<const NerveModel>(alg, 4);
  auto ev = std::make_shared<const EvMap>(lp, nv);
  const ShiftedForm om = segal_bullet(lp);
  identity_checks(c, "loop model", *lp, 2, "loop/identities");
  map_checks(c, "ev", *ev, 2, "loop/ev");
  c.check("s_j^* omega = 0", "Segal form normalized", is_normalized(om, n, c.seed("loop/normalized")), 1e-10);

  const LoopResiduals a = loop_residuals(c, alg, r, n, h);
  const LoopResiduals b = loop_residuals(c, alg, 2 * r, n, h);
  const std::vector<double> grids = {double(r), double(2 * r)};
  c.check("delta omega = 0", "Segal form multiplicative", a.closed_exact, 1e-10, {{"R", r}});
  c.check("omega - 1/2 ev^*Omega - delta omega^P = 0", "loop/nerve Morita identity, top level", a.morita_exact, 1e-10,
          {{"R", r}});
  rep.converge("d omega = 0", "Segal form closed", grids, {a.closed_fd, b.closed_fd}, 1.0, kFdFloor);
  rep.converge("1/2 ev^*Theta + d omega^P = 0", "loop/nerve Morita identity, level 1", grids,
               {a.morita_fd, b.morita_fd}, 1.0, kFdFloor);
  rep.converge("tr(Theta) = d alpha^P - 2 omega^P", "transgressed Cartan form", grids, {a.brylinski, b.brylinski}, 1.0,
               kFdFloor);
  rep.converge("lambda - <u(1), v(1)>", "loop IM form", grids, {a.lambda, b.lambda}, 2.0);
  rep.note("residuals at R", {{"d omega", a.closed_fd}, {"morita level 1", a.morita_fd}, {"brylinski", a.brylinski},
                              {"lambda", a.lambda}});

  const HypercoverReport hc = hypercover_tangent_check(*ev, 2);
  Json ranks = Json::array();
  for (const auto& l : hc.levels) ranks.push_back({{"level", l.level}, {"rank", l.rank}, {"horn_dim", l.horn_dim}});
  rep.require("ev is a tangent hypercover", "hypercover tangent criterion", hc.ok, {{"levels", ranks}});
  rep.require("ev induces an isomorphism on tangent homology", "hypercover tangent criterion", hc.homology_iso);
  c.check("lambda transported by ev", "pairing transport under hypercovers",
          pairing_transport_residual(*ev, om, scaled_omega_bullet(nv, 0.5)), 1e-8);
  nondegeneracy_checks(c, "loop", om, "loop/nondegeneracy");
  return rep;
}

// ---------------------------------------------------------------------------

VerificationReport manin_suite(const RunConfig& cfg) {
  VerificationReport rep("manin", cfg.to_json());
  Ctx c{cfg, rep};
  auto t = std::make_shared<const ManinTriple>(ManinTriple::load(c.triple()));
  const LieAlgebra& alg = *t->alg;
  const int n = c.samples(200);
  const double h = c.h(1e-5);

  const ManinReport mc = check_manin(*t);
  rep.require("Manin triple: closed isotropic complementary subalgebras", "Manin triple",
              mc.ok, {{"complement_min_sv", mc.complement_min_sv}});
  {
    Rng rng(c.seed("manin/factorize"));
    double r = 0.0;
    int iters = 0;
    for (int s = 0; s < n; ++s) {
      const Mat g = alg.random_element(rng, 0.5);
      for (FactorOrder o : {FactorOrder::PlusMinus, FactorOrder::MinusPlus}) {
        const Factorization f = factorize(*t, g, o);
        r = std::max(r, (f.first * f.second - g).norm());
        iters = std::max(iters, f.iterations);
      }
    }
    c.check("local factorization g = a h", "factorization near the identity", r, 1e-10, {{"max_iterations", iters}});
  }

  auto m = std::make_shared<const ManinModel>(t);
  auto nv = std::make_shared<const NerveModel>(t->alg, 3);
  auto phi = std::make_shared<const PhiMap>(m, nv);
  auto idm = std::make_shared<const IdentityMap>(m);
  identity_checks(c, "Manin model", *m, 5, "manin/identities");
  map_checks(c, "Phi", *phi, 5, "manin/phi");

  const ShiftedForm ob = bar_omega(m), beta = beta_form(m);
  c.check("s_j^* omega-bar = 0", "omega-bar normalized", is_normalized(ob, 10, c.seed("manin/norm")), 1e-12);
  c.check("s_j^* beta = 0", "beta normalized", is_normalized(beta, 10, c.seed("manin/norm-beta")), 1e-12);

  const MoritaReport mr = check_morita(ob, omega_bullet(nv), idm, phi, beta, n, c.seed("manin/morita"), FdConfig{h});
  c.check("omega-bar - Phi^*Omega - delta beta = 0", "Manin/nerve Morita identity, top level",
          level_residual(mr.levels, 2), 1e-10);
  c.check("Phi^*Theta + d beta = 0", "Manin/nerve Morita identity, level 1", level_residual(mr.levels, 1), 1e-6,
          {{"h", h}});

  const TangentComplex tc = tangent_complex(*m);
  const Mat e = tc.embed[1];
  const Mat lam = im_matrix(ob, 1, e, e);
  Mat consistent(e.cols(), e.cols()), claimed(e.cols(), e.cols());
  for (int i = 0; i < e.cols(); ++i)
    for (int j = 0; j < e.cols(); ++j) {
      const Vec v = e.col(i), w = e.col(j);
      const Vec sv = t->minus * v.head(t->n_minus()) + t->plus * v.tail(t->n_plus());
      const Vec sw = t->minus * w.head(t->n_minus()) + t->plus * w.tail(t->n_plus());
      consistent(i, j) = 2.0 * alg.pair(sv, sw);
      claimed(i, j) = manin_claimed_pairing(*t, v, w);
    }
  c.check("lambda = Phi^*(2<.,.>) = 2<v~,w> + 2<w~,v>", "Manin IM form", max_abs(lam - consistent), 1e-10);
  rep.note("lambda minus the printed value -2<v~,w> - 2<w~,v>", max_abs(lam - claimed));

  const HypercoverReport hc = hypercover_tangent_check(*phi, 2);
  rep.require("Phi is a tangent hypercover", "hypercover tangent criterion", hc.ok);
  rep.require("Phi induces an isomorphism on tangent homology", "hypercover tangent criterion", hc.homology_iso);
  c.check("lambda transported by Phi", "pairing transport under hypercovers",
          pairing_transport_residual(*phi, ob, omega_bullet(nv)), 1e-8);
  nondegeneracy_checks(c, "Manin", ob, "manin/nondegeneracy");
  return rep;
}

// ---------------------------------------------------------------------------

VerificationReport double_suite(const RunConfig& cfg) {
  VerificationReport rep("double", cfg.to_json());
  Ctx c{cfg, rep};
  const AlgebraPtr alg = algebra_ptr(c.algebra());
  const int mm = c.grid(24);
  const int n = c.samples(3);
  const double h = c.h();
  if (mm < 2) throw std::invalid_argument("double grid must be >= 2");

  auto l = std::make_shared<const LoopDouble>(alg, mm, 4);
  auto g = std::make_shared<const GroupDouble>(alg, 4);
  {
    IdentityResidual worst_id;
    auto acc = [&](const IdentityResidual& r) {
      worst_id.points = std::max(worst_id.points, r.points);
      worst_id.tangents = std::max(worst_id.tangents, r.tangents);
      worst_id.constraints = std::max(worst_id.constraints, r.constraints);
    };
    for (int j = 0; j <= 2; ++j) acc(simplicial_identity_residual(*l->column(j), 1, c.seed("double/col")));
    for (int i = 0; i <= 3; ++i) acc(simplicial_identity_residual(*l->row(i), 1, c.seed("double/row")));
    for (int i = 0; i <= 3; ++i) acc(simplicial_identity_residual(*g->row(i), 1, c.seed("double/grow")));
    c.check("rows and columns satisfy the simplicial identities", "bisimplicial identities",
            std::max(worst_id.points, worst_id.tangents), 1e-10);
    c.check("rows and columns preserve constraints", "constraint preservation", worst_id.constraints, 1e-10);
  }
  {
    Rng rng(c.seed("double/hv"));
    double r = 0.0;
    for (int j = 1; j <= 2; ++j)
      for (int i = 1; i <= 3; ++i) {
        const Point x = l->random_point(j, i, rng);
        const Vec v = l->random_tangent(j, i, x, rng);
        for (int a = 0; a <= j; ++a)
          for (int b = 0; b <= i; ++b) {
            const Point p1 = l->row(i - 1)->face(j, a, l->column(j)->face(i, b, x));
            const Point p2 = l->column(j - 1)->face(i, b, l->row(i)->face(j, a, x));
            for (size_t k = 0; k < p1.size(); ++k) r = std::max(r, max_abs(p1[k] - p2[k]));
            const Vec t1 = l->row(i - 1)->tangent_face(j, a, l->column(j)->face(i, b, x), l->column(j)->tangent_face(i, b, x, v));
            const Vec t2 = l->column(j - 1)->tangent_face(i, b, l->row(i)->face(j, a, x), l->row(i)->tangent_face(j, a, x, v));
            r = std::max(r, max_abs(t1 - t2));
          }
      }
    c.check("horizontal and vertical faces commute", "bisimplicial identities", r, 1e-10);
  }
  {
    Rng rng(c.seed("double/delta2"));
    Evaluator f = [](const Point& x, const std::vector<Vec>&) { return probe_function(x); };
    DoubleModelPtr dm = l;
    double hh = 0, vv = 0, hv = 0;
    for (int s = 0; s < n; ++s) {
      for (int j = 0; j <= 2; ++j) {
        const Point x = l->random_point(j, 2, rng);
        hh = std::max(hh, std::abs(delta_h_evaluator(dm, j, 2, delta_h_evaluator(dm, j, 1, f))(x, {})));
      }
      for (int i = 0; i <= 2; ++i) {
        const Point x = l->random_point(2, i, rng);
        vv = std::max(vv, std::abs(delta_v_evaluator(dm, 2, i, delta_v_evaluator(dm, 1, i, f))(x, {})));
      }
      for (int j = 1; j <= 2; ++j)
        for (int i = 1; i <= 2; ++i) {
          const Point x = l->random_point(j, i, rng);
          const double a = delta_h_evaluator(dm, j, i, delta_v_evaluator(dm, j, i - 1, f))(x, {});
          const double b = delta_v_evaluator(dm, j, i, delta_h_evaluator(dm, j - 1, i, f))(x, {});
          hv = std::max(hv, std::abs(a - b));
        }
    }
    c.check("delta^h delta^h = 0", "triple complex differentials", hh, 1e-10);
    c.check("delta^v delta^v = 0", "triple complex differentials", vv, 1e-10);
    c.check("delta^h delta^v = delta^v delta^h", "triple complex differentials", hv, 1e-10);
  }
  {
    Rng rng(c.seed("double/alpha"));
    double r = 0.0;
    for (int s = 0; s < n; ++s) {
      const Point x = l->random_point(1, 1, rng);
      const Vec v = l->random_tangent(1, 1, x, rng);
      r = std::max(r, std::abs(loop_alpha(*alg, x, v) - alpha_p(*alg, x, v)));
    }
    c.check("loop alpha = alpha^P on loops", "two code paths for alpha", r, 1e-10);
  }

  auto l2 = std::make_shared<const LoopDouble>(alg, 2 * mm, 4);
  const auto ra = double_ev_residuals(l, n, c.seed("double/ev"), FdConfig{h});
  const auto rb = double_ev_residuals(l2, n, c.seed("double/ev"), FdConfig{h});
  for (size_t k = 0; k < ra.size(); ++k) {
    const auto& x = ra[k];
    const std::string label = "(" + std::to_string(x.j) + "," + std::to_string(x.i) + ") " + x.label;
    const std::string anchor = "double Morita identity, component (" + std::to_string(x.j) + "," + std::to_string(x.i) + ")";
    if (x.exact)
      c.check(label, anchor, x.residual, 1e-10, {{"M", mm}});
    else
      rep.converge(label, anchor, {double(mm), double(2 * mm)}, {x.residual, rb[k].residual}, 1.0, kFdFloor);
  }
  return rep;
}

// ---------------------------------------------------------------------------

VerificationReport simplicial_suite(const RunConfig& cfg) {
  VerificationReport rep("simplicial", cfg.to_json());
  Ctx c{cfg, rep};
  const WordFuzzReport fz = word_fuzz(cfg.fuzz, c.seed("simplicial/fuzz"));
  rep.require("normal forms agree with the matrix oracle", "simplicial identities (word normal form)",
              fz.mismatches == 0 && fz.words == cfg.fuzz, {{"words", fz.words}, {"mismatches", fz.mismatches}, {"max_defect", fz.max_defect}});
  rep.require("normal form is idempotent", "simplicial identities (word normal form)", fz.not_idempotent == 0);

  Rng rng(c.seed("simplicial/spaces"));
  const int spaces = c.samples(50);
  int rank_bad = 0, dk_bad = 0, model_bad = 0;
  double id = 0.0;
  for (int k = 0; k < spaces; ++k) {
    const int top_n = 1 + k % 3;
    const ChainComplex ch = random_chain_complex(rng, top_n, 3);
    auto v = std::make_shared<const SimplicialVectorSpace>(gamma_construction(ch, top_n + 2, &rng));
    id = std::max(id, v->identity_residual());
    if (!rank_formula_check(*v).ok) ++rank_bad;
    if (!dold_kan_compare(*v).ok) ++dk_bad;
    if (k < 10 && !rank_formula_check(LinearModel(v)).ok) ++model_bad;
  }
  c.check("Gamma(C) satisfies the simplicial identities", "Dold-Kan Gamma construction", id, 1e-10);
  rep.require("tangent rank formula = kernel dims", "rank of the tangent complex", rank_bad == 0,
              {{"spaces", spaces}, {"failures", rank_bad}});
  rep.require("tangent rank formula through the linear model", "rank of the tangent complex", model_bad == 0);
  rep.require("Moore and quotient complexes agree", "Dold-Kan correspondence", dk_bad == 0,
              {{"spaces", spaces}, {"failures", dk_bad}});
  return rep;
}

// ---------------------------------------------------------------------------

/// Draws until the null space of normalized closed forms is nonzero.
struct SyntheticFixture {
  std::shared_ptr<const LinearModel> model;
  ShiftedForm form, gauge;
  int m = 0;
};

SyntheticFixture synthetic_fixture(Rng& rng, int m) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    const ChainComplex ch = random_chain_complex(rng, m + 1, 3);
    auto v = std::make_shared<const SimplicialVectorSpace>(gamma_construction(ch, m + 1, &rng));
    auto model = std::make_shared<const LinearModel>(v);
    try {
      SyntheticFixture f{model, synthetic_multiplicative_form(model, m, rng), synthetic_gauge_form(model, m, rng), m};
      return f;
    } catch (const std::exception&) {
    }
  }
  throw std::runtime_error("no synthetic multiplicative form found");
}

double graded_antisymmetry(const ShiftedForm& a, Rng& rng) {
  const int m = a.m;
  double r = 0.0;
  for (int l = 0; l <= m; ++l)
    for (int s = 0; s < 3; ++s) {
      const Vec v = a.model->random_tangent(l, a.model->base_point(l), rng);
      const Vec w = a.model->random_tangent(m - l, a.model->base_point(m - l), rng);
      const double sign = ((l * (m - l)) % 2) ? -1.0 : 1.0;
      r = std::max(r, std::abs(im_form(a, l, v, w) + sign * im_form(a, m - l, w, v)));
    }
  return r;
}

VerificationReport imform_suite(const RunConfig& cfg) {
  VerificationReport rep("imform", cfg.to_json());
  Ctx c{cfg, rep};
  const AlgebraPtr alg = algebra_ptr(c.algebra());
  auto nv = std::make_shared<const NerveModel>(alg, 4);
  const ShiftedForm om = omega_bullet(nv);
  const Mat e1 = tangent_complex(*nv).embed[1];
  c.check("nerve: lambda = 2<.,.>", "nerve: IM form is twice the pairing",
          max_abs(im_matrix(om, 1, e1, e1) - 2.0 * e1.transpose() * alg->pairing() * e1), 1e-12);
  Rng grng(c.seed("imform/gauge"));
  const ShiftedForm phi = random_nerve_gauge(nv, grng);
  appendix_e_checks(c, "nerve", om, &phi, 10, "imform/nerve");
  nondegeneracy_checks(c, "nerve", om, "imform/nerve-nd");

  const int count = c.samples(20);
  Rng rng(c.seed("imform/synthetic"));
  AppendixEReport worst_e;
  double anti = 0.0;
  for (int k = 0; k < count; ++k) {
    const SyntheticFixture f = synthetic_fixture(rng, 1 + k % 2);
    const AppendixEReport r = appendix_e_properties(f.form, &f.gauge, 5, derive_seed(c.seed("imform/synthetic-e"), std::to_string(k)));
    worst_e.degenerate = std::max(worst_e.degenerate, r.degenerate);
    worst_e.multiplicative = std::max(worst_e.multiplicative, r.multiplicative);
    worst_e.gauge = std::max(worst_e.gauge, r.gauge);
    worst_e.gauge_homotopy = std::max(worst_e.gauge_homotopy, r.gauge_homotopy);
    anti = std::max(anti, graded_antisymmetry(f.form, rng));
  }
  const Json meta = {{"forms", count}};
  c.check("synthetic: lambda vanishes on degenerate vectors", "IM form vanishes on degeneracies", worst_e.degenerate, 1e-8, meta);
  c.check("synthetic: lambda infinitesimally multiplicative", "IM form infinitesimal multiplicativity", worst_e.multiplicative, 1e-8, meta);
  c.check("synthetic: lambda gauge invariant on cycles", "IM form gauge invariance", worst_e.gauge, 1e-8, meta);
  c.check("synthetic: lambda^{D phi} is the chain homotopy term", "IM form of an exact form", worst_e.gauge_homotopy, 1e-8, meta);
  c.check("synthetic: lambda graded antisymmetric", "IM form graded antisymmetry", anti, 1e-10, meta);

  // Manin and loop values.
  RunConfig sub = cfg;
  sub.samples = 0;
  sub.fd_step = 0;
  const VerificationReport mr = manin_suite(sub);
  for (const auto& ch : mr.checks())
    if (ch.label.rfind("lambda", 0) == 0 || ch.label.rfind("Manin:", 0) == 0)
      rep.check("manin: " + ch.label, ch.anchor, ch.residual, ch.tolerance, ch.meta);
  rep.note("manin", mr.to_json()["notes"]);
  const int r = c.grid(36);
  const LoopResiduals a = loop_residuals(c, alg, r, 3, c.h()), b = loop_residuals(c, alg, 2 * r, 3, c.h());
  rep.converge("loop: lambda - <u(1), v(1)>", "loop IM form", {double(r), double(2 * r)}, {a.lambda, b.lambda}, 2.0);
  return rep;
}

// ---------------------------------------------------------------------------

Evaluator coordinate_form(AlgebraPtr alg, std::function<double(const Vec&, const std::vector<Vec>&)> f) {
  return [alg, f = std::move(f)](const Point& x, const std::vector<Vec>& v) { return f(alg->log(x.at(0)), v); };
}

VerificationReport transgression_suite(const RunConfig& cfg) {
  VerificationReport rep("transgression", cfg.to_json());
  Ctx c{cfg, rep};
  const int r = c.grid(60);
  const int n = c.samples(5);
  const double h = c.h();
  auto ab = std::make_shared<const LieAlgebra>(LieAlgebra::builtin("abelian-2"));
  auto nv = std::make_shared<const NerveModel>(ab, 3);
  auto paths = std::make_shared<const PathSpaceModel>(nv, r, PathKind::Free);

  ShiftedForm area = zero_form(nv, 1, 2);
  area.levels[1] = [](const Point&, const std::vector<Vec>& v) { return v[0](0) * v[1](1) - v[0](1) * v[1](0); };
  ShiftedForm xdy = zero_form(nv, 1, 1);
  xdy.levels[1] = coordinate_form(ab, [](const Vec& x, const std::vector<Vec>& v) { return x(0) * v[0](1); });
  const Json meta = {{"R", r}, {"h", h}};
  for (const auto& [name, form] : {std::pair<std::string, const ShiftedForm*>{"dx^dy", &area}, {"x dy", &xdy}}) {
    const TransgressionReport t = transgression_identities(*form, paths, n, c.seed("transgression/" + name), FdConfig{h});
    c.check("abelian " + name + ": tr(d a) = ev_1^*a - ev_0^*a - d tr(a)", "transgression and de Rham d", t.d_identity, 1e-8, meta);
    c.check("abelian " + name + ": tr(delta a) = delta tr(a)", "transgression and simplicial delta", t.delta_identity, 1e-10, meta);
  }
  {
    Rng rng(c.seed("transgression/stokes"));
    Evaluator f = coordinate_form(ab, [](const Vec& x, const std::vector<Vec>&) { return x(0) * x(1) + 0.5 * x(0) - x(1) * x(1); });
    Evaluator dx = [](const Point&, const std::vector<Vec>& v) { return v[0](0); };
    const Evaluator tr_df = transgress_evaluator(nv, 1, d_evaluator(nv, 1, f, FdConfig{h}), r);
    const Evaluator tr_dx = transgress_evaluator(nv, 1, dx, r);
    double rs = 0.0, rx = 0.0;
    for (int s = 0; s < n; ++s) {
      const Point g = paths->random_point(1, rng);
      const Point g0 = paths->sample(1, g, 0), g1 = paths->sample(1, g, r);
      rs = std::max(rs, std::abs(tr_df(g, {}) - (f(g1, {}) - f(g0, {}))));
      rx = std::max(rx, std::abs(tr_dx(g, {}) - (ab->log(g1[0])(0) - ab->log(g0[0])(0))));
    }
    c.check("tr(df) = f(gamma(1)) - f(gamma(0))", "transgression of a function's differential", rs, 1e-8, meta);
    c.check("tr(dx) = x(gamma(1)) - x(gamma(0))", "transgression of dx", rx, 1e-12, meta);
  }

  auto so3 = std::make_shared<const LieAlgebra>(LieAlgebra::builtin("so3"));
  auto ns = std::make_shared<const NerveModel>(so3, 3);
  Evaluator theta = [so3](const Point&, const std::vector<Vec>& v) { return so3->cartan_3form(v[0], v[1], v[2]); };
  {
    Rng rng(c.seed("transgression/straight"));
    const Evaluator tr = transgress_evaluator(ns, 1, theta, r);
    double res = 0.0;
    for (int s = 0; s < n; ++s) {
      const Vec a = so3->random_vector(rng, 0.5), u = rng.normal_vec(3), v = rng.normal_vec(3);
      Point gamma;
      Vec uu(3 * (r + 1)), vv(3 * (r + 1));
      for (int j = 0; j <= r; ++j) {
        gamma.push_back(so3->exp(a * (double(j) / r)));
        uu.segment(3 * j, 3) = u;
        vv.segment(3 * j, 3) = v;
      }
      res = std::max(res, std::abs(tr(gamma, {uu, vv}) - so3->pair(a, so3->bracket(u, v))));
    }
    c.check("so3 straight path: tr(Theta)(u,v) = <a,[u,v]>", "transgression quadrature oracle", res, 1e-12, {{"R", r}});
  }
  {
    // Curved path and varying tangents: quadrature error against a fine reference.
    Rng rng(c.seed("transgression/curved"));
    const Vec a = so3->random_vector(rng, 0.6), b = so3->random_vector(rng, 0.4);
    const Vec u0 = rng.normal_vec(3), u1 = rng.normal_vec(3), v0 = rng.normal_vec(3), v1 = rng.normal_vec(3);
    auto value = [&](int res) {
      Point gamma;
      Vec uu(3 * (res + 1)), vv(3 * (res + 1));
      for (int j = 0; j <= res; ++j) {
        const double t = double(j) / res;
        gamma.push_back(so3->exp(a * t) * so3->exp(b * std::sin(M_PI * t)));
        uu.segment(3 * j, 3) = u0 + std::cos(t) * u1;
        vv.segment(3 * j, 3) = v0 + t * t * v1;
      }
      return transgress_evaluator(ns, 1, theta, res)(gamma, {uu, vv});
    };
    const double ref = value(1536);
    std::vector<double> res_list = {12, 24, 48}, err;
    for (double rr : res_list) err.push_back(std::abs(value(int(rr)) - ref));
    rep.converge("tr(Theta) quadrature on a curved so3 path", "transgression quadrature order", res_list, err, 1.9);
  }
  {
    // The product face d_1 does not commute with increment-log quadrature on a non-abelian group.
    std::vector<double> grids = {double(r), double(2 * r)}, delta_res;
    for (double rr : grids) {
      auto sp = std::make_shared<const PathSpaceModel>(ns, int(rr), PathKind::Free);
      const TransgressionReport t =
          transgression_identities(omega_bullet(ns), sp, n, c.seed("transgression/nerve"), FdConfig{h});
      delta_res.push_back(t.delta_identity);
      if (rr == r) rep.note("so3 nerve d-identity residual at R", t.d_identity);
    }
    rep.converge("so3 nerve: tr(delta Omega_.) = delta tr(Omega_.)", "transgression and simplicial delta", grids,
                 delta_res, 1.9);
  }
  return rep;
}

// ---------------------------------------------------------------------------

VerificationReport morita_suite(const RunConfig& cfg) {
  VerificationReport rep("morita", cfg.to_json());
  Ctx c{cfg, rep};
  const AlgebraPtr alg = algebra_ptr(c.algebra());
  const int r = c.grid(36);
  const int n = c.samples(5);
  if (r % 6 != 0 || r < 6) throw std::invalid_argument("loop grid must be a positive multiple of 6");

  const LoopResiduals a = loop_residuals(c, alg, r, n, c.h()), b = loop_residuals(c, alg, 2 * r, n, c.h());
  c.check("loop/nerve: omega - 1/2 ev^*Omega - delta omega^P = 0", "loop/nerve Morita identity, top level",
          a.morita_exact, 1e-10, {{"R", r}});
  rep.converge("loop/nerve: 1/2 ev^*Theta + d omega^P = 0", "loop/nerve Morita identity, level 1",
               {double(r), double(2 * r)}, {a.morita_fd, b.morita_fd}, 1.0, kFdFloor);

  {
    auto t = std::make_shared<const ManinTriple>(ManinTriple::load(c.triple()));
    auto m = std::make_shared<const ManinModel>(t);
    auto nv = std::make_shared<const NerveModel>(t->alg, 3);
    auto phi = std::make_shared<const PhiMap>(m, nv);
    const double h = cfg.fd_step > 0 ? cfg.fd_step : 1e-5;
    const MoritaReport mr = check_morita(bar_omega(m), omega_bullet(nv), std::make_shared<const IdentityMap>(m), phi,
                                         beta_form(m), c.samples(200), c.seed("morita/manin"), FdConfig{h});
    c.check("Manin/nerve: omega-bar - Phi^*Omega - delta beta = 0", "Manin/nerve Morita identity, top level",
            level_residual(mr.levels, 2), 1e-10);
    c.check("Manin/nerve: Phi^*Theta + d beta = 0", "Manin/nerve Morita identity, level 1",
            level_residual(mr.levels, 1), 1e-6, {{"h", h}});
  }

  auto nv = std::make_shared<const NerveModel>(alg, 4);
  const ShiftedForm om = omega_bullet(nv);
  Rng rng(c.seed("morita/gauge"));
  const ShiftedForm phi = random_nerve_gauge(nv, rng);
  const ShiftedForm moved = gauge_move(om, phi, FdConfig{c.h()});
  auto id = std::make_shared<const IdentityMap>(nv);
  const MoritaReport gm = check_morita(moved, om, id, id, phi, n, c.seed("morita/gauge-check"), FdConfig{c.h()});
  c.check("gauge move: (a + D phi) - a - D phi = 0", "gauge transformation", std::max(gm.max_exact, gm.max_fd), 1e-10);
  ShiftedForm dphi = total_D(phi, FdConfig{c.h()});
  dphi.m += 1;  // D phi as an m-shifted 2-form, so its top level is checked with d as well
  dphi.k -= 1;
  const ClosedReport dd = is_closed(dphi, n, c.seed("morita/dd"), FdConfig{c.h()});
  // d of a finite-difference d: truncation O(h^2) times the form scale.
  c.check("D D phi = 0", "D squares to zero", std::max(dd.max_exact, dd.max_fd), 1e-4);
  c.check("gauge move keeps the form normalized", "gauge transformation", is_normalized(moved, n, c.seed("morita/gnorm")), 1e-12);
  nondegeneracy_checks(c, "gauge-moved nerve form", moved, "morita/gauge-nd");
  appendix_e_checks(c, "gauge move", om, &phi, 10, "morita/gauge-e");
  return rep;
}

const std::map<std::string, Suite>& registry() {
  static const std::map<std::string, Suite> r = {
      {"nerve", nerve_suite},       {"loop", loop_suite},   {"manin", manin_suite},
      {"double", double_suite},     {"simplicial", simplicial_suite}, {"imform", imform_suite},
      {"transgression", transgression_suite}, {"morita", morita_suite},
  };
  return r;
}

}  // namespace

Json RunConfig::to_json() const {
  Json j;
  j["algebra"] = algebra;
  j["triple"] = triple;
  j["grid"] = grid;
  j["fd_step"] = fd_step;
  j["samples"] = samples;
  j["seed"] = seed;
  j["tol_scale"] = tol_scale;
  j["fuzz"] = fuzz;
  return j;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"nerve", "loop", "manin", "double",
                                                 "simplicial", "imform", "transgression", "morita"};
  return names;
}

VerificationReport run_suite(const std::string& name, const RunConfig& cfg) {
  auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown suite: " + name);
  if (cfg.fd_step < 0) throw std::invalid_argument("fd step must be positive");
  if (cfg.tol_scale <= 0) throw std::invalid_argument("tolerance scale must be positive");
  if (cfg.fuzz < 0) throw std::invalid_argument("fuzz count must be non-negative");
  return it->second(cfg);
}

}  // namespace sskit
