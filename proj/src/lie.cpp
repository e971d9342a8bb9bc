#include "sskit/lie.hpp"

#include <json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sskit {

namespace {

Vec flatten(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

LieAlgebraSpec abelian_spec(int k) {
  if (k < 1) throw std::invalid_argument("abelian-k needs k >= 1");
  LieAlgebraSpec s;
  s.name = "abelian-" + std::to_string(k);
  s.dim = k;
  s.rep_dim = k;
  s.structure_constants.assign(static_cast<size_t>(k) * k * k, 0.0);
  s.pairing = Mat::Identity(k, k);
  for (int i = 0; i < k; ++i) {
    Mat r = Mat::Zero(k, k);
    r(i, i) = 1.0;
    s.rep.push_back(r);
  }
  return s;
}

LieAlgebraSpec so3_spec() {
  LieAlgebraSpec s;
  s.name = "so3";
  s.dim = 3;
  s.rep_dim = 3;
  s.structure_constants.assign(27, 0.0);
  auto put = [&](int i, int j, int k, double v) { s.structure_constants[(i * 3 + j) * 3 + k] = v; };
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    put(i, j, k, 1.0);
    put(j, i, k, -1.0);
  }
  // Adjoint representation: rho(e_i)_{kj} = C[i][j][k].
  for (int i = 0; i < 3; ++i) {
    Mat r = Mat::Zero(3, 3);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r(k, j) = s.structure_constants[(i * 3 + j) * 3 + k];
    s.rep.push_back(r);
  }
  Mat kil = Mat::Zero(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          kil(i, j) += s.structure_constants[(i * 3 + a) * 3 + b] * s.structure_constants[(j * 3 + b) * 3 + a];
  s.pairing = -0.5 * kil;
  return s;
}

// aff(1) = span{x, y}, [x,y] = y, extended by its dual with the coadjoint action.
// Basis order: x, y, x*, y*.
LieAlgebraSpec aff1_double_spec() {
  LieAlgebraSpec s;
  s.name = "aff1-double";
  s.dim = 4;
  s.rep_dim = 3;
  s.structure_constants.assign(64, 0.0);
  auto put = [&](int i, int j, int k, double v) {
    s.structure_constants[(i * 4 + j) * 4 + k] = v;
    s.structure_constants[(j * 4 + i) * 4 + k] = -v;
  };
  put(0, 1, 1, 1.0);
  put(0, 3, 3, -1.0);
  put(1, 3, 2, 1.0);
  Mat p = Mat::Zero(4, 4);
  p(0, 2) = p(2, 0) = 1.0;
  p(1, 3) = p(3, 1) = 1.0;
  s.pairing = p;
  // Block affine representation [[ad*_a, xi], [0, 0]].
  auto e = [](int r, int c) {
    Mat m = Mat::Zero(3, 3);
    m(r, c) = 1.0;
    return m;
  };
  s.rep = {-e(1, 1), e(0, 1), e(0, 2), e(1, 2)};
  return s;
}

// Realified sl(2,C): su(2) basis first, then the upper triangular an part.
LieAlgebraSpec sl2c_spec() {
  using C = std::complex<double>;
  using CMat = Eigen::Matrix2cd;
  const C i1(0.0, 1.0);
  std::vector<CMat> z(6);
  z[0] << i1, 0, 0, -i1;
  z[1] << 0, 1, -1, 0;
  z[2] << 0, i1, i1, 0;
  z[3] << 1, 0, 0, -1;
  z[4] << 0, 1, 0, 0;
  z[5] << 0, i1, 0, 0;
  auto realify = [](const CMat& m) {
    Mat r(4, 4);
    r << m.real(), -m.imag(), m.imag(), m.real();
    return r;
  };
  LieAlgebraSpec s;
  s.name = "sl2c-iwasawa";
  s.dim = 6;
  s.rep_dim = 4;
  for (const auto& m : z) s.rep.push_back(realify(m));
  Mat basis(16, 6);
  for (int a = 0; a < 6; ++a) basis.col(a) = flatten(s.rep[a]);
  Eigen::ColPivHouseholderQR<Mat> qr(basis);
  s.structure_constants.assign(216, 0.0);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      Mat com = s.rep[a] * s.rep[b] - s.rep[b] * s.rep[a];
      Vec cf = qr.solve(flatten(com));
      for (int k = 0; k < 6; ++k) s.structure_constants[(a * 6 + b) * 6 + k] = cf(k);
    }
  Mat p(6, 6);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) p(a, b) = (z[a] * z[b]).trace().imag();
  s.pairing = p;
  return s;
}

Mat mat_from_json(const nlohmann::json& j) {
  const int r = static_cast<int>(j.size());
  const int c = r ? static_cast<int>(j[0].size()) : 0;
  Mat m(r, c);
  for (int a = 0; a < r; ++a) {
    if (static_cast<int>(j[a].size()) != c) throw std::invalid_argument("ragged matrix in config");
    for (int b = 0; b < c; ++b) m(a, b) = j[a][b].get<double>();
  }
  return m;
}

nlohmann::json mat_to_json(const Mat& m) {
  nlohmann::json j = nlohmann::json::array();
  for (int a = 0; a < m.rows(); ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (int b = 0; b < m.cols(); ++b) row.push_back(m(a, b));
    j.push_back(row);
  }
  return j;
}

}  // namespace

LieAlgebra::LieAlgebra(LieAlgebraSpec spec) : spec_(std::move(spec)) {
  const int n = spec_.dim;
  if (n <= 0) throw std::invalid_argument("algebra dimension must be positive");
  if (spec_.structure_constants.size() != static_cast<size_t>(n) * n * n)
    throw std::invalid_argument("structure constants must have dim^3 entries");
  if (static_cast<int>(spec_.rep.size()) != n) throw std::invalid_argument("rep needs one matrix per basis vector");
  for (const auto& r : spec_.rep)
    if (r.rows() != spec_.rep_dim || r.cols() != spec_.rep_dim)
      throw std::invalid_argument("rep matrix has wrong shape");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (std::abs(c(i, j, k) + c(j, i, k)) > 1e-12)
          throw std::invalid_argument("structure constants are not antisymmetric");
  if (spec_.pairing) {
    const Mat& p = *spec_.pairing;
    if (p.rows() != n || p.cols() != n) throw std::invalid_argument("pairing has wrong shape");
    if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("pairing is not symmetric");
  }
  ad_basis_.resize(n);
  for (int i = 0; i < n; ++i) {
    Mat a(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) a(k, j) = c(i, j, k);
    ad_basis_[i] = a;
  }
  basis_.resize(static_cast<Eigen::Index>(spec_.rep_dim) * spec_.rep_dim, n);
  for (int i = 0; i < n; ++i) basis_.col(i) = flatten(spec_.rep[i]);
  if (numerical_rank(basis_) < n) throw std::invalid_argument("representation is not faithful");
  basis_pinv_ = basis_.completeOrthogonalDecomposition().pseudoInverse();
  if (double r = jacobi_residual(); r > 1e-12)
    throw std::invalid_argument("Jacobi identity fails: residual " + std::to_string(r));
  if (double r = rep_residual(); r > 1e-12)
    throw std::invalid_argument("representation is not a homomorphism: residual " + std::to_string(r));
}

LieAlgebra LieAlgebra::builtin(const std::string& name) {
  if (name == "so3") return LieAlgebra(so3_spec());
  if (name == "aff1-double") return LieAlgebra(aff1_double_spec());
  if (name == "sl2c-iwasawa") return LieAlgebra(sl2c_spec());
  if (name.rfind("abelian-", 0) == 0) return LieAlgebra(abelian_spec(std::stoi(name.substr(8))));
  throw std::invalid_argument("unknown algebra: " + name);
}

LieAlgebra LieAlgebra::load(const std::string& name_or_path) {
  std::ifstream in(name_or_path);
  if (!in) return builtin(name_or_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

LieAlgebra LieAlgebra::parse(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("algebra config: ") + e.what());
  }
  LieAlgebraSpec s;
  s.name = j.value("name", std::string("custom"));
  s.dim = j.at("dim").get<int>();
  const int n = s.dim;
  const auto& sc = j.at("structure_constants");
  s.structure_constants.assign(static_cast<size_t>(n) * n * n, 0.0);
  if (static_cast<int>(sc.size()) != n) throw std::invalid_argument("structure_constants must be dim x dim x dim");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k) s.structure_constants[(a * n + b) * n + k] = sc.at(a).at(b).at(k).get<double>();
  if (j.contains("pairing") && !j["pairing"].is_null()) s.pairing = mat_from_json(j["pairing"]);
  for (const auto& r : j.at("rep")) s.rep.push_back(mat_from_json(r));
  s.rep_dim = j.value("rep_dim", s.rep.empty() ? 0 : static_cast<int>(s.rep[0].rows()));
  return LieAlgebra(std::move(s));
}

std::string LieAlgebra::dump() const {
  const int n = dim();
  nlohmann::json j;
  j["name"] = name();
  j["dim"] = n;
  nlohmann::json sc = nlohmann::json::array();
  for (int a = 0; a < n; ++a) {
    nlohmann::json ja = nlohmann::json::array();
    for (int b = 0; b < n; ++b) {
      nlohmann::json jb = nlohmann::json::array();
      for (int k = 0; k < n; ++k) jb.push_back(c(a, b, k));
      ja.push_back(jb);
    }
    sc.push_back(ja);
  }
  j["structure_constants"] = sc;
  if (has_pairing()) j["pairing"] = mat_to_json(pairing());
  j["rep"] = nlohmann::json::array();
  for (const auto& r : spec_.rep) j["rep"].push_back(mat_to_json(r));
  j["rep_dim"] = rep_dim();
  return j.dump(2);
}

Vec LieAlgebra::bracket(const Vec& a, const Vec& b) const {
  if (a.size() != dim() || b.size() != dim()) throw std::invalid_argument("bracket: dimension mismatch");
  return ad(a) * b;
}

Mat LieAlgebra::ad(const Vec& a) const {
  Mat m = Mat::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    if (a(i) != 0.0) m += a(i) * ad_basis_[i];
  return m;
}

Mat LieAlgebra::killing() const {
  Mat k(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) k(i, j) = (ad_basis_[i] * ad_basis_[j]).trace();
  return k;
}

const Mat& LieAlgebra::pairing() const {
  if (!spec_.pairing) throw std::logic_error("no pairing configured for " + name());
  return *spec_.pairing;
}

double LieAlgebra::pair(const Vec& a, const Vec& b) const { return a.dot(pairing() * b); }

Mat LieAlgebra::rep(const Vec& a) const {
  Mat m = Mat::Zero(rep_dim(), rep_dim());
  for (int i = 0; i < dim(); ++i) m += a(i) * spec_.rep[i];
  return m;
}

Vec LieAlgebra::coords(const Mat& x) const {
  Vec v = flatten(x);
  Vec cf = basis_pinv_ * v;
  double res = (basis_ * cf - v).norm();
  if (res > 1e-9 * std::max(1.0, v.norm()))
    throw std::domain_error("matrix is not in the span of the representation (residual " + std::to_string(res) + ")");
  return cf;
}

Mat LieAlgebra::exp(const Vec& a) const { return rep(a).exp(); }

Vec LieAlgebra::log(const Mat& g) const {
  Mat l = g.log();
  if (!l.allFinite()) throw std::domain_error("log: outside the principal logarithm region");
  if ((l.exp() - g).norm() > 1e-9 * std::max(1.0, g.norm()))
    throw std::domain_error("log: outside the principal logarithm region");
  return coords(l);
}

Mat LieAlgebra::adjoint_matrix(const Mat& g) const {
  Mat ginv = g.inverse();
  Mat out(dim(), dim());
  for (int i = 0; i < dim(); ++i) out.col(i) = basis_pinv_ * flatten(g * spec_.rep[i] * ginv);
  return out;
}

Vec LieAlgebra::adjoint(const Mat& g, const Vec& x) const { return coords(g * rep(x) * g.inverse()); }

Vec LieAlgebra::left_trivialize(const Mat& g, const Mat& v) const { return coords(g.inverse() * v); }

Vec LieAlgebra::right_trivialize(const Mat& g, const Mat& v) const { return coords(v * g.inverse()); }

double LieAlgebra::cartan_3form(const Vec& u, const Vec& v, const Vec& w) const { return pair(u, bracket(v, w)); }

Vec LieAlgebra::dexp_left(const Vec& a, const Vec& x, int terms) const {
  Mat ada = ad(a);
  Vec term = x, sum = x;
  double fact = 1.0;
  for (int k = 1; k < terms; ++k) {
    term = -(ada * term);
    fact *= (k + 1);
    sum += term / fact;
  }
  return sum;
}

double LieAlgebra::jacobi_residual() const {
  const int n = dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec r = ad_basis_[i] * ad_basis_[j].col(k) + ad_basis_[j] * ad_basis_[k].col(i) +
                ad_basis_[k] * ad_basis_[i].col(j);
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
      }
  return worst;
}

double LieAlgebra::rep_residual() const {
  const int n = dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat lhs = rep(ad_basis_[i].col(j));
      Mat rhs = spec_.rep[i] * spec_.rep[j] - spec_.rep[j] * spec_.rep[i];
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return worst;
}

QuadraticReport check_quadratic(const LieAlgebra& alg) {
  QuadraticReport r;
  const Mat& p = alg.pairing();
  const int n = alg.dim();
  for (int a = 0; a < n; ++a) {
    Mat ada = alg.ad(Vec::Unit(n, a));
    // <[a,b],c> + <b,[a,c]> for all b,c at once: (ad_a^T P + P ad_a)
    Mat m = ada.transpose() * p + p * ada;
    r.ad_invariance = std::max(r.ad_invariance, m.cwiseAbs().maxCoeff());
  }
  Vec s = singular_values(p);
  r.max_singular = s.size() ? s(0) : 0.0;
  r.min_singular = s.size() ? s(s.size() - 1) : 0.0;
  r.nondegenerate = r.max_singular > kZeroFloor && r.min_singular > 1e-9 * r.max_singular;
  r.ok = r.nondegenerate && r.ad_invariance <= 1e-12;
  return r;
}

}  // namespace sskit
