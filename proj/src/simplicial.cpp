#include "sskit/simplicial.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sskit {

namespace {

void relevel(IndexWord& w) {
  int lvl = w.source;
  for (int k = static_cast<int>(w.gens.size()) - 1; k >= 0; --k) {
    w.gens[k].level = lvl;
    lvl = w.gens[k].target();
  }
}

void check_gen(const Gen& g) {
  if (g.kind == 'd') {
    if (g.level < 1 || g.index < 0 || g.index > g.level)
      throw std::invalid_argument("face index out of range: d" + std::to_string(g.index) + " on level " +
                                  std::to_string(g.level));
  } else if (g.kind == 's') {
    if (g.level < 0 || g.index < 0 || g.index > g.level)
      throw std::invalid_argument("degeneracy index out of range: s" + std::to_string(g.index) + " on level " +
                                  std::to_string(g.level));
  } else {
    throw std::invalid_argument("unknown generator kind");
  }
}

// One rewrite of the adjacent pair (a o b); returns false if already normal.
bool rewrite_pair(const Gen& a, const Gen& b, std::vector<Gen>& out) {
  out.clear();
  if (a.kind == 'd' && b.kind == 'd') {
    if (a.index < b.index) {
      out = {{'d', 0, b.index - 1}, {'d', 0, a.index}};
      return true;
    }
    return false;
  }
  if (a.kind == 's' && b.kind == 's') {
    if (a.index <= b.index) {
      out = {{'s', 0, b.index + 1}, {'s', 0, a.index}};
      return true;
    }
    return false;
  }
  if (a.kind == 'd' && b.kind == 's') {
    const int i = a.index, j = b.index;
    if (i < j) out = {{'s', 0, j - 1}, {'d', 0, i}};
    else if (i == j || i == j + 1) out = {};
    else out = {{'s', 0, j}, {'d', 0, i - 1}};
    return true;
  }
  return false;  // s o d is already in normal order
}

Mat stack_rows(const std::vector<Mat>& ms, int cols) {
  int rows = 0;
  for (const auto& m : ms) rows += static_cast<int>(m.rows());
  Mat out(rows, cols);
  int r = 0;
  for (const auto& m : ms) {
    out.middleRows(r, m.rows()) = m;
    r += static_cast<int>(m.rows());
  }
  return out;
}

nlohmann::json mat_json(const Mat& m) {
  nlohmann::json j = nlohmann::json::array();
  for (int a = 0; a < m.rows(); ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (int b = 0; b < m.cols(); ++b) row.push_back(m(a, b));
    j.push_back(row);
  }
  return j;
}

Mat json_mat(const nlohmann::json& j, int rows, int cols) {
  Mat m(rows, cols);
  if (static_cast<int>(j.size()) != rows) throw std::invalid_argument("matrix row count mismatch");
  for (int a = 0; a < rows; ++a) {
    if (static_cast<int>(j[a].size()) != cols) throw std::invalid_argument("matrix column count mismatch");
    for (int b = 0; b < cols; ++b) m(a, b) = j[a][b].get<double>();
  }
  return m;
}

// Surjections [l] ->> [k] as nondecreasing value lists.
void surjections(int l, int k, std::vector<Monotone>& out) {
  if (k > l || k < 0) return;
  Monotone cur(l + 1, 0);
  std::function<void(int, int)> rec = [&](int pos, int val) {
    if (pos == l + 1) {
      if (val == k) out.push_back(cur);
      return;
    }
    // stay
    cur[pos] = val;
    rec(pos + 1, val);
    if (val + 1 <= k) {
      cur[pos] = val + 1;
      rec(pos + 1, val + 1);
    }
  };
  cur[0] = 0;
  rec(1, 0);
}

struct GammaLevel {
  std::vector<Monotone> sigmas;
  std::vector<int> ks;
  std::vector<int> offset;
  int dim = 0;
  std::map<Monotone, int> index;
};

GammaLevel gamma_level(const ChainComplex& c, int l) {
  GammaLevel g;
  const int n = c.top();
  for (int k = 0; k <= std::min(l, n); ++k) {
    std::vector<Monotone> ss;
    surjections(l, k, ss);
    for (auto& s : ss) {
      g.index[s] = static_cast<int>(g.sigmas.size());
      g.sigmas.push_back(s);
      g.ks.push_back(k);
      g.offset.push_back(g.dim);
      g.dim += c.dims[k];
    }
  }
  return g;
}

}  // namespace

IndexWord make_word(int source, const std::vector<std::pair<char, int>>& gens) {
  IndexWord w;
  w.source = source;
  for (const auto& [k, i] : gens) w.gens.push_back({k, 0, i});
  relevel(w);
  validate_word(w);
  return w;
}

void validate_word(const IndexWord& w) {
  int lvl = w.source;
  for (int k = static_cast<int>(w.gens.size()) - 1; k >= 0; --k) {
    const Gen& g = w.gens[k];
    if (g.level != lvl) throw std::invalid_argument("word is not composable at position " + std::to_string(k));
    check_gen(g);
    lvl = g.target();
  }
}

std::string to_string(const IndexWord& w) {
  if (w.gens.empty()) return "id[" + std::to_string(w.source) + "]";
  std::string s;
  for (size_t k = 0; k < w.gens.size(); ++k) {
    if (k) s += " ";
    s += w.gens[k].kind;
    s += std::to_string(w.gens[k].index);
  }
  return s + " [" + std::to_string(w.source) + "]";
}

IndexWord normalize_word(const IndexWord& w) {
  validate_word(w);
  IndexWord cur = w;
  std::vector<Gen> repl;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t k = 0; k + 1 < cur.gens.size(); ++k) {
      if (rewrite_pair(cur.gens[k], cur.gens[k + 1], repl)) {
        cur.gens.erase(cur.gens.begin() + k, cur.gens.begin() + k + 2);
        cur.gens.insert(cur.gens.begin() + k, repl.begin(), repl.end());
        relevel(cur);
        changed = true;
        break;
      }
    }
  }
  return cur;
}

int permutation_sign(const std::vector<int>& perm) {
  int inv = 0;
  for (size_t a = 0; a < perm.size(); ++a)
    for (size_t b = a + 1; b < perm.size(); ++b)
      if (perm[a] > perm[b]) ++inv;
  return (inv % 2) ? -1 : 1;
}

std::vector<Shuffle> enumerate_shuffles(int p, int q) {
  if (p < 0 || q < 0) throw std::invalid_argument("shuffle sizes must be nonnegative");
  std::vector<Shuffle> out;
  const int n = p + q;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + p, true);
  // prev_permutation over a sorted-descending mask visits every p-subset once.
  do {
    Shuffle s;
    s.p = p;
    s.q = q;
    for (int i = 0; i < n; ++i)
      if (pick[i]) s.image.push_back(i);
    for (int i = 0; i < n; ++i)
      if (!pick[i]) s.image.push_back(i);
    s.sign = permutation_sign(s.image);
    out.push_back(std::move(s));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

std::vector<Monotone> simplex_k(int l, int k) {
  std::vector<Monotone> out;
  Monotone cur(k + 1, 0);
  std::function<void(int, int)> rec = [&](int pos, int lo) {
    if (pos == k + 1) {
      out.push_back(cur);
      return;
    }
    for (int v = lo; v <= l; ++v) {
      cur[pos] = v;
      rec(pos + 1, v);
    }
  };
  rec(0, 0);
  return out;
}

std::vector<Monotone> boundary_k(int l, int k) {
  std::vector<Monotone> out;
  for (auto& f : simplex_k(l, k)) {
    std::vector<bool> hit(l + 1, false);
    for (int v : f) hit[v] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) out.push_back(f);
  }
  return out;
}

std::vector<Monotone> horn_k(int l, int j, int k) {
  std::vector<Monotone> out;
  for (auto& f : simplex_k(l, k)) {
    std::vector<bool> hit(l + 1, false);
    for (int v : f) hit[v] = true;
    hit[j] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) out.push_back(f);
  }
  return out;
}

double SimplicialVectorSpace::identity_residual() const {
  const int n = top();
  double worst = 0.0;
  auto upd = [&](const Mat& a, const Mat& b) {
    if (a.size()) worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
  };
  for (int l = 2; l <= n; ++l)
    for (int j = 0; j <= l; ++j)
      for (int i = 0; i < j; ++i) upd(d(l - 1, i) * d(l, j), d(l - 1, j - 1) * d(l, i));
  for (int l = 0; l + 2 <= n; ++l)
    for (int j = 0; j <= l; ++j)
      for (int i = 0; i <= j; ++i) upd(s(l + 1, i) * s(l, j), s(l + 1, j + 1) * s(l, i));
  for (int l = 0; l + 1 <= n; ++l)
    for (int j = 0; j <= l; ++j)
      for (int i = 0; i <= l + 1; ++i) {
        Mat lhs = d(l + 1, i) * s(l, j);
        if (i == j || i == j + 1) upd(lhs, Mat::Identity(dims[l], dims[l]));
        else if (i < j) upd(lhs, s(l - 1, j - 1) * d(l, i));
        else upd(lhs, s(l - 1, j) * d(l, i - 1));
      }
  return worst;
}

std::string SimplicialVectorSpace::to_json() const {
  nlohmann::json j;
  j["dims"] = dims;
  j["faces"] = nlohmann::json::array();
  for (int l = 1; l <= top(); ++l) {
    nlohmann::json lv = nlohmann::json::array();
    for (const auto& m : faces[l]) lv.push_back(mat_json(m));
    j["faces"].push_back(lv);
  }
  j["degeneracies"] = nlohmann::json::array();
  for (int l = 0; l < top(); ++l) {
    nlohmann::json lv = nlohmann::json::array();
    for (const auto& m : degens[l]) lv.push_back(mat_json(m));
    j["degeneracies"].push_back(lv);
  }
  return j.dump();
}

SimplicialVectorSpace SimplicialVectorSpace::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  SimplicialVectorSpace v;
  v.dims = j.at("dims").get<std::vector<int>>();
  const int n = v.top();
  v.faces.assign(n + 1, {});
  v.degens.assign(n + 1, {});
  for (int l = 1; l <= n; ++l)
    for (int i = 0; i <= l; ++i) v.faces[l].push_back(json_mat(j.at("faces").at(l - 1).at(i), v.dims[l - 1], v.dims[l]));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i <= l; ++i)
      v.degens[l].push_back(json_mat(j.at("degeneracies").at(l).at(i), v.dims[l + 1], v.dims[l]));
  return v;
}

Mat evaluate_word(const SimplicialVectorSpace& v, const IndexWord& w) {
  validate_word(w);
  Mat m = Mat::Identity(v.dims.at(w.source), v.dims.at(w.source));
  for (int k = static_cast<int>(w.gens.size()) - 1; k >= 0; --k) {
    const Gen& g = w.gens[k];
    if (g.level > v.top() || g.target() > v.top()) throw std::out_of_range("word leaves the truncation range");
    m = (g.kind == 'd' ? v.d(g.level, g.index) : v.s(g.level, g.index)) * m;
  }
  return m;
}

ChainComplex random_chain_complex(Rng& rng, int n, int max_dim) {
  ChainComplex c;
  c.dims.resize(n + 1);
  for (int k = 0; k <= n; ++k) c.dims[k] = rng.uniform_int(0, max_dim);
  c.boundary.assign(n + 1, Mat());
  c.boundary[0] = Mat(0, c.dims[0]);
  for (int k = 1; k <= n; ++k) {
    if (k == 1) {
      c.boundary[1] = rng.normal_mat(c.dims[0], c.dims[1]);
    } else {
      Mat z = null_space(c.boundary[k - 1]);
      c.boundary[k] = z * rng.normal_mat(static_cast<int>(z.cols()), c.dims[k]);
    }
  }
  return c;
}

SimplicialVectorSpace gamma_construction(const ChainComplex& c, int top, Rng* basis_change) {
  std::vector<GammaLevel> lv;
  for (int l = 0; l <= top; ++l) lv.push_back(gamma_level(c, l));
  SimplicialVectorSpace v;
  v.faces.assign(top + 1, {});
  v.degens.assign(top + 1, {});
  for (int l = 0; l <= top; ++l) v.dims.push_back(lv[l].dim);

  for (int l = 1; l <= top; ++l)
    for (int i = 0; i <= l; ++i) {
      Mat m = Mat::Zero(lv[l - 1].dim, lv[l].dim);
      for (size_t a = 0; a < lv[l].sigmas.size(); ++a) {
        const Monotone& sig = lv[l].sigmas[a];
        const int k = lv[l].ks[a];
        const int ck = c.dims[k];
        Monotone comp;
        for (int t = 0; t <= l; ++t)
          if (t != i) comp.push_back(sig[t]);
        const bool hits_all = std::set<int>(comp.begin(), comp.end()).size() == static_cast<size_t>(k + 1);
        if (hits_all) {
          int b = lv[l - 1].index.at(comp);
          m.block(lv[l - 1].offset[b], lv[l].offset[a], ck, ck) = Mat::Identity(ck, ck);
        } else if (comp.back() == k - 1) {
          // Missing value is the last one: the composite factors through the last coface.
          int b = lv[l - 1].index.at(comp);
          const double sign = (k % 2) ? -1.0 : 1.0;
          m.block(lv[l - 1].offset[b], lv[l].offset[a], c.dims[k - 1], ck) = sign * c.boundary[k];
        }
      }
      v.faces[l].push_back(m);
    }
  for (int l = 0; l < top; ++l)
    for (int j = 0; j <= l; ++j) {
      Mat m = Mat::Zero(lv[l + 1].dim, lv[l].dim);
      for (size_t a = 0; a < lv[l].sigmas.size(); ++a) {
        const Monotone& sig = lv[l].sigmas[a];
        Monotone comp;
        for (int t = 0; t <= l + 1; ++t) comp.push_back(sig[t <= j ? t : t - 1]);
        int b = lv[l + 1].index.at(comp);
        const int ck = c.dims[lv[l].ks[a]];
        m.block(lv[l + 1].offset[b], lv[l].offset[a], ck, ck) = Mat::Identity(ck, ck);
      }
      v.degens[l].push_back(m);
    }

  if (basis_change) {
    std::vector<Mat> a, ainv;
    for (int l = 0; l <= top; ++l) {
      a.push_back(basis_change->well_conditioned(v.dims[l]));
      ainv.push_back(a.back().inverse());
    }
    for (int l = 1; l <= top; ++l)
      for (auto& m : v.faces[l]) m = a[l - 1] * m * ainv[l];
    for (int l = 0; l < top; ++l)
      for (auto& m : v.degens[l]) m = a[l + 1] * m * ainv[l];
  }
  return v;
}

SimplicialVectorSpace constant_space(int k, int top) {
  SimplicialVectorSpace v;
  v.dims.assign(top + 1, k);
  v.faces.assign(top + 1, {});
  v.degens.assign(top + 1, {});
  for (int l = 1; l <= top; ++l) v.faces[l].assign(l + 1, Mat::Identity(k, k));
  for (int l = 0; l < top; ++l) v.degens[l].assign(l + 1, Mat::Identity(k, k));
  return v;
}

ChainComplex moore_complex(const SimplicialVectorSpace& v, std::vector<Mat>* bases) {
  const int n = v.top();
  std::vector<Mat> b(n + 1);
  for (int l = 0; l <= n; ++l) {
    if (l == 0) {
      b[0] = Mat::Identity(v.dims[0], v.dims[0]);
      continue;
    }
    std::vector<Mat> ds;
    for (int i = 0; i < l; ++i) ds.push_back(v.d(l, i));
    b[l] = null_space(stack_rows(ds, v.dims[l]));
  }
  ChainComplex c;
  c.boundary.assign(n + 1, Mat());
  for (int l = 0; l <= n; ++l) c.dims.push_back(static_cast<int>(b[l].cols()));
  c.boundary[0] = Mat(0, c.dims[0]);
  for (int l = 1; l <= n; ++l) c.boundary[l] = ((l % 2) ? -1.0 : 1.0) * b[l - 1].transpose() * v.d(l, l) * b[l];
  if (bases) *bases = b;
  return c;
}

ChainComplex quotient_complex(const SimplicialVectorSpace& v, std::vector<Mat>* bases) {
  const int n = v.top();
  std::vector<Mat> q(n + 1);
  for (int l = 0; l <= n; ++l) {
    const Mat id = Mat::Identity(v.dims[l], v.dims[l]);
    if (l == 0) {
      q[0] = id;
      continue;
    }
    int cols = 0;
    for (int j = 0; j < l; ++j) cols += v.dims[l - 1];
    Mat imgs(v.dims[l], cols);
    int c0 = 0;
    for (int j = 0; j < l; ++j) {
      imgs.middleCols(c0, v.dims[l - 1]) = v.s(l - 1, j);
      c0 += v.dims[l - 1];
    }
    q[l] = complement_in(id, range_basis(imgs));
  }
  ChainComplex c;
  c.boundary.assign(n + 1, Mat());
  for (int l = 0; l <= n; ++l) c.dims.push_back(static_cast<int>(q[l].cols()));
  c.boundary[0] = Mat(0, c.dims[0]);
  for (int l = 1; l <= n; ++l) {
    Mat sum = Mat::Zero(v.dims[l - 1], v.dims[l]);
    for (int i = 0; i <= l; ++i) sum += ((i % 2) ? -1.0 : 1.0) * v.d(l, i);
    c.boundary[l] = q[l - 1].transpose() * sum * q[l];
  }
  if (bases) *bases = q;
  return c;
}

DoldKanReport dold_kan_compare(const SimplicialVectorSpace& v) {
  DoldKanReport r;
  ChainComplex m = moore_complex(v), q = quotient_complex(v);
  r.moore_dims = m.dims;
  r.quotient_dims = q.dims;
  r.moore_homology = homology(m).dims;
  r.quotient_homology = homology(q).dims;
  r.ok = r.moore_dims == r.quotient_dims && r.moore_homology == r.quotient_homology;
  return r;
}

int rank_formula(const std::vector<int>& dims, int l) {
  double s = dims.at(l);
  for (int i = 0; i < l; ++i) s -= ((i % 2) ? -1.0 : 1.0) * binomial(l, i + 1) * dims.at(l - 1 - i);
  return static_cast<int>(std::lround(s));
}

IndexWord random_word(Rng& rng, int max_level, int length) {
  IndexWord w;
  w.source = rng.uniform_int(0, max_level);
  int level = w.source;
  std::vector<Gen> acting;  // in order of application
  for (int k = 0; k < length; ++k) {
    const bool can_face = level >= 1, can_degen = level < max_level;
    const bool face = can_face && (!can_degen || rng.uniform_int(0, 1) == 0);
    if (!can_face && !can_degen) break;
    Gen g;
    g.kind = face ? 'd' : 's';
    g.level = level;
    g.index = rng.uniform_int(0, face ? level : level);
    acting.push_back(g);
    level = g.target();
  }
  w.gens.assign(acting.rbegin(), acting.rend());
  return w;
}

WordFuzzReport word_fuzz(int words, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "word-fuzz"));
  WordFuzzReport r;
  constexpr int kTop = 4;
  SimplicialVectorSpace v;
  for (int k = 0; k < words; ++k) {
    if (k % 100 == 0) v = gamma_construction(random_chain_complex(rng, 3, 3), kTop, &rng);
    const IndexWord w = random_word(rng, kTop, rng.uniform_int(1, 8));
    const IndexWord n = normalize_word(w);
    ++r.words;
    const Mat a = evaluate_word(v, w), b = evaluate_word(v, n);
    const double defect = a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
    r.max_defect = std::max(r.max_defect, defect);
    if (a.rows() != b.rows() || a.cols() != b.cols() || defect > 1e-9) ++r.mismatches;
    if (!(normalize_word(n) == n)) ++r.not_idempotent;
  }
  return r;
}

}  // namespace sskit
