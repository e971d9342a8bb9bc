#include "sskit/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sskit {

namespace {

Eigen::BDCSVD<Mat> full_svd(const Mat& a) {
  return Eigen::BDCSVD<Mat>(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

int rank_from(const Vec& s, double rel) {
  if (s.size() == 0) return 0;
  double smax = s(0);
  if (smax < kZeroFloor) return 0;
  int r = 0;
  while (r < s.size() && s(r) > rel * smax) ++r;
  return r;
}

}  // namespace

Vec singular_values(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return Vec(0);
  return Eigen::BDCSVD<Mat>(a).singularValues();
}

RankSplit rank_split(const Mat& a, double rel) {
  RankSplit out;
  Vec s = singular_values(a);
  out.rank = rank_from(s, rel);
  out.smax = s.size() ? s(0) : 0.0;
  if (out.rank > 0) out.kept_min = s(out.rank - 1);
  if (out.rank < s.size()) out.dropped_max = s(out.rank);
  if (out.rank > 0 && out.dropped_max > kZeroFloor * std::max(1.0, out.smax))
    out.ill_conditioned = out.kept_min < 10.0 * out.dropped_max;
  return out;
}

int numerical_rank(const Mat& a, double rel) { return rank_split(a, rel).rank; }

Mat null_space(const Mat& a, double rel) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return Mat::Identity(n, n);
  auto svd = full_svd(a);
  int r = rank_from(svd.singularValues(), rel);
  return svd.matrixV().rightCols(n - r);
}

Mat range_basis(const Mat& a, double rel) {
  if (a.rows() == 0 || a.cols() == 0) return Mat(a.rows(), 0);
  auto svd = full_svd(a);
  int r = rank_from(svd.singularValues(), rel);
  return svd.matrixU().leftCols(r);
}

Mat complement_in(const Mat& ambient, const Mat& b, double rel) {
  if (b.cols() == 0) return ambient;
  // Coordinates of range(b) inside the ambient basis, then their complement.
  Mat coords = ambient.transpose() * b;
  Mat k = null_space(coords.transpose(), rel);
  return ambient * k;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

int Rng::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

Vec Rng::normal_vec(int n, double sigma) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = sigma * normal();
  return v;
}

Mat Rng::normal_mat(int r, int c, double sigma) {
  Mat m(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) m(i, j) = sigma * normal();
  return m;
}

Mat Rng::well_conditioned(int n) {
  if (n == 0) return Mat(0, 0);
  Eigen::HouseholderQR<Mat> qr(normal_mat(n, n));
  Mat q = qr.householderQ();
  Vec d(n);
  for (int i = 0; i < n; ++i) d(i) = uniform(0.5, 2.0);
  return q * d.asDiagonal();
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  // splitmix64 finalizer
  std::uint64_t z = base ^ h;
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace sskit
