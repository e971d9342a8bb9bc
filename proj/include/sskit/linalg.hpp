#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string_view>

namespace sskit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Relative singular-value cutoff for every numerical rank decision.
inline constexpr double kRankCutoff = 1e-9;
/// Matrices whose largest singular value is below this are treated as zero.
inline constexpr double kZeroFloor = 1e-13;

struct RankSplit {
  int rank = 0;
  double smax = 0.0;
  double kept_min = 0.0;     // smallest singular value counted in the rank
  double dropped_max = 0.0;  // largest singular value discarded
  /// kept/dropped ratio below 10: the cutoff sits in a poorly separated spectrum.
  bool ill_conditioned = false;
};

Vec singular_values(const Mat& a);
RankSplit rank_split(const Mat& a, double rel = kRankCutoff);
int numerical_rank(const Mat& a, double rel = kRankCutoff);

/// Orthonormal basis (columns) of ker a.
Mat null_space(const Mat& a, double rel = kRankCutoff);
/// Orthonormal basis (columns) of the column space of a.
Mat range_basis(const Mat& a, double rel = kRankCutoff);
/// Orthonormal basis of the orthogonal complement of range(b) inside span(ambient).
/// `ambient` must have orthonormal columns; result is expressed in full coordinates.
Mat complement_in(const Mat& ambient, const Mat& b, double rel = kRankCutoff);

double binomial(int n, int k);

/// Seeded generator; every random draw in the library flows through this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive
  Vec normal_vec(int n, double sigma = 1.0);
  Mat normal_mat(int r, int c, double sigma = 1.0);
  /// Random orthogonal matrix times a diagonal in [0.5, 2]; used for basis changes.
  Mat well_conditioned(int n);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Stable per-check seed so that checks stay reproducible when reordered.
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);

}  // namespace sskit
