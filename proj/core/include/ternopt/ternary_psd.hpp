#pragma once

#include <cstdint>
#include <vector>

#include "ternopt/types.hpp"

namespace ternopt::psd {

// Symmetric matrix with entries in {-1, 0, +1}, stored as int8.
class TernaryMatrix {
 public:
  TernaryMatrix() = default;
  TernaryMatrix(int n, const std::vector<int>& row_major);
  static TernaryMatrix outer(const TernaryVector& x);
  // Bordered matrix [[1, x^T], [x, X]].
  static TernaryMatrix bordered(const TernaryVector& x, const TernaryMatrix& X);

  int n() const { return n_; }
  int operator()(int i, int j) const {
    return e_[static_cast<std::size_t>(i) * n_ + j];
  }
  Eigen::MatrixXd as_dense() const;

  bool operator==(const TernaryMatrix& o) const = default;

 private:
  int n_ = 0;
  std::vector<std::int8_t> e_;
};

// Checks the 4*C(n,3) triangle inequalities
//   +-X_ij +- X_ik +- X_jk >= -1   (even number of minus signs per triple)
// and the 2n(n-1) pair inequalities X_ij <= X_ii, X_ij >= -X_ii (i != j).
// For symmetric ternary matrices of order >= 3 this holds iff X is PSD.
bool satisfies_ternary_psd_inequalities(const TernaryMatrix& X);

// Writes a PSD ternary X as sum_r x_r x_r^T with pairwise disjoint supports,
// smallest support index first and each x_r sign-normalized (its first
// nonzero entry is +1). Throws NotTernaryPsd if X admits no such form.
std::vector<TernaryVector> decompose_psd(const TernaryMatrix& X);

// Given diag(X) = |x| entrywise, decides whether [[1, x^T], [x, X]] is PSD,
// i.e. whether X is exactly the rank-one lift x x^T. Uses the inequality
// characterization on the bordered matrix plus entrywise consistency.
bool is_rank_one_extension(const TernaryVector& x, const TernaryMatrix& X);

struct RankOnePoint {
  TernaryVector x;
  TernaryMatrix X;
};

// All rank-one lifts (x, x x^T) with x ternary, one representative per
// matrix: x and -x produce the same lift, so x is sign-normalized. The list
// has 1 + (3^n - 1)/2 entries in a fixed deterministic order.
// Throws DimensionTooLarge for n > 12.
std::vector<RankOnePoint> enumerate_f1n(int n);

// For x1, x2 with disjoint supports, returns (w1, w2) = (x1 + x2, x1 - x2):
// x1 x1^T + x2 x2^T = 1/2 w1 w1^T + 1/2 w2 w2^T with w1, w2 ternary.
// Throws OverlappingSupports if some coordinate is nonzero in both.
std::pair<TernaryVector, TernaryVector> rank2_convex_split(
    const TernaryVector& x1, const TernaryVector& x2);

// x = z1 - z2 with z1 = max(x, 0), z2 = max(-x, 0); z1 + z2 <= 1 entrywise.
std::pair<TernaryVector, TernaryVector> binary_lift(const TernaryVector& x);

// Inverse map: z1 - z2 entrywise (the ternary range is validated).
TernaryVector binary_unlift(const TernaryVector& z1, const TernaryVector& z2);

// Recovers the ternary quadratic form from a binary-lifted block product:
// returns Z11 + Z22 - Z12 - Z21, symmetrized.
SymMatrix lifted_projection(const TernaryVector& z1, const TernaryVector& z2,
                            const Eigen::MatrixXd& Z11,
                            const Eigen::MatrixXd& Z12,
                            const Eigen::MatrixXd& Z21,
                            const Eigen::MatrixXd& Z22);

}  // namespace ternopt::psd
