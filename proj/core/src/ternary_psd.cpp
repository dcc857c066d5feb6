#include "ternopt/ternary_psd.hpp"

#include <cstdlib>
#include <string>

namespace ternopt::psd {

TernaryMatrix::TernaryMatrix(int n, const std::vector<int>& row_major)
    : n_(n) {
  if (static_cast<int>(row_major.size()) != n * n)
    throw DimensionMismatch("TernaryMatrix: need n*n entries");
  e_.resize(row_major.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int v = row_major[static_cast<std::size_t>(i) * n + j];
      if (v < -1 || v > 1)
        throw Error("TernaryMatrix entry out of {-1,0,1}");
      if (j < i && v != row_major[static_cast<std::size_t>(j) * n + i])
        throw AsymmetricInput("TernaryMatrix: input not symmetric");
      e_[static_cast<std::size_t>(i) * n + j] = static_cast<std::int8_t>(v);
    }
  }
}

TernaryMatrix TernaryMatrix::outer(const TernaryVector& x) {
  const int n = x.size();
  TernaryMatrix X;
  X.n_ = n;
  X.e_.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      X.e_[static_cast<std::size_t>(i) * n + j] =
          static_cast<std::int8_t>(x[i] * x[j]);
  return X;
}

TernaryMatrix TernaryMatrix::bordered(const TernaryVector& x,
                                      const TernaryMatrix& X) {
  const int n = X.n();
  if (x.size() != n)
    throw DimensionMismatch("bordered: |x| != n");
  TernaryMatrix B;
  B.n_ = n + 1;
  B.e_.resize(static_cast<std::size_t>(n + 1) * (n + 1));
  B.e_[0] = 1;
  for (int i = 0; i < n; ++i) {
    B.e_[static_cast<std::size_t>(i) + 1] = static_cast<std::int8_t>(x[i]);
    B.e_[static_cast<std::size_t>(i + 1) * (n + 1)] =
        static_cast<std::int8_t>(x[i]);
    for (int j = 0; j < n; ++j)
      B.e_[static_cast<std::size_t>(i + 1) * (n + 1) + j + 1] =
          static_cast<std::int8_t>(X(i, j));
  }
  return B;
}

Eigen::MatrixXd TernaryMatrix::as_dense() const {
  Eigen::MatrixXd M(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) M(i, j) = (*this)(i, j);
  return M;
}

bool satisfies_ternary_psd_inequalities(const TernaryMatrix& X) {
  const int n = X.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (X(i, j) > X(i, i) || X(i, j) < -X(i, i)) return false;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const int a = X(i, j), b = X(i, k), c = X(j, k);
        if (a + b + c < -1) return false;
        if (-a + b - c < -1) return false;
        if (a - b - c < -1) return false;
        if (-a - b + c < -1) return false;
      }
    }
  }
  return true;
}

std::vector<TernaryVector> decompose_psd(const TernaryMatrix& X) {
  const int n = X.n();
  for (int i = 0; i < n; ++i)
    if (X(i, i) != 0 && X(i, i) != 1)
      throw NotTernaryPsd("diagonal entry not in {0,1}");

  std::vector<bool> assigned(static_cast<std::size_t>(n), false);
  std::vector<TernaryVector> factors;

  // Zero-diagonal rows must be entirely zero.
  for (int i = 0; i < n; ++i) {
    if (X(i, i) != 0) continue;
    for (int j = 0; j < n; ++j)
      if (X(i, j) != 0)
        throw NotTernaryPsd("zero-diagonal row has a nonzero entry");
    assigned[static_cast<std::size_t>(i)] = true;
  }

  for (int pivot = 0; pivot < n; ++pivot) {
    if (assigned[static_cast<std::size_t>(pivot)]) continue;
    std::vector<int> x(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
      if (X(pivot, j) == 0) continue;
      if (assigned[static_cast<std::size_t>(j)])
        throw NotTernaryPsd("support overlaps an earlier block");
      x[static_cast<std::size_t>(j)] = X(pivot, j);
    }
    // The block spanned by the pivot's support must be exactly rank one.
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const int pj = x[static_cast<std::size_t>(j)];
        const int pk = x[static_cast<std::size_t>(k)];
        if (pj != 0 && pk != 0 && X(j, k) != pj * pk)
          throw NotTernaryPsd("block is not rank one");
        if (pj != 0 && pk == 0 && !assigned[static_cast<std::size_t>(k)] &&
            X(j, k) != 0)
          throw NotTernaryPsd("block couples to a later index");
      }
    }
    for (int j = 0; j < n; ++j)
      if (x[static_cast<std::size_t>(j)] != 0)
        assigned[static_cast<std::size_t>(j)] = true;
    factors.emplace_back(std::move(x));
  }
  return factors;
}

bool is_rank_one_extension(const TernaryVector& x, const TernaryMatrix& X) {
  const int n = X.n();
  if (x.size() != n)
    throw DimensionMismatch("is_rank_one_extension: |x| != n");
  for (int i = 0; i < n; ++i)
    if (X(i, i) != std::abs(x[i]))
      throw Error("is_rank_one_extension: diag(X) != |x|");
  if (!satisfies_ternary_psd_inequalities(TernaryMatrix::bordered(x, X)))
    return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (X(i, j) != x[i] * x[j]) return false;
  return true;
}

std::vector<RankOnePoint> enumerate_f1n(int n) {
  if (n < 1 || n > 12)
    throw DimensionTooLarge("enumerate_f1n: n must be in [1,12], got " +
                            std::to_string(n));
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;

  std::vector<RankOnePoint> out;
  out.reserve(static_cast<std::size_t>(1 + (total - 1) / 2));
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t t = idx;
    int first_nonzero = 0;
    bool canonical = true;
    for (int j = 0; j < n; ++j) {
      const int v = static_cast<int>(t % 3) - 1;
      digits[static_cast<std::size_t>(j)] = v;
      t /= 3;
      if (first_nonzero == 0 && v != 0) first_nonzero = v;
    }
    canonical = (first_nonzero >= 0);
    if (!canonical) continue;
    TernaryVector x(digits);
    out.push_back({x, TernaryMatrix::outer(x)});
  }
  return out;
}

std::pair<TernaryVector, TernaryVector> rank2_convex_split(
    const TernaryVector& x1, const TernaryVector& x2) {
  const int n = x1.size();
  if (x2.size() != n)
    throw DimensionMismatch("rank2_convex_split: sizes disagree");
  std::vector<int> sum(static_cast<std::size_t>(n)),
      diff(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (x1[i] != 0 && x2[i] != 0)
      throw OverlappingSupports("rank2_convex_split: coordinate " +
                                std::to_string(i) + " in both supports");
    sum[static_cast<std::size_t>(i)] = x1[i] + x2[i];
    diff[static_cast<std::size_t>(i)] = x1[i] - x2[i];
  }
  return {TernaryVector(sum), TernaryVector(diff)};
}

std::pair<TernaryVector, TernaryVector> binary_lift(const TernaryVector& x) {
  const int n = x.size();
  std::vector<int> z1(static_cast<std::size_t>(n), 0),
      z2(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    if (x[i] > 0) z1[static_cast<std::size_t>(i)] = 1;
    if (x[i] < 0) z2[static_cast<std::size_t>(i)] = 1;
  }
  return {TernaryVector(z1), TernaryVector(z2)};
}

TernaryVector binary_unlift(const TernaryVector& z1, const TernaryVector& z2) {
  if (z1.size() != z2.size())
    throw DimensionMismatch("binary_unlift: length mismatch");
  std::vector<int> x(static_cast<std::size_t>(z1.size()));
  for (int i = 0; i < z1.size(); ++i)
    x[static_cast<std::size_t>(i)] = z1[i] - z2[i];
  return TernaryVector(x);
}

SymMatrix lifted_projection(const TernaryVector& z1, const TernaryVector& z2,
                            const Eigen::MatrixXd& Z11,
                            const Eigen::MatrixXd& Z12,
                            const Eigen::MatrixXd& Z21,
                            const Eigen::MatrixXd& Z22) {
  const auto n = Z11.rows();
  if (z1.size() != n || z2.size() != n || Z12.rows() != n || Z12.cols() != n ||
      Z21.rows() != n || Z21.cols() != n || Z22.rows() != n || Z22.cols() != n)
    throw DimensionMismatch("lifted_projection: block sizes disagree");
  Eigen::MatrixXd S = Z11 + Z22 - Z12 - Z21;
  return SymMatrix(0.5 * (S + S.transpose()));
}

}  // namespace ternopt::psd
