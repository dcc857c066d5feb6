#include <doctest.h>

#include <Eigen/Dense>
#include <set>
#include <vector>

#include "ternopt/errors.hpp"
#include "ternopt/ternary_psd.hpp"

using namespace ternopt;
using psd::TernaryMatrix;

namespace {

TernaryVector tv(std::vector<int> v) { return TernaryVector(std::move(v)); }

double lambda_min(const TernaryMatrix& X) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.as_dense(),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// All symmetric ternary matrices of order n, by odometer over the lower
// triangle (diagonal included).
template <typename F>
void for_each_symmetric_ternary(int n, F&& f) {
  const int m = n * (n + 1) / 2;
  std::vector<int> digits(static_cast<std::size_t>(m), 0);
  for (;;) {
    std::vector<int> e(static_cast<std::size_t>(n * n));
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        int v = digits[static_cast<std::size_t>(k++)] - 1;
        e[static_cast<std::size_t>(i * n + j)] = v;
        e[static_cast<std::size_t>(j * n + i)] = v;
      }
    f(TernaryMatrix(n, e));
    int pos = 0;
    while (pos < m && ++digits[static_cast<std::size_t>(pos)] == 3)
      digits[static_cast<std::size_t>(pos++)] = 0;
    if (pos == m) break;
  }
}

}  // namespace

TEST_CASE("inequality recognizer on handpicked matrices") {
  CHECK(psd::satisfies_ternary_psd_inequalities(
      TernaryMatrix(3, {1, 0, 0, 0, 1, 0, 0, 0, 1})));
  // X_12 = 1 > X_22 = 0 violates a pair inequality.
  CHECK_FALSE(psd::satisfies_ternary_psd_inequalities(
      TernaryMatrix(3, {1, 1, 0, 1, 0, 0, 0, 0, 1})));
  // -X_12 - X_13 + X_23 = -3 < -1 violates a triangle inequality
  // (and indeed det = -4, so the matrix is not PSD).
  TernaryMatrix bad(3, {1, 1, 1, 1, 1, -1, 1, -1, 1});
  CHECK_FALSE(psd::satisfies_ternary_psd_inequalities(bad));
  CHECK(bad.as_dense().determinant() == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("recognizer agrees with the spectrum for every order-3 matrix") {
  int count = 0, psd_count = 0;
  for_each_symmetric_ternary(3, [&](const TernaryMatrix& X) {
    ++count;
    bool by_ineq = psd::satisfies_ternary_psd_inequalities(X);
    bool by_spec = lambda_min(X) >= -1e-9;
    CHECK(by_ineq == by_spec);
    if (by_ineq) ++psd_count;
  });
  CHECK(count == 729);  // 3^6 lower triangles
  CHECK(psd_count > 0);
}

TEST_CASE("decomposition recovers disjoint rank-one factors") {
  SUBCASE("zero matrix decomposes to nothing") {
    CHECK(psd::decompose_psd(TernaryMatrix(3, std::vector<int>(9, 0))).empty());
  }
  SUBCASE("pure outer product returns its sign-normalized root") {
    TernaryVector x = tv({1, -1, 0});
    auto parts = psd::decompose_psd(TernaryMatrix::outer(x));
    REQUIRE(parts.size() == 1);
    CHECK(parts[0] == x);
  }
  SUBCASE("two blocks with disjoint supports") {
    // (1,-1,0)(1,-1,0)^T + (0,0,1)(0,0,1)^T
    TernaryMatrix X(3, {1, -1, 0, -1, 1, 0, 0, 0, 1});
    auto parts = psd::decompose_psd(X);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == tv({1, -1, 0}));
    CHECK(parts[1] == tv({0, 0, 1}));
  }
  SUBCASE("rejects matrices outside the cone") {
    CHECK_THROWS_AS(
        psd::decompose_psd(TernaryMatrix(3, {1, 1, 1, 1, 1, -1, 1, -1, 1})),
        NotTernaryPsd);
  }
  SUBCASE("sum of outer products reproduces X on every accepted order-4 matrix") {
    for_each_symmetric_ternary(4, [&](const TernaryMatrix& X) {
      if (!psd::satisfies_ternary_psd_inequalities(X)) return;
      auto parts = psd::decompose_psd(X);
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(4, 4);
      std::set<int> used;
      for (const TernaryVector& x : parts) {
        Eigen::VectorXd v = x.as_vector();
        sum += v * v.transpose();
        for (int i = 0; i < 4; ++i)
          if (x[i] != 0) CHECK(used.insert(i).second);  // disjoint supports
      }
      CHECK((sum - X.as_dense()).cwiseAbs().maxCoeff() == 0.0);
    });
  }
}

TEST_CASE("rank-one extension test") {
  CHECK(psd::is_rank_one_extension(tv({0, 0}), TernaryMatrix(2, {0, 0, 0, 0})));
  CHECK(psd::is_rank_one_extension(tv({1, 1}), TernaryMatrix(2, {1, 1, 1, 1})));
  CHECK_FALSE(
      psd::is_rank_one_extension(tv({1, 1}), TernaryMatrix(2, {1, -1, -1, 1})));
}

TEST_CASE("rank-one lift enumeration counts") {
  CHECK(psd::enumerate_f1n(1).size() == 2);
  CHECK(psd::enumerate_f1n(2).size() == 5);
  CHECK(psd::enumerate_f1n(3).size() == 14);
  CHECK(psd::enumerate_f1n(4).size() == 41);
  CHECK_THROWS_AS(psd::enumerate_f1n(13), DimensionTooLarge);

  // Each element is consistent: X = x x^T, diag = |x|, x sign-normalized.
  for (const auto& pt : psd::enumerate_f1n(3)) {
    CHECK(pt.X == TernaryMatrix::outer(pt.x));
    int first = 0;
    for (int i = 0; i < pt.x.size(); ++i)
      if (pt.x[i] != 0) {
        first = pt.x[i];
        break;
      }
    CHECK(first >= 0);
    CHECK(psd::is_rank_one_extension(pt.x, pt.X));
  }
}

TEST_CASE("rank-two convex split") {
  SUBCASE("unit vectors produce the identity") {
    auto [w1, w2] = psd::rank2_convex_split(tv({1, 0}), tv({0, 1}));
    CHECK(w1 == tv({1, 1}));
    CHECK(w2 == tv({1, -1}));
    Eigen::MatrixXd half =
        0.5 * (w1.as_vector() * w1.as_vector().transpose() +
               w2.as_vector() * w2.as_vector().transpose());
    CHECK((half - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("degenerate second factor") {
    auto [w1, w2] = psd::rank2_convex_split(tv({1, 0}), tv({0, 0}));
    CHECK(w1 == tv({1, 0}));
    CHECK(w2 == tv({1, 0}));
  }
  SUBCASE("general disjoint supports recombine exactly") {
    TernaryVector x1 = tv({1, -1, 0, 0}), x2 = tv({0, 0, 1, 1});
    auto [w1, w2] = psd::rank2_convex_split(x1, x2);
    Eigen::MatrixXd lhs = x1.as_vector() * x1.as_vector().transpose() +
                          x2.as_vector() * x2.as_vector().transpose();
    Eigen::MatrixXd rhs =
        0.5 * (w1.as_vector() * w1.as_vector().transpose() +
               w2.as_vector() * w2.as_vector().transpose());
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("overlapping supports rejected") {
    CHECK_THROWS_AS(psd::rank2_convex_split(tv({1, 0}), tv({1, 0})),
                    OverlappingSupports);
  }
}

TEST_CASE("binary lift and unlift") {
  auto [z1, z2] = psd::binary_lift(tv({1, -1, 0}));
  CHECK(z1 == tv({1, 0, 0}));
  CHECK(z2 == tv({0, 1, 0}));
  auto [a, b] = psd::binary_lift(tv({0, 0}));
  CHECK(a == tv({0, 0}));
  CHECK(b == tv({0, 0}));
  // Roundtrip over all 27 order-3 points.
  for (int c0 = -1; c0 <= 1; ++c0)
    for (int c1 = -1; c1 <= 1; ++c1)
      for (int c2 = -1; c2 <= 1; ++c2) {
        TernaryVector x = tv({c0, c1, c2});
        auto [u, v] = psd::binary_lift(x);
        for (int i = 0; i < 3; ++i) CHECK(u[i] + v[i] <= 1);
        CHECK(psd::binary_unlift(u, v) == x);
      }
}

TEST_CASE("binary block projection") {
  const int n = 2;
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n);
  SUBCASE("zero blocks") {
    CHECK(psd::lifted_projection(tv({0, 0}), tv({0, 0}), Z, Z, Z, Z)
              .mat()
              .isZero(0.0));
  }
  SUBCASE("identity in the first block passes through") {
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    CHECK((psd::lifted_projection(tv({1, 1}), tv({0, 0}), I, Z, Z, Z).mat() - I)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
  SUBCASE("rank-one lifted blocks project to the outer product") {
    TernaryVector x = tv({1, -1});
    auto [z1, z2] = psd::binary_lift(x);
    Eigen::VectorXd v1 = z1.as_vector(), v2 = z2.as_vector();
    SymMatrix back = psd::lifted_projection(z1, z2, v1 * v1.transpose(),
                                            v1 * v2.transpose(),
                                            v2 * v1.transpose(),
                                            v2 * v2.transpose());
    Eigen::VectorXd xv = x.as_vector();
    CHECK((back.mat() - xv * xv.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("a fractional vertex of the triangle-pair polytope is not PSD") {
  Eigen::MatrixXd V(3, 3);
  V << 1, 1, -1, 1, 1, 1, -1, 1, 3;
  V /= 3.0;
  // All four triangle inequalities on the unique triple hold...
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1}) {
      double lhs = s1 * V(0, 1) + s2 * V(0, 2) + s1 * s2 * V(1, 2);
      CHECK(lhs >= -1.0 - 1e-12);
    }
  // ...and every pair inequality |V_ij| <= V_ii as well...
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(V(i, j)) <= V(i, i) + 1e-12);
  // ...yet the matrix has a negative eigenvalue (frozen reference
  // lambda_min = -0.18718427093627674, det = -4/27).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(V, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() ==
        doctest::Approx(-0.18718427093627674).epsilon(1e-9));
}
