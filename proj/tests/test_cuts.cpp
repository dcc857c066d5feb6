#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <set>
#include <vector>

#include "ternopt/cuts.hpp"
#include "ternopt/errors.hpp"
#include "ternopt/rng.hpp"
#include "ternopt/ternary_psd.hpp"

using namespace ternopt;
using cuts::Cut;
using cuts::Family;
using cuts::SeparationReport;

namespace {

Eigen::MatrixXd random_sym(int n, Rng& rng, double lo, double hi) {
  Eigen::MatrixXd X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      X(i, j) = rng.next_real(lo, hi);
      X(j, i) = X(i, j);
    }
  return X;
}

// Independent maximum violation per family, by direct enumeration of the
// closed-form inequality lists.
double max_triangle_violation(const Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int s1 : {1, -1})
          for (int s2 : {1, -1}) {
            double lhs = s1 * X(i, j) + s2 * X(i, k) + s1 * s2 * X(j, k);
            worst = std::max(worst, -1.0 - lhs);
          }
  return worst;
}

double max_pair_violation(const Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      worst = std::max({worst, X(i, j) - X(i, i), -X(i, j) - X(i, i)});
    }
  return worst;
}

double max_rlt_violation(const Eigen::VectorXd& x, const Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          double lhs = si * sj * X(i, j) + si * x[i] + sj * x[j];
          worst = std::max(worst, -1.0 - lhs);
        }
  return worst;
}

double max_split_violation(const Eigen::VectorXd& x, const Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int s : {1, -1})
        for (int t : {1, -1}) {
          double lhs = X(i, i) + X(j, j) + 2.0 * s * X(i, j) + t * x[i] +
                       t * s * x[j];
          worst = std::max(worst, -lhs);
        }
  return worst;
}

double max_kgonal_violation(const Eigen::MatrixXd& X, int k) {
  const int n = static_cast<int>(X.rows());
  std::vector<int> comb(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) comb[static_cast<std::size_t>(a)] = a;
  double worst = 0.0;
  for (;;) {
    for (const Cut& c : cuts::kgonal_cuts_for_support(comb)) {
      double lhs = 0.0;
      for (const auto& [ij, v] : c.X_coeffs) lhs += v * X(ij.first, ij.second);
      worst = std::max(worst, c.rhs - lhs);
    }
    int a = k - 1;
    while (a >= 0 && comb[static_cast<std::size_t>(a)] == n - k + a) --a;
    if (a < 0) break;
    ++comb[static_cast<std::size_t>(a)];
    for (int b = a + 1; b < k; ++b)
      comb[static_cast<std::size_t>(b)] = comb[static_cast<std::size_t>(b - 1)] + 1;
  }
  return worst;
}

}  // namespace

TEST_CASE("triangle separation") {
  SUBCASE("identity produces no cuts") {
    SeparationReport r =
        cuts::separate_triangle(Eigen::MatrixXd::Identity(3, 3), 1e-9, 100);
    CHECK(r.cuts.empty());
    CHECK(r.examined == 4);
  }
  SUBCASE("uniform negative off-diagonal violates the all-plus form") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(3, 3);
    X(0, 1) = X(1, 0) = X(0, 2) = X(2, 0) = X(1, 2) = X(2, 1) = -0.5;
    SeparationReport r = cuts::separate_triangle(X, 1e-6, 100);
    REQUIRE(!r.cuts.empty());
    CHECK(r.max_violation == doctest::Approx(0.5).epsilon(1e-12));
    const Cut& top = r.cuts.front();
    CHECK(top.family == Family::Triangle);
    CHECK(top.rhs == -1.0);
    CHECK(cuts::cut_violation(top, Eigen::VectorXd::Zero(3), X) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("ternary PSD matrices are never cut") {
    for (const auto& pt : psd::enumerate_f1n(5)) {
      SeparationReport r =
          cuts::separate_triangle(pt.X.as_dense(), 1e-9, 100);
      CHECK(r.cuts.empty());
    }
  }
}

TEST_CASE("pair separation") {
  SUBCASE("unit diagonal with small off-diagonals") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(3, 3);
    X(0, 1) = X(1, 0) = 0.9;
    CHECK(cuts::separate_pair(X, 1e-9, 100).cuts.empty());
  }
  SUBCASE("off-diagonal above the diagonal") {
    Eigen::MatrixXd X(2, 2);
    X << 0.2, 0.5, 0.5, 1.0;
    SeparationReport r = cuts::separate_pair(X, 1e-6, 100);
    REQUIRE(!r.cuts.empty());
    CHECK(r.max_violation == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(r.examined == 4);
  }
  SUBCASE("ternary PSD matrices are never cut") {
    for (const auto& pt : psd::enumerate_f1n(4))
      CHECK(cuts::separate_pair(pt.X.as_dense(), 1e-9, 100).cuts.empty());
  }
}

TEST_CASE("rlt separation") {
  Eigen::VectorXd x(2);
  x << -1, -1;
  Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
  SUBCASE("tight product is not reported") {
    X(0, 1) = X(1, 0) = 1.0;  // X_01 + x_0 + x_1 = -1, tight
    CHECK(cuts::separate_rlt(x, X, 1e-9, 100).cuts.empty());
  }
  SUBCASE("inconsistent product is reported with its exact violation") {
    X(0, 1) = X(1, 0) = -0.5;
    SeparationReport r = cuts::separate_rlt(x, X, 1e-6, 100);
    REQUIRE(!r.cuts.empty());
    CHECK(r.max_violation == doctest::Approx(1.5).epsilon(1e-12));
    X(0, 1) = X(1, 0) = 0.5;
    r = cuts::separate_rlt(x, X, 1e-6, 100);
    REQUIRE(!r.cuts.empty());
    CHECK(r.max_violation == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("exact ternary lifts are never cut") {
    for (const auto& pt : psd::enumerate_f1n(4))
      CHECK(cuts::separate_rlt(pt.x.as_vector(), pt.X.as_dense(), 1e-9, 100)
                .cuts.empty());
  }
}

TEST_CASE("split separation") {
  SUBCASE("identity block with centered point") {
    CHECK(cuts::separate_split(Eigen::VectorXd::Zero(2),
                               Eigen::MatrixXd::Identity(2, 2), 1e-9, 100)
              .cuts.empty());
  }
  SUBCASE("small diagonal with deep negative off-diagonal") {
    Eigen::MatrixXd X(2, 2);
    X << 0.1, -0.5, -0.5, 0.1;
    SeparationReport r =
        cuts::separate_split(Eigen::VectorXd::Zero(2), X, 1e-6, 100);
    REQUIRE(!r.cuts.empty());
    // X_00 + X_11 + 2 X_01 + x_0 + x_1 = -0.8.
    CHECK(r.max_violation == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("exact ternary lifts are never cut") {
    for (const auto& pt : psd::enumerate_f1n(4))
      CHECK(cuts::separate_split(pt.x.as_vector(), pt.X.as_dense(), 1e-9, 100)
                .cuts.empty());
  }
}

TEST_CASE("cheap separators are exact against independent enumeration") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6;
    Eigen::MatrixXd X = random_sym(n, rng, -1.2, 1.2);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.next_real(-1.0, 1.0);

    CHECK(cuts::separate_triangle(X, 1e-9, 10000).max_violation ==
          doctest::Approx(std::max(0.0, max_triangle_violation(X)))
              .epsilon(1e-12));
    CHECK(cuts::separate_pair(X, 1e-9, 10000).max_violation ==
          doctest::Approx(std::max(0.0, max_pair_violation(X))).epsilon(1e-12));
    CHECK(cuts::separate_rlt(x, X, 1e-9, 10000).max_violation ==
          doctest::Approx(std::max(0.0, max_rlt_violation(x, X)))
              .epsilon(1e-12));
    CHECK(cuts::separate_split(x, X, 1e-9, 10000).max_violation ==
          doctest::Approx(std::max(0.0, max_split_violation(x, X)))
              .epsilon(1e-12));

    // Whenever independent enumeration finds a violation above tol, the
    // separator reports at least one cut.
    if (max_triangle_violation(X) > 1e-6)
      CHECK(!cuts::separate_triangle(X, 1e-6, 10000).cuts.empty());
    if (max_rlt_violation(x, X) > 1e-6)
      CHECK(!cuts::separate_rlt(x, X, 1e-6, 10000).cuts.empty());
  }
}

TEST_CASE("odd-cycle cut construction") {
  SUBCASE("pentagonal support yields 16 sign-distinct cuts with rhs -2") {
    auto list = cuts::kgonal_cuts_for_support({0, 1, 2, 3, 4});
    CHECK(list.size() == 16);
    std::set<std::string> keys;
    for (const Cut& c : list) {
      CHECK(c.family == Family::KGonal5);
      CHECK(c.rhs == -2.0);
      CHECK(c.X_coeffs.size() == 10);
      for (const auto& [ij, v] : c.X_coeffs) {
        CHECK(ij.first < ij.second);
        CHECK(std::abs(v) == 1.0);
      }
      CHECK(keys.insert(c.key()).second);  // all distinct
    }
  }
  SUBCASE("heptagonal rhs rounds to -3") {
    auto list = cuts::kgonal_cuts_for_support({0, 1, 2, 3, 4, 5, 6});
    CHECK(list.size() == 64);
    for (const Cut& c : list) CHECK(c.rhs == -3.0);
  }
  SUBCASE("balanced ternary point is tight for the all-plus pentagon") {
    TernaryVector x({1, 1, -1, -1, 0});
    auto list = cuts::kgonal_cuts_for_support({0, 1, 2, 3, 4});
    const Cut* all_plus = nullptr;
    for (const Cut& c : list) {
      bool plus = true;
      for (const auto& [ij, v] : c.X_coeffs) plus = plus && v == 1.0;
      if (plus) all_plus = &c;
    }
    REQUIRE(all_plus != nullptr);
    Eigen::VectorXd v = x.as_vector();
    CHECK(cuts::cut_lhs(*all_plus, v, v * v.transpose()) == -2.0);
    CHECK(cuts::cut_violation(*all_plus, v, v * v.transpose()) == 0.0);
    CHECK(cuts::cut_valid_on_ternary(*all_plus, x));
  }
  SUBCASE("every pentagonal cut is valid on every ternary point") {
    auto list = cuts::kgonal_cuts_for_support({0, 1, 2, 3, 4});
    std::vector<int> w(5, -1);
    for (;;) {
      TernaryVector x(w);
      for (const Cut& c : list) CHECK(cuts::cut_valid_on_ternary(c, x));
      int pos = 0;
      while (pos < 5 && ++w[static_cast<std::size_t>(pos)] == 2)
        w[static_cast<std::size_t>(pos++)] = -1;
      if (pos == 5) break;
    }
  }
  SUBCASE("unsupported sizes are rejected") {
    CHECK_THROWS_AS(cuts::kgonal_cuts_for_support({0, 1, 2}), KTooLarge);
    CHECK_THROWS_AS(cuts::kgonal_cuts_for_support({0, 1, 2, 3, 4, 5}),
                    KTooLarge);
  }
}

TEST_CASE("annealing separator") {
  cuts::KgonalOptions opt;
  opt.k = 5;
  opt.runs = 60;
  opt.tol = 1e-3;
  opt.max_cuts = 100;
  opt.seed = 5;

  SUBCASE("finds a deeply violated planted cut") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (i != j) X(i, j) = -0.6;
    // All-plus pentagon evaluates to -6 < -2; no other sign pattern violates.
    SeparationReport r = cuts::separate_kgonal(X, opt);
    REQUIRE(r.cuts.size() == 1);
    CHECK(r.max_violation == doctest::Approx(4.0).epsilon(1e-12));
  }
  SUBCASE("every reported cut is truly violated at the input") {
    Rng rng(13);
    Eigen::MatrixXd X = random_sym(7, rng, -0.9, 0.9);
    for (int i = 0; i < 7; ++i) X(i, i) = 1.0;
    SeparationReport r = cuts::separate_kgonal(X, opt);
    for (const Cut& c : r.cuts) {
      CHECK(cuts::cut_violation(c, Eigen::VectorXd::Zero(7), X) > opt.tol);
      CHECK(c.family == Family::KGonal5);
    }
    // Sound against the exhaustive bound.
    CHECK(r.max_violation <= max_kgonal_violation(X, 5) + 1e-12);
  }
  SUBCASE("identical options reproduce the identical report") {
    Rng rng(14);
    Eigen::MatrixXd X = random_sym(6, rng, -1.0, 1.0);
    SeparationReport a = cuts::separate_kgonal(X, opt);
    SeparationReport b = cuts::separate_kgonal(X, opt);
    REQUIRE(a.cuts.size() == b.cuts.size());
    for (std::size_t i = 0; i < a.cuts.size(); ++i)
      CHECK(a.cuts[i].key() == b.cuts[i].key());
    CHECK(a.max_violation == b.max_violation);
  }
  SUBCASE("ternary PSD points admit no pentagonal cut") {
    int checked = 0;
    for (const auto& pt : psd::enumerate_f1n(5)) {
      if (pt.x.support_size() < 5) continue;  // smaller supports are padded 0
      CHECK(max_kgonal_violation(pt.X.as_dense(), 5) <= 1e-12);
      ++checked;
    }
    CHECK(checked == 16);  // sign-canonical full-support vectors on n=5
  }
  SUBCASE("block smaller than k is rejected") {
    CHECK_THROWS_AS(cuts::separate_kgonal(Eigen::MatrixXd::Identity(3, 3), opt),
                    KTooLarge);
    opt.k = 6;
    CHECK_THROWS_AS(cuts::separate_kgonal(Eigen::MatrixXd::Identity(7, 7), opt),
                    KTooLarge);
  }
}

TEST_CASE("homogenization onto the scale variable") {
  SUBCASE("constant-rhs family gains a scale coefficient") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(3, 3);
    X(0, 1) = X(1, 0) = X(0, 2) = X(2, 0) = X(1, 2) = X(2, 1) = -0.5;
    Cut tri = cuts::separate_triangle(X, 1e-6, 1).cuts.front();
    Cut scaled = cuts::scale_for_ratio(tri);
    CHECK(scaled.rhs == 0.0);
    CHECK(scaled.rho_coeff == 1.0);
    CHECK(scaled.X_coeffs == tri.X_coeffs);
  }
  SUBCASE("homogeneous families pass through unchanged") {
    Eigen::MatrixXd X(2, 2);
    X << 0.2, 0.5, 0.5, 1.0;
    Cut pair = cuts::separate_pair(X, 1e-6, 1).cuts.front();
    Cut scaled = cuts::scale_for_ratio(pair);
    CHECK(scaled.rhs == 0.0);
    CHECK(scaled.rho_coeff == 0.0);
    CHECK(scaled.key() == pair.key());
  }
  SUBCASE("odd-cycle rhs moves onto the scale variable") {
    Cut c = cuts::kgonal_cuts_for_support({0, 1, 2, 3, 4}).front();
    Cut scaled = cuts::scale_for_ratio(c);
    CHECK(scaled.rho_coeff == 2.0);
    CHECK(scaled.rhs == 0.0);
  }
  SUBCASE("scale 1 reduces to the original violation") {
    Rng rng(21);
    Eigen::MatrixXd X = random_sym(5, rng, -1.0, 1.0);
    Eigen::VectorXd x(5);
    for (int i = 0; i < 5; ++i) x[i] = rng.next_real(-1.0, 1.0);
    auto all = cuts::separate_triangle(X, 1e-9, 50).cuts;
    auto rl = cuts::separate_rlt(x, X, 1e-9, 50).cuts;
    all.insert(all.end(), rl.begin(), rl.end());
    for (const Cut& c : all) {
      Cut s = cuts::scale_for_ratio(c);
      CHECK(cuts::cut_violation(s, x, X, 1.0) ==
            doctest::Approx(cuts::cut_violation(c, x, X, 1.0)).epsilon(1e-12));
    }
    // On scaled lifts (rho x, rho X) a scaled cut keeps its sign for rho > 0.
    for (const Cut& c : all) {
      Cut s = cuts::scale_for_ratio(c);
      double rho = 0.37;
      double scaled_lhs = cuts::cut_lhs(s, rho * x, rho * X, rho);
      CHECK(scaled_lhs == doctest::Approx(rho * cuts::cut_lhs(s, x, X, 1.0))
                              .epsilon(1e-12));
    }
  }
}

TEST_CASE("ranking and deduplication") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Identity(4, 4);
  X(0, 1) = X(1, 0) = -0.9;
  X(2, 3) = X(3, 2) = -0.7;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  x[0] = 0.95;
  x[1] = 0.95;

  std::vector<Cut> pool;
  for (const Cut& c : cuts::separate_rlt(x, X, 1e-6, 100).cuts)
    pool.push_back(c);
  for (const Cut& c : cuts::separate_split(x, X, 1e-6, 100).cuts)
    pool.push_back(c);
  REQUIRE(pool.size() >= 2);

  std::vector<Cut> shuffled = pool;
  std::reverse(shuffled.begin(), shuffled.end());
  cuts::rank_and_cap(shuffled, x, X, 1.0, 1000);
  for (std::size_t i = 1; i < shuffled.size(); ++i) {
    double prev = cuts::cut_violation(shuffled[i - 1], x, X);
    double cur = cuts::cut_violation(shuffled[i], x, X);
    CHECK(prev >= cur - 1e-12);
  }
  std::vector<Cut> capped = pool;
  cuts::rank_and_cap(capped, x, X, 1.0, 2);
  REQUIRE(capped.size() == 2);
  CHECK(cuts::cut_violation(capped[0], x, X) ==
        doctest::Approx(cuts::cut_violation(shuffled[0], x, X)));

  SUBCASE("keys identify cuts structurally") {
    Cut a = pool.front();
    Cut b = a;
    CHECK(a.key() == b.key());
    b.rhs += 1.0;
    CHECK(a.key() != b.key());
  }
}

TEST_CASE("family names") {
  CHECK(std::string(cuts::family_name(Family::Triangle)) == "triangle");
  CHECK(std::string(cuts::family_name(Family::Pair)) == "pair");
  CHECK(std::string(cuts::family_name(Family::Rlt)) == "rlt");
  CHECK(std::string(cuts::family_name(Family::Split)) == "split");
  CHECK(std::string(cuts::family_name(Family::KGonal5)) == "kgonal5");
  CHECK(std::string(cuts::family_name(Family::KGonal7)) == "kgonal7");
  CHECK(std::string(cuts::family_name(Family::KGonal9)) == "kgonal9");
}
