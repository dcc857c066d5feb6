#include <doctest.h>

#include <Eigen/Dense>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "ternopt/errors.hpp"
#include "ternopt/instances.hpp"
#include "ternopt/rng.hpp"

using namespace ternopt;
using gen::GenKind;
using gen::GeneratorSpec;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Eigen::VectorXd eigenvalues(const SymMatrix& Q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q.mat(),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

GeneratorSpec spec_of(GenKind k, int n, double p, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = k;
  s.n = n;
  s.p = p;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("splitmix64 known-answer sequences") {
  // Frozen from an independent implementation of the reference recurrence.
  {
    Rng r(0);
    CHECK(r.next_u64() == 0xE220A8397B1DCDAFULL);
    CHECK(r.next_u64() == 0x6E789E6AA1B965F4ULL);
    CHECK(r.next_u64() == 0x06C45D188009454FULL);
  }
  {
    Rng r(1);
    CHECK(r.next_u64() == 0x910A2DEC89025CC1ULL);
    CHECK(r.next_u64() == 0xBEEB8DA1658EEC67ULL);
    CHECK(r.next_u64() == 0xF893A2EEFB32555EULL);
  }
  {
    Rng r(42);
    CHECK(r.next_u64() == 0xBDD732262FEB6E95ULL);
    CHECK(r.next_u64() == 0x28EFE333B266F103ULL);
    CHECK(r.next_u64() == 0x47526757130F9F52ULL);
  }
}

TEST_CASE("derived mappings are pinned") {
  {
    Rng r(42);
    CHECK(r.next_real01() == 0.7415648787718233);
    CHECK(r.next_real01() == 0.1599103928769201);
    CHECK(r.next_real01() == 0.27860113025513866);
  }
  {
    Rng r(7);
    const std::uint64_t want[] = {3, 0, 9, 5, 4, 2, 4, 3};
    for (std::uint64_t w : want) CHECK(r.next_below(10) == w);
  }
  {
    Rng r(9);
    const long long want[] = {18, 25, -24, 29, -24, -39};
    for (long long w : want) CHECK(r.next_int(-50, 50) == w);
  }
  {
    Rng child = Rng::derive(5, 3);
    CHECK(child.state() == 0x260FFB0260BBBE5FULL);
    CHECK(child.next_u64() == 0xE4D103CD1849F57AULL);
  }
  // Properties of the mappings on a longer stream.
  Rng r(123);
  for (int i = 0; i < 1000; ++i) {
    double u = r.next_real01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    long long v = r.next_int(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
  }
}

TEST_CASE("spectral generator pins the negative-eigenvalue share") {
  for (std::uint64_t seed : {3ULL, 11ULL}) {
    auto inst = gen::generate(spec_of(GenKind::Type1, 8, 50.0, seed));
    CHECK(inst.kind == ProblemKind::TqpLinear);
    Eigen::VectorXd ev = eigenvalues(inst.tqp.Q);
    int neg = 0;
    for (int i = 0; i < ev.size(); ++i) {
      CHECK(ev[i] >= -1.0 - 1e-9);
      CHECK(ev[i] <= 1.0 + 1e-9);
      if (ev[i] < -1e-9) ++neg;
    }
    CHECK(neg == 4);  // floor(p*n/100) = floor(50*8/100)
    // Balance constraint 1^T x = 0 attached.
    REQUIRE(inst.tqp.constraints.size() == 1);
    CHECK(inst.tqp.constraints[0].b == 0.0);
    CHECK((inst.tqp.constraints[0].a.array() == 1.0).all());
  }
  auto all_pos = gen::generate(spec_of(GenKind::Type1, 6, 0.0, 5));
  CHECK(eigenvalues(all_pos.tqp.Q).minCoeff() >= -1e-9);
}

TEST_CASE("low-rank generator yields PSD matrices of bounded rank") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    auto inst = gen::generate(spec_of(GenKind::Type2, 9, 60.0, seed));
    Eigen::VectorXd ev = eigenvalues(inst.tqp.Q);
    CHECK(ev.minCoeff() >= -1e-9);
    int rank = 0;
    for (int i = 0; i < ev.size(); ++i)
      if (ev[i] > 1e-9) ++rank;
    CHECK(rank <= 5);  // ceil(9/2) candidate directions
  }
}

TEST_CASE("sparse generator density") {
  SUBCASE("p = 0 gives a zero matrix") {
    auto inst = gen::generate(spec_of(GenKind::Type3, 6, 0.0, 4));
    CHECK(inst.tqp.Q.mat().isZero(0.0));
    CHECK(inst.tqp.c.size() == 6);  // linear term still drawn
  }
  SUBCASE("p = 100 fills the whole triangle") {
    auto inst = gen::generate(spec_of(GenKind::Type3, 6, 100.0, 4));
    int nnz = 0;
    for (int i = 0; i < 6; ++i)
      for (int j = i; j < 6; ++j)
        if (inst.tqp.Q(i, j) != 0.0) ++nnz;
    CHECK(nnz == 21);
  }
  SUBCASE("large-n empirical density tracks p") {
    auto inst = gen::generate(spec_of(GenKind::Type3, 200, 30.0, 12));
    int nnz = 0;
    for (int i = 0; i < 200; ++i)
      for (int j = i; j < 200; ++j)
        if (inst.tqp.Q(i, j) != 0.0) ++nnz;
    double frac = static_cast<double>(nnz) / (200.0 * 201.0 / 2.0);
    CHECK(frac == doctest::Approx(0.30).epsilon(0.1));
  }
}

TEST_CASE("unconstrained variants share the draw and flip the diagonal") {
  auto base = gen::generate(spec_of(GenKind::Type3, 7, 60.0, 21));
  auto quto = gen::generate(spec_of(GenKind::QutoType3, 7, 60.0, 21));
  CHECK(quto.kind == ProblemKind::Quto);
  CHECK(quto.tqp.constraints.empty());
  CHECK(quto.tqp.c == base.tqp.c);
  for (int i = 0; i < 7; ++i) {
    CHECK(quto.tqp.Q(i, i) == std::abs(base.tqp.Q(i, i)));
    CHECK(quto.tqp.Q(i, i) >= 0.0);
    for (int j = 0; j < 7; ++j)
      if (i != j) CHECK(quto.tqp.Q(i, j) == base.tqp.Q(i, j));
  }
}

TEST_CASE("ratio generator structure") {
  auto inst = gen::generate(spec_of(GenKind::Ratio, 6, 50.0, 42));
  REQUIRE(inst.kind == ProblemKind::TqpRatio);
  const RatioInstance& r = inst.ratio;

  SUBCASE("all data is integral except the derived offset") {
    auto integral = [](double v) { return v == std::floor(v); };
    for (int i = 0; i < 6; ++i) {
      CHECK(integral(r.a[i]));
      CHECK(integral(r.b[i]));
      for (int j = 0; j < 6; ++j) {
        CHECK(integral(r.A(i, j)));
        CHECK(integral(r.B(i, j)));
        CHECK(std::abs(r.A(i, j)) <= 50.0);
        CHECK(std::abs(r.B(i, j)) <= 50.0);
      }
    }
    CHECK(integral(r.a0));
  }
  SUBCASE("offset matches the worst-case denominator bound") {
    double b0 = 1.0;
    for (int i = 0; i < 6; ++i) b0 += std::abs(r.B(i, i)) + std::abs(r.b[i]);
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) b0 += 2.0 * std::abs(r.B(i, j));
    CHECK(r.b0 == b0);
  }
  SUBCASE("denominator >= 1 on every ternary point") {
    std::vector<int> x(6, -1);
    for (;;) {
      CHECK(evaluate_denominator(r, TernaryVector(x)) >= 1.0 - 1e-9);
      int pos = 0;
      while (pos < 6 && ++x[static_cast<std::size_t>(pos)] == 2)
        x[static_cast<std::size_t>(pos++)] = -1;
      if (pos == 6) break;
    }
  }
  SUBCASE("zero density leaves only the constant offset") {
    auto empty = gen::generate(spec_of(GenKind::Ratio, 5, 0.0, 9));
    CHECK(empty.ratio.A.mat().isZero(0.0));
    CHECK(empty.ratio.B.mat().isZero(0.0));
    CHECK(empty.ratio.b0 == doctest::Approx(1.0 + empty.ratio.b.cwiseAbs().sum()));
  }
}

TEST_CASE("exhaustive enumeration on hand instances") {
  SUBCASE("negated identity, unconstrained") {
    ProblemInstance inst;
    inst.kind = ProblemKind::Quto;
    inst.tqp.Q = SymMatrix(-Eigen::MatrixXd::Identity(2, 2));
    inst.tqp.c = Eigen::VectorXd::Zero(2);
    Solution s = gen::brute_force(inst);
    REQUIRE(s.feasible);
    CHECK(s.value == -2.0);
    CHECK(s.x == TernaryVector({-1, -1}));  // ties keep enumeration order
  }
  SUBCASE("balance constraint forces mixed signs") {
    ProblemInstance inst;
    inst.kind = ProblemKind::TqpLinear;
    inst.tqp.Q = SymMatrix(-Eigen::MatrixXd::Identity(2, 2));
    inst.tqp.c = Eigen::VectorXd::Zero(2);
    LinearConstraint con;
    con.a = Eigen::VectorXd::Ones(2);
    inst.tqp.constraints.push_back(con);
    Solution s = gen::brute_force(inst);
    REQUIRE(s.feasible);
    CHECK(s.value == -2.0);
    CHECK(s.x.sum() == 0);
    CHECK(s.x == TernaryVector({-1, 1}));
  }
  SUBCASE("unsatisfiable constraint reports infeasible") {
    ProblemInstance inst;
    inst.kind = ProblemKind::Tqp;
    inst.tqp.Q = SymMatrix::zero(2);
    inst.tqp.c = Eigen::VectorXd::Zero(2);
    LinearConstraint con;
    con.a = Eigen::VectorXd::Ones(2);
    con.b = 5.0;
    inst.tqp.constraints.push_back(con);
    CHECK_FALSE(gen::brute_force(inst).feasible);
  }
  SUBCASE("ratio objective prefers the zero point") {
    ProblemInstance inst;
    inst.kind = ProblemKind::TqpRatio;
    inst.ratio.A = SymMatrix(Eigen::MatrixXd::Identity(1, 1));
    inst.ratio.a = Eigen::VectorXd::Zero(1);
    inst.ratio.B = SymMatrix::zero(1);
    inst.ratio.b = Eigen::VectorXd::Zero(1);
    inst.ratio.b0 = 1.0;
    Solution s = gen::brute_force(inst);
    REQUIRE(s.feasible);
    CHECK(s.value == 0.0);
    CHECK(s.x == TernaryVector(std::vector<int>{0}));
  }
  SUBCASE("enumeration cap") {
    ProblemInstance inst;
    inst.kind = ProblemKind::Quto;
    inst.tqp.Q = SymMatrix::zero(15);
    inst.tqp.c = Eigen::VectorXd::Zero(15);
    CHECK_THROWS_AS(gen::brute_force(inst), DimensionTooLarge);
  }
}

TEST_CASE("frozen optima of the golden instances") {
  // Values computed by an independent 3^n enumeration outside this codebase.
  struct Entry {
    const char* file;
    double value;
  };
  const Entry entries[] = {
      {"type1_n6_p25_s42.json", -2.2396137236873006},
      {"type2_n6_p50_s42.json", -2.2530184061655865},
      {"type3_n6_p75_s42.json", -10.406095522779864},
      {"quto_type3_n6_p50_s42.json", -6.4234296482084963},
      {"ratio_n6_d50_s42.json", -1.0890207715133531},
  };
  for (const Entry& e : entries) {
    CAPTURE(e.file);
    auto inst = gen::read_instance(std::string(TERNOPT_GOLDEN_DIR) + "/" + e.file);
    Solution s = gen::brute_force(inst);
    REQUIRE(s.feasible);
    CHECK(s.value == doctest::Approx(e.value).epsilon(1e-12));
  }
}

TEST_CASE("serialization roundtrip is exact") {
  for (GenKind k : {GenKind::Type1, GenKind::Type3, GenKind::QutoType2,
                    GenKind::Ratio}) {
    auto inst = gen::generate(spec_of(k, 6, 50.0, 17));
    std::string text = gen::to_json_string(inst);
    auto back = gen::parse_instance(text);
    CHECK(back.kind == inst.kind);
    CHECK(back.meta.generator == inst.meta.generator);
    CHECK(back.meta.seed == inst.meta.seed);
    if (inst.kind == ProblemKind::TqpRatio) {
      CHECK(back.ratio.A.mat() == inst.ratio.A.mat());
      CHECK(back.ratio.a == inst.ratio.a);
      CHECK(back.ratio.a0 == inst.ratio.a0);
      CHECK(back.ratio.B.mat() == inst.ratio.B.mat());
      CHECK(back.ratio.b == inst.ratio.b);
      CHECK(back.ratio.b0 == inst.ratio.b0);
    } else {
      CHECK(back.tqp.Q.mat() == inst.tqp.Q.mat());
      CHECK(back.tqp.c == inst.tqp.c);
      REQUIRE(back.tqp.constraints.size() == inst.tqp.constraints.size());
      for (std::size_t i = 0; i < inst.tqp.constraints.size(); ++i) {
        CHECK(back.tqp.constraints[i].a == inst.tqp.constraints[i].a);
        CHECK(back.tqp.constraints[i].b == inst.tqp.constraints[i].b);
      }
    }
    // Re-serializing the parsed instance reproduces the bytes.
    CHECK(gen::to_json_string(back) == text);
  }
}

TEST_CASE("generation is byte-stable against the golden files") {
  struct Entry {
    const char* file;
    GenKind kind;
  };
  const Entry entries[] = {
      {"type1_n6_p25_s42.json", GenKind::Type1},
      {"type2_n6_p50_s42.json", GenKind::Type2},
      {"type3_n6_p75_s42.json", GenKind::Type3},
      {"quto_type3_n6_p50_s42.json", GenKind::QutoType3},
      {"ratio_n6_d50_s42.json", GenKind::Ratio},
  };
  const double ps[] = {25, 50, 75, 50, 50};
  for (int i = 0; i < 5; ++i) {
    CAPTURE(entries[i].file);
    auto inst = gen::generate(spec_of(entries[i].kind, 6, ps[i], 42));
    std::string text = gen::to_json_string(inst);
    std::string golden =
        slurp(std::string(TERNOPT_GOLDEN_DIR) + "/" + entries[i].file);
    CHECK(text == golden);
  }
}

TEST_CASE("malformed input is rejected with a parse error") {
  CHECK_THROWS_AS(gen::parse_instance("this is not json"), ParseError);
  CHECK_THROWS_AS(gen::parse_instance("{}"), ParseError);
  CHECK_THROWS_AS(
      gen::parse_instance(R"({"format_version": 1, "kind": "mystery", "n": 2})"),
      ParseError);
  // Constraint vector length disagrees with n.
  CHECK_THROWS_AS(gen::parse_instance(R"({
    "format_version": 1, "kind": "tqp", "n": 2,
    "Q": {"dense": [0, 0, 0, 0]}, "c": [0, 0],
    "constraints": [{"a": [1], "b": 0}]
  })"),
                  ParseError);
  CHECK_THROWS_AS(gen::read_instance("/nonexistent/path.json"), IoError);
}
