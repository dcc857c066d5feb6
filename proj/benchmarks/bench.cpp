#include <benchmark/benchmark.h>

#include "ternopt/bnb.hpp"
#include "ternopt/cuts.hpp"
#include "ternopt/instances.hpp"
#include "ternopt/relaxations.hpp"
#include "ternopt/rng.hpp"
#include "ternopt/sdp.hpp"
#include "ternopt/ternary_psd.hpp"
#include "ternopt/vns.hpp"

using namespace ternopt;

namespace {

ProblemInstance make(gen::GenKind k, int n, double p, std::uint64_t seed) {
  gen::GeneratorSpec s;
  s.kind = k;
  s.n = n;
  s.p = p;
  s.seed = seed;
  return gen::generate(s);
}

void BM_SdpRootSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ProblemInstance inst = make(gen::GenKind::Type3, n, 50.0, 7);
  relax::RelaxationHandle h = relax::facial_reduce(relax::build_linear(inst.tqp));
  for (auto _ : state) {
    sdp::ConicSolution s = sdp::solve(h.conic());
    benchmark::DoNotOptimize(s.objective);
  }
}
BENCHMARK(BM_SdpRootSolve)->Arg(8)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

// A mildly infeasible point for the separators: exact lift blended with a
// repelling off-diagonal pattern.
struct SepFixture {
  Eigen::VectorXd x;
  Eigen::MatrixXd X;
  explicit SepFixture(int n) {
    Rng rng(11);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = static_cast<double>(rng.next_int(-1, 1));
    Eigen::MatrixXd L = v * v.transpose();
    Eigen::MatrixXd R(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        R(i, j) = rng.next_real01() - 0.5;
        R(j, i) = R(i, j);
      }
    X = 0.7 * L + 0.3 * R;
    X.diagonal() = L.diagonal();
    x = 0.7 * v;
  }
};

void BM_SeparateExhaustive(benchmark::State& state) {
  SepFixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto t = cuts::separate_triangle(f.X, 1e-3, 5000);
    auto p = cuts::separate_pair(f.X, 1e-3, 5000);
    auto r = cuts::separate_rlt(f.x, f.X, 1e-3, 5000);
    auto s = cuts::separate_split(f.x, f.X, 1e-3, 5000);
    benchmark::DoNotOptimize(t.max_violation + p.max_violation +
                             r.max_violation + s.max_violation);
  }
}
BENCHMARK(BM_SeparateExhaustive)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_SeparateKgonal(benchmark::State& state) {
  SepFixture f(16);
  cuts::KgonalOptions opt;
  opt.k = static_cast<int>(state.range(0));
  opt.runs = 100;
  opt.seed = 3;
  for (auto _ : state) {
    auto rep = cuts::separate_kgonal(f.X, opt);
    benchmark::DoNotOptimize(rep.max_violation);
  }
}
BENCHMARK(BM_SeparateKgonal)->Arg(5)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_VnsQuto(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ProblemInstance inst = make(gen::GenKind::QutoType3, n, 60.0, 5);
  vns::VnsParams params;
  params.restarts = 20;
  for (auto _ : state) {
    Solution s = vns::vns(inst, vns::Variant::Quto, params);
    benchmark::DoNotOptimize(s.value);
  }
}
BENCHMARK(BM_VnsQuto)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_RankOneEnumeration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto pts = psd::enumerate_f1n(n);
    benchmark::DoNotOptimize(pts.size());
  }
}
BENCHMARK(BM_RankOneEnumeration)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_BranchAndBound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ProblemInstance inst = make(gen::GenKind::Type3, n, 50.0, 13);
  bnb::BnbConfig cfg;
  cfg.kgonal_runs5 = 60;
  cfg.kgonal_runs7 = 60;
  for (auto _ : state) {
    bnb::BnbResult r = bnb::solve(inst, bnb::Variant::Linear, cfg);
    benchmark::DoNotOptimize(r.sol.value);
  }
}
BENCHMARK(BM_BranchAndBound)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
