#include "ternopt/vns.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ternopt/errors.hpp"

namespace ternopt::vns {

namespace {

constexpr double kImprove = 1e-12;

void check_variant(const ProblemInstance& inst, Variant variant) {
  switch (variant) {
    case Variant::Quto:
      if (inst.kind != ProblemKind::Quto)
        throw WrongVariant("quto search requires an unconstrained instance");
      break;
    case Variant::Linear: {
      if (inst.kind != ProblemKind::TqpLinear)
        throw WrongVariant("balanced search requires a balance-constrained instance");
      if (inst.tqp.constraints.size() != 1)
        throw WrongVariant("balanced search expects exactly one constraint");
      const LinearConstraint& con = inst.tqp.constraints[0];
      if (con.b != 0.0 || !con.a.isOnes())
        throw WrongVariant("balanced search expects the all-ones zero-sum constraint");
      break;
    }
    case Variant::Ratio:
      if (inst.kind != ProblemKind::TqpRatio)
        throw WrongVariant("ratio search requires a fractional instance");
      break;
  }
}

double ratio_value(const VnsState& st) { return st.f / st.g; }

// Rebuilds f/alpha from scratch; used on revert so rounding error cannot
// accumulate across shakes.
VnsState fresh_state(const ProblemInstance& inst, Variant variant,
                     const TernaryVector& x) {
  VnsState st;
  st.x = x;
  Eigen::VectorXd xv = x.as_vector();
  if (variant == Variant::Ratio) {
    st.f = evaluate_numerator(inst.ratio, x);
    st.g = evaluate_denominator(inst.ratio, x);
    st.alpha_f = inst.ratio.A.mat() * xv;
    st.alpha_g = inst.ratio.B.mat() * xv;
  } else {
    st.f = evaluate_objective(inst.tqp, x);
    st.alpha_f = inst.tqp.Q.mat() * xv;
  }
  return st;
}

bool improving_single(const ProblemInstance& inst, Variant variant,
                      const VnsState& st, int* bi, int* bv) {
  const int n = st.x.size();
  double best = -kImprove;
  bool found = false;
  for (int i = 0; i < n; ++i) {
    for (int v = -1; v <= 1; ++v) {
      if (v == st.x[i]) continue;
      double score;
      if (variant == Variant::Ratio) {
        auto [df, dg] = move_delta_ratio(inst.ratio, st, i, v);
        if (st.g + dg <= 0.0) continue;
        score = (st.f + df) / (st.g + dg) - ratio_value(st);
      } else {
        score = move_delta_quto(inst.tqp, st, i, v);
      }
      if (score < best) {
        best = score;
        *bi = i;
        *bv = v;
        found = true;
      }
    }
  }
  return found;
}

bool improving_pair(const TqpInstance& inst, const VnsState& st, int* bi,
                    int* bvi, int* bj, int* bvj) {
  const int n = st.x.size();
  double best = -kImprove;
  bool found = false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int d = -2; d <= 2; ++d) {
        if (d == 0) continue;
        int vi = st.x[i] + d;
        int vj = st.x[j] - d;
        if (vi < -1 || vi > 1 || vj < -1 || vj > 1) continue;
        double score = move_delta_linear(inst, st, i, vi, j, vj);
        if (score < best) {
          best = score;
          *bi = i;
          *bvi = vi;
          *bj = j;
          *bvj = vj;
          found = true;
        }
      }
    }
  }
  return found;
}

// Draws s distinct indices into the front of a scratch permutation.
void draw_indices(int n, int s, Rng& rng, std::vector<int>& idx) {
  idx.resize(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int t = 0; t < s; ++t) {
    int r = t + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - t)));
    std::swap(idx[static_cast<std::size_t>(t)], idx[static_cast<std::size_t>(r)]);
  }
}

TernaryVector random_point(int n, Rng& rng) {
  TernaryVector x(n);
  for (int i = 0; i < n; ++i)
    x.set(i, static_cast<int>(rng.next_below(3)) - 1);
  return x;
}

TernaryVector random_balanced_point(int n, Rng& rng) {
  TernaryVector x = random_point(n, rng);
  int sum = x.sum();
  std::vector<int> cand;
  while (sum != 0) {
    cand.clear();
    for (int i = 0; i < n; ++i) {
      if (sum > 0 ? x[i] > -1 : x[i] < 1) cand.push_back(i);
    }
    int i = cand[static_cast<std::size_t>(rng.next_below(cand.size()))];
    if (sum > 0) {
      x.set(i, x[i] - 1);
      --sum;
    } else {
      x.set(i, x[i] + 1);
      ++sum;
    }
  }
  return x;
}

Solution run_one(const ProblemInstance& inst, Variant variant,
                 const TernaryVector& x0, const VnsParams& params, Rng& rng) {
  const int n = inst.n();
  VnsState st = fresh_state(inst, variant, x0);
  local_search(inst, variant, st);
  VnsState best = st;

  const int s_max = params.s_max > 0 ? std::min(params.s_max, n) : n;
  const int s_step = std::max(1, params.s_step);
  const int s_min = std::max(1, params.s_min);
  for (int it = 0; it < params.iter_max; ++it) {
    int s = s_min;
    while (s <= s_max) {
      shake(inst, variant, st, s, rng);
      local_search(inst, variant, st);
      if (state_value(st, variant) < state_value(best, variant) - kImprove) {
        best = st;
        s = s_min;
      } else {
        st = fresh_state(inst, variant, best.x);
        s += s_step;
      }
    }
  }

  Solution sol;
  sol.x = best.x;
  sol.feasible = true;
  sol.value = variant == Variant::Ratio ? evaluate_ratio(inst.ratio, best.x)
                                        : evaluate_objective(inst.tqp, best.x);
  return sol;
}

}  // namespace

VnsState make_state(const ProblemInstance& inst, Variant variant,
                    const TernaryVector& x) {
  check_variant(inst, variant);
  if (x.size() != inst.n())
    throw DimensionMismatch("start point size does not match instance");
  if (variant == Variant::Linear && x.sum() != 0)
    throw UnbalancedMove("start point violates the zero-sum constraint");
  return fresh_state(inst, variant, x);
}

double state_value(const VnsState& st, Variant variant) {
  return variant == Variant::Ratio ? ratio_value(st) : st.f;
}

double move_delta_quto(const TqpInstance& inst, const VnsState& st, int i,
                       int v) {
  if (v == st.x[i]) throw NoOpMove("move_delta_quto: value unchanged");
  double d = static_cast<double>(v - st.x[i]);
  return 2.0 * d * st.alpha_f(i) + d * d * inst.Q(i, i) + d * inst.c(i);
}

void apply_move_quto(const TqpInstance& inst, VnsState& st, int i, int v) {
  st.f += move_delta_quto(inst, st, i, v);
  double d = static_cast<double>(v - st.x[i]);
  st.alpha_f += d * inst.Q.mat().col(i);
  st.x.set(i, v);
}

double move_delta_linear(const TqpInstance& inst, const VnsState& st, int i,
                         int vi, int j, int vj) {
  if (i == j) throw UnbalancedMove("pair move needs two distinct coordinates");
  double di = static_cast<double>(vi - st.x[i]);
  double dj = static_cast<double>(vj - st.x[j]);
  if (di + dj != 0.0 || di == 0.0)
    throw UnbalancedMove("pair move must shift i and j by opposite amounts");
  return 2.0 * di * st.alpha_f(i) + 2.0 * dj * st.alpha_f(j) +
         di * di * inst.Q(i, i) + dj * dj * inst.Q(j, j) +
         2.0 * di * dj * inst.Q(i, j) + di * inst.c(i) + dj * inst.c(j);
}

void apply_move_linear(const TqpInstance& inst, VnsState& st, int i, int vi,
                       int j, int vj) {
  st.f += move_delta_linear(inst, st, i, vi, j, vj);
  double di = static_cast<double>(vi - st.x[i]);
  double dj = static_cast<double>(vj - st.x[j]);
  st.alpha_f += di * inst.Q.mat().col(i) + dj * inst.Q.mat().col(j);
  st.x.set(i, vi);
  st.x.set(j, vj);
}

std::pair<double, double> move_delta_ratio(const RatioInstance& inst,
                                           const VnsState& st, int i, int v) {
  if (v == st.x[i]) throw NoOpMove("move_delta_ratio: value unchanged");
  double d = static_cast<double>(v - st.x[i]);
  double df = 2.0 * d * st.alpha_f(i) + d * d * inst.A(i, i) + d * inst.a(i);
  double dg = 2.0 * d * st.alpha_g(i) + d * d * inst.B(i, i) + d * inst.b(i);
  return {df, dg};
}

void apply_move_ratio(const RatioInstance& inst, VnsState& st, int i, int v) {
  auto [df, dg] = move_delta_ratio(inst, st, i, v);
  st.f += df;
  st.g += dg;
  double d = static_cast<double>(v - st.x[i]);
  st.alpha_f += d * inst.A.mat().col(i);
  st.alpha_g += d * inst.B.mat().col(i);
  st.x.set(i, v);
}

void local_search(const ProblemInstance& inst, Variant variant, VnsState& st) {
  if (variant == Variant::Linear) {
    int i, vi, j, vj;
    while (improving_pair(inst.tqp, st, &i, &vi, &j, &vj))
      apply_move_linear(inst.tqp, st, i, vi, j, vj);
    return;
  }
  int i, v;
  while (improving_single(inst, variant, st, &i, &v)) {
    if (variant == Variant::Ratio)
      apply_move_ratio(inst.ratio, st, i, v);
    else
      apply_move_quto(inst.tqp, st, i, v);
  }
}

void shake(const ProblemInstance& inst, Variant variant, VnsState& st, int s,
           Rng& rng) {
  const int n = st.x.size();
  if (variant != Variant::Linear) {
    int cnt = std::min(s, n);
    std::vector<int> idx;
    draw_indices(n, cnt, rng, idx);
    for (int t = 0; t < cnt; ++t) {
      int i = idx[static_cast<std::size_t>(t)];
      int lo = st.x[i] == -1 ? 0 : -1;
      int hi = st.x[i] == 1 ? 0 : 1;
      int v = rng.next_below(2) == 0 ? lo : hi;
      if (variant == Variant::Ratio)
        apply_move_ratio(inst.ratio, st, i, v);
      else
        apply_move_quto(inst.tqp, st, i, v);
    }
    return;
  }

  if (n < 2) return;
  int moves = std::max(1, s / 2);
  int attempts = 100 * n;
  for (int m = 0; m < moves && attempts > 0; ++m) {
    bool done = false;
    while (!done && attempts-- > 0) {
      int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
      if (j >= i) ++j;
      int feas[4];
      int cnt = 0;
      for (int d = -2; d <= 2; ++d) {
        if (d == 0) continue;
        int vi = st.x[i] + d;
        int vj = st.x[j] - d;
        if (vi >= -1 && vi <= 1 && vj >= -1 && vj <= 1) feas[cnt++] = d;
      }
      if (cnt == 0) continue;
      int d = feas[rng.next_below(static_cast<std::uint64_t>(cnt))];
      apply_move_linear(inst.tqp, st, i, st.x[i] + d, j, st.x[j] - d);
      done = true;
    }
  }
}

Solution vns(const ProblemInstance& inst, Variant variant,
             const VnsParams& params) {
  check_variant(inst, variant);
  const int n = inst.n();
  Solution best;
  bool have = false;
  for (int r = 0; r < std::max(1, params.restarts); ++r) {
    Rng rng = Rng::derive(params.seed, static_cast<std::uint64_t>(r));
    TernaryVector x0 = variant == Variant::Linear
                           ? random_balanced_point(n, rng)
                           : random_point(n, rng);
    Solution sol = run_one(inst, variant, x0, params, rng);
    if (!have || sol.value < best.value - kImprove) {
      best = sol;
      have = true;
    }
  }
  return best;
}

Solution vns_from(const ProblemInstance& inst, Variant variant,
                  const TernaryVector& x0, const VnsParams& params) {
  VnsState st = make_state(inst, variant, x0);  // validates variant and x0
  Rng rng = Rng::derive(params.seed, 0);
  return run_one(inst, variant, st.x, params, rng);
}

}  // namespace ternopt::vns
