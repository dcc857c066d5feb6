#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ternopt/cuts.hpp"
#include "ternopt/relaxations.hpp"
#include "ternopt/sdp.hpp"
#include "ternopt/types.hpp"
#include "ternopt/vns.hpp"

namespace ternopt::bnb {

enum class Variant { Quto, Tqp, Linear, RatioDirect };
enum class Status { Optimal, TimeLimit, NodeLimit, Infeasible };

const char* status_name(Status s);
Variant variant_for_kind(ProblemKind k);

constexpr int kNumFamilies = 7;
int family_index(cuts::Family f);

struct BnbConfig {
  double gap_tol = 1e-4;
  double cut_tol = 1e-3;
  int max_cuts_per_round = 5000;
  int max_cut_rounds = 50;
  double time_limit = std::numeric_limits<double>::infinity();
  std::int64_t node_limit = 0;  // 0: unlimited
  std::vector<cuts::Family> families = {
      cuts::Family::Triangle, cuts::Family::Pair,    cuts::Family::Rlt,
      cuts::Family::Split,    cuts::Family::KGonal5, cuts::Family::KGonal7};
  int kgonal_runs5 = 500;
  int kgonal_runs7 = 1000;
  int kgonal_runs9 = 1000;
  bool inherit_cuts = true;
  bool use_facial_reduction = true;
  bool with_squared = true;   // squared linear rows on the general variant
  bool quto_diag_fix = false; // skip the 0-child where Q_ii <= 0 (exchange
                              // argument: some optimum avoids 0 there)
  bool use_vns = true;
  int threads = 1;
  std::uint64_t seed = 0;
  vns::VnsParams vns_params;
  sdp::SdpOptions sdp;
};

// One record per dequeued node, in processing order (deterministic for
// threads == 1).
struct NodeRecord {
  std::int64_t id = 0;
  std::int64_t parent = -1;
  int depth = 0;
  double bound = -std::numeric_limits<double>::infinity();
  std::array<std::int64_t, kNumFamilies> cuts_added{};
  double incumbent = std::numeric_limits<double>::infinity();
  int branch_var = -1;
  std::string action;  // branch | integral | pruned | infeasible | exhausted
};

struct BnbStats {
  std::int64_t nodes_explored = 0;
  std::int64_t sdp_solves = 0;
  std::array<std::int64_t, kNumFamilies> cuts_added{};
  double root_relax = std::numeric_limits<double>::quiet_NaN();  // pre-cut
  double root_bound = std::numeric_limits<double>::quiet_NaN();  // post-cut
  double final_gap = std::numeric_limits<double>::infinity();
  double wall_time = 0.0;
};

struct BnbResult {
  Solution sol;
  double bound = -std::numeric_limits<double>::infinity();
  Status status = Status::Optimal;
  BnbStats stats;
  std::vector<NodeRecord> log;
};

// (ub - lb) / max(|ub|, 1): the relative gap with a guard for optima near 0.
double guarded_gap(double ub, double lb);

// phi(t) = distance of t to the nearest point of {-1, 0, +1}.
double fractionality(double t);

// argmax of phi over non-fixed coordinates; ties -> lowest index.
// Throws AllFixed when no coordinate is free.
int select_branch_most_fractional(const Eigen::VectorXd& xs,
                                  const std::vector<char>& fixed);

// argmax_j sum_k Q_kj (y_j y_k - rho Y_jk) over non-fixed coordinates;
// ties -> lowest index. Throws NonPositiveRho / AllFixed.
int select_branch_ratio(double rho, const Eigen::VectorXd& y,
                        const Eigen::MatrixXd& Y, const SymMatrix& Q,
                        const std::vector<char>& fixed);

// Root relaxation for the variant: bordered ternary lift for Quto, the
// squared-constraint lift for Tqp, the balance lift (facially reduced when
// cfg.use_facial_reduction) for Linear, the homogenized lift for RatioDirect.
relax::RelaxationHandle root_relaxation(const ProblemInstance& inst, Variant v,
                                        const BnbConfig& cfg);

struct CutLoopResult {
  double bound = -std::numeric_limits<double>::infinity();
  relax::RelaxationHandle::Point point;
  bool have_point = false;
  bool infeasible = false;
  std::vector<double> round_bounds;  // dual bound after each accepted solve
  std::array<std::int64_t, kNumFamilies> cuts_added{};
  std::vector<cuts::Cut> new_cuts;
  int solves = 0;
};

// Alternates solve / separate on the handle (mutated in place): first the
// exhaustive families together, then the annealed odd-cycle families; each
// phase ends once a round identifies fewer than n new violated inequalities.
// Inherited cuts are installed before the first solve; ones whose support is
// entirely fixed are dropped (their rows are implied by the fixing
// equalities). node_id seeds the per-round annealing streams.
CutLoopResult cutting_loop(relax::RelaxationHandle& h, const BnbConfig& cfg,
                           std::int64_t node_id,
                           const std::vector<cuts::Cut>& inherited = {});

BnbResult solve(const ProblemInstance& inst, Variant variant,
                const BnbConfig& cfg = {});

enum class DinkelbachStatus { Optimal, InnerSolverFailure };

struct DinkelbachResult {
  Solution sol;
  double lambda = 0.0;           // value at the returned point
  std::vector<double> lambdas;   // parameter sequence fed to the subproblems
  int iterations = 0;
  DinkelbachStatus status = DinkelbachStatus::Optimal;
  BnbStats stats;  // aggregated over the inner solves
};

// Parametric outer loop for the fractional variant: repeatedly minimizes
// f - lambda g as an unconstrained ternary quadratic via solve(); stops when
// |min (f - lambda g)| < eps. eps <= 0 selects 1e-6 * (1 + |f(x0)|) with x0
// the heuristic seed.
DinkelbachResult dinkelbach(const ProblemInstance& inst,
                            const BnbConfig& cfg = {}, double eps = 0.0);

}  // namespace ternopt::bnb
