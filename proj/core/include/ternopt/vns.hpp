#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "ternopt/rng.hpp"
#include "ternopt/types.hpp"

namespace ternopt::vns {

enum class Variant { Quto, Linear, Ratio };

struct VnsParams {
  int s_min = 2;
  int s_max = 0;  // 0: use n
  int s_step = 2;
  int iter_max = 3;
  int restarts = 100;
  std::uint64_t seed = 0;
};

// Incremental evaluation state. Quto/Linear use f and alpha_f = Q x;
// Ratio additionally tracks the denominator g and alpha_g = B x.
struct VnsState {
  TernaryVector x;
  double f = 0.0;
  double g = 1.0;
  Eigen::VectorXd alpha_f;
  Eigen::VectorXd alpha_g;
};

VnsState make_state(const ProblemInstance& inst, Variant variant,
                    const TernaryVector& x);
double state_value(const VnsState& st, Variant variant);

// Single-coordinate move x_i -> v. Cost O(1); throws NoOpMove if v == x_i.
double move_delta_quto(const TqpInstance& inst, const VnsState& st, int i,
                       int v);
void apply_move_quto(const TqpInstance& inst, VnsState& st, int i, int v);

// Balance-preserving pair move x_i -> vi, x_j -> vj with
// (vi - x_i) + (vj - x_j) = 0; throws UnbalancedMove otherwise.
double move_delta_linear(const TqpInstance& inst, const VnsState& st, int i,
                         int vi, int j, int vj);
void apply_move_linear(const TqpInstance& inst, VnsState& st, int i, int vi,
                       int j, int vj);

// Returns (delta f, delta g) for x_i -> v.
std::pair<double, double> move_delta_ratio(const RatioInstance& inst,
                                           const VnsState& st, int i, int v);
void apply_move_ratio(const RatioInstance& inst, VnsState& st, int i, int v);

// Best-improvement descent to a local minimum of the variant's neighborhood
// (single moves; balanced pair moves for Linear).
void local_search(const ProblemInstance& inst, Variant variant, VnsState& st);

// Perturbs s coordinates (Linear: floor(s/2) balanced pair moves, at least
// one). Alpha vectors are updated incrementally.
void shake(const ProblemInstance& inst, Variant variant, VnsState& st, int s,
           Rng& rng);

// Multistart variable neighborhood search; each restart draws its own
// derived stream, so results are reproducible and restarts are independent.
// Ties across restarts keep the lowest restart index.
Solution vns(const ProblemInstance& inst, Variant variant,
             const VnsParams& params);

// One VNS run from a caller-supplied start (used to polish rounded
// relaxation points inside the search tree).
Solution vns_from(const ProblemInstance& inst, Variant variant,
                  const TernaryVector& x0, const VnsParams& params);

}  // namespace ternopt::vns
