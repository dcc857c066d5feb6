#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ternopt::sdp {

enum class SolveStatus { Optimal, MaxIter, Infeasible, NumericalFailure };

const char* status_name(SolveStatus s);

// One affine functional <A, X> on the PSD block. A must be symmetric.
struct AffineConstraint {
  Eigen::MatrixXd A;
  double rhs = 0.0;
};

// min <C, X>  s.t.  <A_i, X> = b_i,  <G_j, X> >= h_j,  X PSD of order m.
struct ConicProblem {
  int m = 0;
  Eigen::MatrixXd C;
  std::vector<AffineConstraint> eqs;
  std::vector<AffineConstraint> ineqs;
};

struct SdpOptions {
  double tol = 1e-7;
  int max_iter = 200;
};

struct ConicSolution {
  Eigen::MatrixXd X;
  double objective = 0.0;       // <C, X>
  double dual_objective = 0.0;  // safe lower bound when dual_residual is small
  double primal_residual = 0.0; // relative, on the row-equilibrated system
  double dual_residual = 0.0;   // relative, on the row-equilibrated system
  double gap = 0.0;             // |pobj - dobj| / (1 + |pobj| + |dobj|)
  int iters = 0;
  SolveStatus status = SolveStatus::NumericalFailure;
};

// Dense primal-dual interior-point solve (Mehrotra predictor-corrector with
// the HKM direction; inequality slacks live in a nonnegative block).
// Infeasible is reported only after an explicit Farkas-ray check: the scaled
// dual ray must satisfy -A*(y) PSD, nonnegative multipliers on inequalities,
// and positive objective.
ConicSolution solve(const ConicProblem& p, const SdpOptions& opt = {});

}  // namespace ternopt::sdp
