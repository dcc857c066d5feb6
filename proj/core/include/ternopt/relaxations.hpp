#pragma once

#include <Eigen/Dense>
#include <map>
#include <utility>
#include <vector>

#include "ternopt/sdp.hpp"
#include "ternopt/types.hpp"

namespace ternopt::relax {

enum class Variant { Basic, Quto, Linear, LinearReduced, Ratio };

// Role of every constraint row, so that rows can be retired when a variable
// fixing supersedes them (a fixed coordinate pins its diagonal bounds tight,
// which would otherwise leave the solver without any interior point).
enum class RowTag {
  Corner,       // Y_00 = 1 (rho normalization owns the corner for Ratio)
  Balance,      // <J, X> = 0 for the balanced variant
  LinCon,       // a^T x = b
  Squared,      // <a a^T, X> = b^2
  DiagPin,      // X_ii = 1 for nonpositive-diagonal indices (Quto)
  DiagGeX,      // X_ii - x_i >= 0
  DiagGeNegX,   // X_ii + x_i >= 0
  DiagLe1,      // X_ii <= 1 (or <= rho)
  RhoNonneg,    // rho >= 0 (Ratio)
  Normalization,// <B-hat, Z> = 1 (Ratio)
  FixBorder,    // x_i = t (Ratio: y_i = t * rho)
  FixEntry,     // X_ij = t_i t_j (Ratio: Y_ij = t_i t_j rho)
  CutRow,       // separated inequality
};

// One SDP relaxation with enough structure to support incremental variable
// fixing, cut addition and facial reduction. The PSD block is
//   [[1, x^T], [x, X]]          (Basic/Quto/Linear, order n+1)
//   [[rho, y^T], [y, Y]]        (Ratio, order n+1)
//   Z with Y = W Z W^T          (LinearReduced, order n)
// All constraint matrices are stored in block coordinates.
class RelaxationHandle {
 public:
  Variant variant = Variant::Basic;
  int n = 0;
  TqpInstance tqp;
  RatioInstance ratio;
  bool with_squared = true;
  std::map<int, int> fixings;
  Eigen::MatrixXd W;  // (n+1) x n reduced basis; empty unless LinearReduced

  int block_order() const;
  const sdp::ConicProblem& conic() const { return problem_; }

  // Appends one inequality given in lifted coordinates
  //   sum xc_i x_i + sum Xc_ij X_ij + rho_coeff * rho >= rhs
  // (for non-ratio variants rho is the corner constant 1). Used for cuts.
  void add_lifted_inequality(const std::map<int, double>& x_coeffs,
                             const std::map<std::pair<int, int>, double>& X_coeffs,
                             double rho_coeff, double rhs);

  // Fixes x_i = t in place: retires the diagonal rows of i, adds the border
  // and diagonal equalities and the implied products with previously fixed
  // coordinates. Throws AlreadyFixed / Error on bad arguments.
  void apply_fixing(int i, int t);

  struct Point {
    Eigen::VectorXd x;
    Eigen::MatrixXd X;
    double rho = 1.0;
  };
  // Maps a solver block back to instance coordinates (undoing the reduced
  // basis when present; dividing nothing: the ratio point stays scaled).
  Point extract(const Eigen::MatrixXd& block) const;

 private:
  friend RelaxationHandle build_basic(const TqpInstance&, bool);
  friend RelaxationHandle build_quto(const TqpInstance&);
  friend RelaxationHandle build_linear(const TqpInstance&);
  friend RelaxationHandle facial_reduce(const RelaxationHandle&);
  friend RelaxationHandle build_ratio(const RatioInstance&);

  sdp::ConicProblem problem_;
  std::vector<RowTag> eq_tags_;
  std::vector<int> eq_idx_;     // coordinate the row refers to (-1: none)
  std::vector<RowTag> ineq_tags_;
  std::vector<int> ineq_idx_;

  bool reduced() const { return W.size() > 0; }
  Eigen::MatrixXd to_block(const Eigen::MatrixXd& E) const;
  void add_eq(RowTag tag, int idx, const Eigen::MatrixXd& E, double rhs);
  void add_ineq(RowTag tag, int idx, const Eigen::MatrixXd& E, double rhs);
  void retire_diag_rows(int i);

  // Lifted-coordinate elementary matrices, order n+1.
  Eigen::MatrixXd corner_mat() const;
  Eigen::MatrixXd border_mat(int i) const;
  Eigen::MatrixXd entry_mat(int i, int j) const;
};

// Bordered-lift relaxation of a general constrained instance: corner = 1,
// a_i^T x = b_i (plus <a_i a_i^T, X> = b_i^2 when with_squared), the diagonal
// box rows and the PSD condition.
RelaxationHandle build_basic(const TqpInstance& inst, bool with_squared = true);

// Unconstrained variant; additionally pins X_ii = 1 wherever Q_ii <= 0
// (an optimal solution with those coordinates nonzero always exists).
// Throws HasConstraints if the instance carries constraints.
RelaxationHandle build_quto(const TqpInstance& inst);

// Balanced variant: requires exactly the single constraint sum(x) = 0, which
// enters in aggregated form <J, X> = 0 (the plain row is then implied by
// every PSD-feasible point).
RelaxationHandle build_linear(const TqpInstance& inst);

// Rewrites the balanced relaxation over the face that contains its feasible
// set: Y = W Z W^T where the columns of W span the orthogonal complement of
// (0, 1, ..., 1). The reduced problem has a strictly interior point. Fixings
// already applied to the input are re-applied through W.
// Throws WrongVariant unless the input is the Linear variant.
RelaxationHandle facial_reduce(const RelaxationHandle& h);

// The strictly positive definite feasible point of the reduced balanced
// relaxation (order n): [[1, (1/n) 1^T], [(1/n) 1, (1/n) I]].
Eigen::MatrixXd reduced_slater_point(int n);

// Fractional variant over (rho, y, Y) = rho * (1, x, x x^T): numerator as
// objective, denominator pinned to 1, rho >= 0, diag(Y) in [+-y, rho].
RelaxationHandle build_ratio(const RatioInstance& inst);

// Functional wrapper over RelaxationHandle::apply_fixing.
RelaxationHandle fix_variable(const RelaxationHandle& h, int i, int t);

// S = sum_i (-b_i; a_i)(-b_i; a_i)^T: <S, Y> equals sum_i (a_i^T x - b_i)^2
// on every lifted point, so <S, Y> = 0 aggregates all squared constraints.
// Throws EmptyConstraints when the instance has none.
Eigen::MatrixXd aggregated_squared_matrix(const TqpInstance& inst);

}  // namespace ternopt::relax
