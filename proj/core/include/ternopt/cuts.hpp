#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ternopt/rng.hpp"
#include "ternopt/types.hpp"

namespace ternopt::cuts {

enum class Family { Triangle, Pair, Rlt, Split, KGonal5, KGonal7, KGonal9 };

const char* family_name(Family f);

// Linear inequality on the lifted variables:
//   sum x_coeffs[i] * x_i + sum X_coeffs[(i,j)] * X_ij + rho_coeff * rho >= rhs.
// For plain (non-ratio) relaxations rho is the fixed corner 1, so rho_coeff
// folds into the right-hand side; scale_for_ratio moves rhs onto rho instead.
struct Cut {
  Family family = Family::Triangle;
  std::map<int, double> x_coeffs;
  std::map<std::pair<int, int>, double> X_coeffs;  // keys i <= j
  double rho_coeff = 0.0;
  double rhs = 0.0;

  // Deterministic identity used for deduplication and tie-breaking.
  std::string key() const;
};

double cut_lhs(const Cut& c, const Eigen::VectorXd& x,
               const Eigen::MatrixXd& X, double rho = 1.0);
// rhs - lhs; positive means violated.
double cut_violation(const Cut& c, const Eigen::VectorXd& x,
                     const Eigen::MatrixXd& X, double rho = 1.0);
// Evaluates the cut at the exact lift (x, x x^T) (rho = 1).
bool cut_valid_on_ternary(const Cut& c, const TernaryVector& x,
                          double tol = 1e-9);

// Homogenization for the fractional relaxation: the constant right-hand side
// moves onto rho (lhs - rhs * rho >= 0), which is exact on scaled lifts
// (rho x, rho x x^T) for any rho > 0. Families with rhs = 0 pass through.
Cut scale_for_ratio(const Cut& c);

struct SeparationReport {
  std::vector<Cut> cuts;        // sorted by violation, then (family, key)
  double max_violation = 0.0;
  std::int64_t examined = 0;
};

// Exhaustive separators. tol: minimum violation to report. max_cuts: cap on
// the returned list (most violated first).
SeparationReport separate_triangle(const Eigen::MatrixXd& X, double tol,
                                   int max_cuts);
SeparationReport separate_pair(const Eigen::MatrixXd& X, double tol,
                               int max_cuts);
SeparationReport separate_rlt(const Eigen::VectorXd& x,
                              const Eigen::MatrixXd& X, double tol,
                              int max_cuts);
SeparationReport separate_split(const Eigen::VectorXd& x,
                                const Eigen::MatrixXd& X, double tol,
                                int max_cuts);

struct KgonalOptions {
  int k = 5;            // 5, 7 or 9
  int runs = 500;       // SA multistarts per sign vector
  double tol = 1e-3;
  int max_cuts = 5000;
  std::uint64_t seed = 0;
};

// Heuristic separation of the odd-k inequalities
//   sum_{i<j in S} v_i v_j X_ij >= ceil(-k/2),  |S| = k, v in {+-1}^S.
// For each of the 2^(k-1) sign-distinct v, simulated annealing searches over
// k-subsets (as the leading window of a permutation): T0 = 1, geometric
// cooling by 0.95 every n inner iterations, 100*n inner iterations per start,
// neighborhood = transpositions touching the window. Sound but heuristic:
// every returned cut is violated by at least tol, none is guaranteed found.
SeparationReport separate_kgonal(const Eigen::MatrixXd& X,
                                 const KgonalOptions& opt);

// All k-gonal cuts for one support set (|S| = k odd) and all sign-distinct v.
// Used by tests and by exhaustive validity sweeps.
std::vector<Cut> kgonal_cuts_for_support(const std::vector<int>& support);

// Sorts by violation (descending), breaking ties by family then key; caps
// the list. Used to merge reports from several families.
void rank_and_cap(std::vector<Cut>& cuts, const Eigen::VectorXd& x,
                  const Eigen::MatrixXd& X, double rho, int max_cuts);

}  // namespace ternopt::cuts
