#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ternopt/errors.hpp"

namespace ternopt {

// Vector with entries restricted to {-1, 0, +1}. Construction validates.
class TernaryVector {
 public:
  TernaryVector() = default;
  explicit TernaryVector(std::vector<int> v);
  explicit TernaryVector(int n) : v_(static_cast<std::size_t>(n), 0) {}

  int size() const { return static_cast<int>(v_.size()); }
  int operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  void set(int i, int value);

  const std::vector<int>& raw() const { return v_; }
  Eigen::VectorXd as_vector() const;

  int sum() const;
  int support_size() const;

  bool operator==(const TernaryVector& o) const = default;

 private:
  std::vector<int> v_;
};

// Dense symmetric matrix. The constructor symmetrizes (M + M^T)/2 and rejects
// input whose asymmetry exceeds 1e-9, so entry(i,j) == entry(j,i) holds
// exactly afterwards.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& m);
  static SymMatrix zero(int n) { return SymMatrix(Eigen::MatrixXd::Zero(n, n)); }

  int n() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& mat() const { return m_; }

  // In-place symmetric update helper used by builders; keeps the invariant.
  void add_sym(int i, int j, double v) {
    m_(i, j) += v;
    if (i != j) m_(j, i) += v;
  }

 private:
  Eigen::MatrixXd m_;
};

struct LinearConstraint {
  Eigen::VectorXd a;
  double b = 0.0;
};

// min x^T Q x + c^T x  over x in {0,+-1}^n  s.t.  a_i^T x = b_i.
struct TqpInstance {
  SymMatrix Q;
  Eigen::VectorXd c;
  std::vector<LinearConstraint> constraints;

  int n() const { return Q.n(); }
  void validate() const;
};

// min (x^T A x + a^T x + a0) / (x^T B x + b^T x + b0) over x in {0,+-1}^n,
// denominator required positive on every ternary point.
struct RatioInstance {
  SymMatrix A;
  Eigen::VectorXd a;
  double a0 = 0.0;
  SymMatrix B;
  Eigen::VectorXd b;
  double b0 = 0.0;

  int n() const { return A.n(); }
  void validate() const;
};

enum class ProblemKind { Quto, Tqp, TqpLinear, TqpRatio };

std::string kind_name(ProblemKind k);
ProblemKind kind_from_name(const std::string& s);

struct InstanceMeta {
  std::string generator;  // empty when hand-written
  double param = 0.0;     // density/probability parameter, percent
  std::uint64_t seed = 0;
  bool present = false;
};

// Tagged union over the two instance payloads. kind selects which payload is
// meaningful: TqpRatio -> ratio, everything else -> tqp.
struct ProblemInstance {
  ProblemKind kind = ProblemKind::Quto;
  TqpInstance tqp;
  RatioInstance ratio;
  InstanceMeta meta;

  int n() const { return kind == ProblemKind::TqpRatio ? ratio.n() : tqp.n(); }
};

struct Solution {
  TernaryVector x;
  double value = 0.0;
  bool feasible = false;
};

double evaluate_objective(const TqpInstance& inst, const TernaryVector& x);
double evaluate_numerator(const RatioInstance& inst, const TernaryVector& x);
double evaluate_denominator(const RatioInstance& inst, const TernaryVector& x);
// Throws NonPositiveDenominator if g(x) <= 0.
double evaluate_ratio(const RatioInstance& inst, const TernaryVector& x);

// True iff |a_i^T x - b_i| <= tol for every constraint.
bool check_feasible(const TqpInstance& inst, const TernaryVector& x,
                    double tol = 1e-9);

}  // namespace ternopt
