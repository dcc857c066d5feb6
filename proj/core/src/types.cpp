#include "ternopt/types.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace ternopt {

TernaryVector::TernaryVector(std::vector<int> v) : v_(std::move(v)) {
  for (int e : v_) {
    if (e < -1 || e > 1)
      throw Error("ternary entry out of {-1,0,1}: " + std::to_string(e));
  }
}

void TernaryVector::set(int i, int value) {
  if (value < -1 || value > 1)
    throw Error("ternary entry out of {-1,0,1}: " + std::to_string(value));
  v_[static_cast<std::size_t>(i)] = value;
}

Eigen::VectorXd TernaryVector::as_vector() const {
  Eigen::VectorXd out(size());
  for (int i = 0; i < size(); ++i) out[i] = v_[static_cast<std::size_t>(i)];
  return out;
}

int TernaryVector::sum() const {
  int s = 0;
  for (int e : v_) s += e;
  return s;
}

int TernaryVector::support_size() const {
  int s = 0;
  for (int e : v_) s += (e != 0);
  return s;
}

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("SymMatrix: input is " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()));
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (m.rows() > 0 && asym > 1e-9)
    throw AsymmetricInput("SymMatrix: asymmetry " + std::to_string(asym) +
                          " exceeds 1e-9");
  m_ = 0.5 * (m + m.transpose());
}

void TqpInstance::validate() const {
  if (c.size() != n())
    throw DimensionMismatch("TqpInstance: |c| != n");
  for (const auto& con : constraints)
    if (con.a.size() != n())
      throw DimensionMismatch("TqpInstance: constraint length != n");
}

void RatioInstance::validate() const {
  if (B.n() != n() || a.size() != n() || b.size() != n())
    throw DimensionMismatch("RatioInstance: block sizes disagree");
}

std::string kind_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::Quto: return "quto";
    case ProblemKind::Tqp: return "tqp";
    case ProblemKind::TqpLinear: return "tqp-linear";
    case ProblemKind::TqpRatio: return "tqp-ratio";
  }
  return "?";
}

ProblemKind kind_from_name(const std::string& s) {
  if (s == "quto") return ProblemKind::Quto;
  if (s == "tqp") return ProblemKind::Tqp;
  if (s == "tqp-linear") return ProblemKind::TqpLinear;
  if (s == "tqp-ratio") return ProblemKind::TqpRatio;
  throw ParseError("unknown instance kind \"" + s + "\"");
}

namespace {

double quad_form(const SymMatrix& Q, const Eigen::VectorXd& lin, double cst,
                 const TernaryVector& x) {
  const auto& M = Q.mat();
  const int n = Q.n();
  double acc = cst;
  for (int i = 0; i < n; ++i) {
    const int xi = x[i];
    if (xi == 0) continue;
    acc += lin[i] * xi + M(i, i) * xi * xi;
    for (int j = i + 1; j < n; ++j)
      if (x[j] != 0) acc += 2.0 * M(i, j) * xi * x[j];
  }
  return acc;
}

}  // namespace

double evaluate_objective(const TqpInstance& inst, const TernaryVector& x) {
  if (x.size() != inst.n())
    throw DimensionMismatch("evaluate_objective: |x| != n");
  return quad_form(inst.Q, inst.c, 0.0, x);
}

double evaluate_numerator(const RatioInstance& inst, const TernaryVector& x) {
  if (x.size() != inst.n())
    throw DimensionMismatch("evaluate_numerator: |x| != n");
  return quad_form(inst.A, inst.a, inst.a0, x);
}

double evaluate_denominator(const RatioInstance& inst, const TernaryVector& x) {
  if (x.size() != inst.n())
    throw DimensionMismatch("evaluate_denominator: |x| != n");
  return quad_form(inst.B, inst.b, inst.b0, x);
}

double evaluate_ratio(const RatioInstance& inst, const TernaryVector& x) {
  const double g = evaluate_denominator(inst, x);
  if (g <= 0.0)
    throw NonPositiveDenominator("denominator " + std::to_string(g) +
                                 " at a ternary point");
  return evaluate_numerator(inst, x) / g;
}

bool check_feasible(const TqpInstance& inst, const TernaryVector& x,
                    double tol) {
  if (x.size() != inst.n())
    throw DimensionMismatch("check_feasible: |x| != n");
  for (const auto& con : inst.constraints) {
    double lhs = 0.0;
    for (int i = 0; i < inst.n(); ++i) lhs += con.a[i] * x[i];
    if (std::abs(lhs - con.b) > tol) return false;
  }
  return true;
}

}  // namespace ternopt
