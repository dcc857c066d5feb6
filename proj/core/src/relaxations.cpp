#include "ternopt/relaxations.hpp"

#include <cmath>
#include <string>

#include "ternopt/errors.hpp"

namespace ternopt::relax {

int RelaxationHandle::block_order() const { return reduced() ? n : n + 1; }

Eigen::MatrixXd RelaxationHandle::to_block(const Eigen::MatrixXd& E) const {
  if (!reduced()) return E;
  return W.transpose() * E * W;
}

Eigen::MatrixXd RelaxationHandle::corner_mat() const {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n + 1, n + 1);
  E(0, 0) = 1.0;
  return E;
}

Eigen::MatrixXd RelaxationHandle::border_mat(int i) const {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n + 1, n + 1);
  E(0, i + 1) = 0.5;
  E(i + 1, 0) = 0.5;
  return E;
}

Eigen::MatrixXd RelaxationHandle::entry_mat(int i, int j) const {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n + 1, n + 1);
  if (i == j) {
    E(i + 1, i + 1) = 1.0;
  } else {
    E(i + 1, j + 1) = 0.5;
    E(j + 1, i + 1) = 0.5;
  }
  return E;
}

void RelaxationHandle::add_eq(RowTag tag, int idx, const Eigen::MatrixXd& E,
                              double rhs) {
  problem_.eqs.push_back({to_block(E), rhs});
  eq_tags_.push_back(tag);
  eq_idx_.push_back(idx);
}

void RelaxationHandle::add_ineq(RowTag tag, int idx, const Eigen::MatrixXd& E,
                                double rhs) {
  problem_.ineqs.push_back({to_block(E), rhs});
  ineq_tags_.push_back(tag);
  ineq_idx_.push_back(idx);
}

void RelaxationHandle::retire_diag_rows(int i) {
  for (std::size_t r = eq_tags_.size(); r-- > 0;) {
    if (eq_tags_[r] == RowTag::DiagPin && eq_idx_[r] == i) {
      problem_.eqs.erase(problem_.eqs.begin() + static_cast<long>(r));
      eq_tags_.erase(eq_tags_.begin() + static_cast<long>(r));
      eq_idx_.erase(eq_idx_.begin() + static_cast<long>(r));
    }
  }
  for (std::size_t r = ineq_tags_.size(); r-- > 0;) {
    const RowTag t = ineq_tags_[r];
    if ((t == RowTag::DiagGeX || t == RowTag::DiagGeNegX ||
         t == RowTag::DiagLe1) &&
        ineq_idx_[r] == i) {
      problem_.ineqs.erase(problem_.ineqs.begin() + static_cast<long>(r));
      ineq_tags_.erase(ineq_tags_.begin() + static_cast<long>(r));
      ineq_idx_.erase(ineq_idx_.begin() + static_cast<long>(r));
    }
  }
}

void RelaxationHandle::add_lifted_inequality(
    const std::map<int, double>& x_coeffs,
    const std::map<std::pair<int, int>, double>& X_coeffs, double rho_coeff,
    double rhs) {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n + 1, n + 1);
  E(0, 0) = rho_coeff;
  for (const auto& [i, v] : x_coeffs) {
    E(0, i + 1) += 0.5 * v;
    E(i + 1, 0) += 0.5 * v;
  }
  for (const auto& [ij, v] : X_coeffs) {
    if (ij.first == ij.second) {
      E(ij.first + 1, ij.first + 1) += v;
    } else {
      E(ij.first + 1, ij.second + 1) += 0.5 * v;
      E(ij.second + 1, ij.first + 1) += 0.5 * v;
    }
  }
  if (variant != Variant::Ratio) {
    // The corner is the constant 1: fold its coefficient into the rhs.
    E(0, 0) = 0.0;
    add_ineq(RowTag::CutRow, -1, E, rhs - rho_coeff);
  } else {
    add_ineq(RowTag::CutRow, -1, E, rhs);
  }
}

void RelaxationHandle::apply_fixing(int i, int t) {
  if (i < 0 || i >= n)
    throw Error("apply_fixing: index " + std::to_string(i) + " out of range");
  if (t < -1 || t > 1) throw Error("apply_fixing: value must be in {-1,0,1}");
  if (fixings.count(i))
    throw AlreadyFixed("variable " + std::to_string(i) + " is already fixed");

  retire_diag_rows(i);
  const double td = t;
  if (variant == Variant::Ratio) {
    // y_i = t * rho, Y_ii = t^2 * rho, and Y_ij = t * t_j * rho for fixed j.
    Eigen::MatrixXd E = border_mat(i) - td * corner_mat();
    add_eq(RowTag::FixBorder, i, E, 0.0);
    E = entry_mat(i, i) - td * td * corner_mat();
    add_eq(RowTag::FixEntry, i, E, 0.0);
    for (const auto& [j, tj] : fixings) {
      E = entry_mat(i, j) - td * tj * corner_mat();
      add_eq(RowTag::FixEntry, i, E, 0.0);
    }
  } else {
    add_eq(RowTag::FixBorder, i, border_mat(i), td);
    add_eq(RowTag::FixEntry, i, entry_mat(i, i), td * td);
    for (const auto& [j, tj] : fixings)
      add_eq(RowTag::FixEntry, i, entry_mat(i, j), td * tj);
  }
  fixings[i] = t;
}

RelaxationHandle::Point RelaxationHandle::extract(
    const Eigen::MatrixXd& block) const {
  Point p;
  Eigen::MatrixXd Y = block;
  if (reduced()) Y = W * block * W.transpose();
  p.rho = variant == Variant::Ratio ? Y(0, 0) : 1.0;
  p.x = Y.block(1, 0, n, 1);
  p.X = Y.block(1, 1, n, n);
  return p;
}

namespace {

Eigen::MatrixXd lifted_objective(const SymMatrix& Q, const Eigen::VectorXd& c,
                                 double constant) {
  const int n = Q.n();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n + 1, n + 1);
  C(0, 0) = constant;
  C.block(0, 1, 1, n) = 0.5 * c.transpose();
  C.block(1, 0, n, 1) = 0.5 * c;
  C.block(1, 1, n, n) = Q.mat();
  return C;
}

}  // namespace

RelaxationHandle build_basic(const TqpInstance& inst, bool with_squared) {
  inst.validate();
  RelaxationHandle h;
  h.variant = Variant::Basic;
  h.n = inst.n();
  h.tqp = inst;
  h.with_squared = with_squared;
  h.problem_.m = h.n + 1;
  h.problem_.C = lifted_objective(inst.Q, inst.c, 0.0);

  h.add_eq(RowTag::Corner, -1, h.corner_mat(), 1.0);
  for (std::size_t k = 0; k < inst.constraints.size(); ++k) {
    const auto& con = inst.constraints[k];
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(h.n + 1, h.n + 1);
    E.block(0, 1, 1, h.n) = 0.5 * con.a.transpose();
    E.block(1, 0, h.n, 1) = 0.5 * con.a;
    h.add_eq(RowTag::LinCon, static_cast<int>(k), E, con.b);
    if (with_squared) {
      Eigen::MatrixXd S = Eigen::MatrixXd::Zero(h.n + 1, h.n + 1);
      S.block(1, 1, h.n, h.n) = con.a * con.a.transpose();
      h.add_eq(RowTag::Squared, static_cast<int>(k), S, con.b * con.b);
    }
  }
  for (int i = 0; i < h.n; ++i) {
    h.add_ineq(RowTag::DiagGeX, i, h.entry_mat(i, i) - h.border_mat(i), 0.0);
    h.add_ineq(RowTag::DiagGeNegX, i, h.entry_mat(i, i) + h.border_mat(i), 0.0);
    h.add_ineq(RowTag::DiagLe1, i, -h.entry_mat(i, i), -1.0);
  }
  return h;
}

RelaxationHandle build_quto(const TqpInstance& inst) {
  if (!inst.constraints.empty())
    throw HasConstraints("build_quto: instance has " +
                         std::to_string(inst.constraints.size()) +
                         " constraints");
  RelaxationHandle h = build_basic(inst, false);
  h.variant = Variant::Quto;
  // Where Q_ii <= 0 some optimum has x_i in {-1,+1}: pin X_ii = 1 and drop
  // the now-tight diagonal upper bound.
  for (int i = 0; i < h.n; ++i) {
    if (inst.Q(i, i) <= 0.0) {
      h.retire_diag_rows(i);
      h.add_ineq(RowTag::DiagGeX, i, h.entry_mat(i, i) - h.border_mat(i), 0.0);
      h.add_ineq(RowTag::DiagGeNegX, i, h.entry_mat(i, i) + h.border_mat(i),
                 0.0);
      h.add_eq(RowTag::DiagPin, i, h.entry_mat(i, i), 1.0);
    }
  }
  return h;
}

RelaxationHandle build_linear(const TqpInstance& inst) {
  inst.validate();
  const int n = inst.n();
  bool ok = inst.constraints.size() == 1 &&
            std::abs(inst.constraints[0].b) == 0.0;
  if (ok)
    for (int i = 0; i < n; ++i)
      ok = ok && inst.constraints[0].a[i] == 1.0;
  if (!ok)
    throw WrongVariant(
        "build_linear: instance must carry exactly the balance constraint "
        "sum(x) = 0");

  RelaxationHandle h;
  h.variant = Variant::Linear;
  h.n = n;
  h.tqp = inst;
  h.problem_.m = n + 1;
  h.problem_.C = lifted_objective(inst.Q, inst.c, 0.0);
  h.add_eq(RowTag::Corner, -1, h.corner_mat(), 1.0);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
  J.block(1, 1, n, n) = Eigen::MatrixXd::Ones(n, n);
  h.add_eq(RowTag::Balance, -1, J, 0.0);
  for (int i = 0; i < n; ++i) {
    h.add_ineq(RowTag::DiagGeX, i, h.entry_mat(i, i) - h.border_mat(i), 0.0);
    h.add_ineq(RowTag::DiagGeNegX, i, h.entry_mat(i, i) + h.border_mat(i), 0.0);
    h.add_ineq(RowTag::DiagLe1, i, -h.entry_mat(i, i), -1.0);
  }
  return h;
}

RelaxationHandle facial_reduce(const RelaxationHandle& in) {
  if (in.variant != Variant::Linear)
    throw WrongVariant("facial_reduce: input must be the Linear variant");
  const int n = in.n;
  RelaxationHandle h;
  h.variant = Variant::LinearReduced;
  h.n = n;
  h.tqp = in.tqp;
  // Columns: e_0 and e_1 - e_{1+r}, a basis of the complement of (0, 1...1).
  h.W = Eigen::MatrixXd::Zero(n + 1, n);
  h.W(0, 0) = 1.0;
  for (int r = 1; r < n; ++r) {
    h.W(1, r) = 1.0;
    h.W(1 + r, r) = -1.0;
  }
  h.problem_.m = n;
  h.problem_.C = h.to_block(lifted_objective(in.tqp.Q, in.tqp.c, 0.0));
  h.add_eq(RowTag::Corner, -1, h.corner_mat(), 1.0);
  // <J, X> vanishes identically on the face, so only the box rows remain.
  for (int i = 0; i < n; ++i) {
    h.add_ineq(RowTag::DiagGeX, i, h.entry_mat(i, i) - h.border_mat(i), 0.0);
    h.add_ineq(RowTag::DiagGeNegX, i, h.entry_mat(i, i) + h.border_mat(i), 0.0);
    h.add_ineq(RowTag::DiagLe1, i, -h.entry_mat(i, i), -1.0);
  }
  for (const auto& [i, t] : in.fixings) h.apply_fixing(i, t);
  return h;
}

Eigen::MatrixXd reduced_slater_point(int n) {
  Eigen::MatrixXd Z(n, n);
  Z.setConstant(1.0 / n);
  Z(0, 0) = 1.0;
  Z.block(1, 1, n - 1, n - 1) =
      (1.0 / n) * Eigen::MatrixXd::Identity(n - 1, n - 1);
  return Z;
}

RelaxationHandle build_ratio(const RatioInstance& inst) {
  inst.validate();
  const int n = inst.n();
  RelaxationHandle h;
  h.variant = Variant::Ratio;
  h.n = n;
  h.ratio = inst;
  h.problem_.m = n + 1;
  h.problem_.C = lifted_objective(inst.A, inst.a, inst.a0);
  h.add_eq(RowTag::Normalization, -1,
           lifted_objective(inst.B, inst.b, inst.b0), 1.0);
  h.add_ineq(RowTag::RhoNonneg, -1, h.corner_mat(), 0.0);
  for (int i = 0; i < n; ++i) {
    h.add_ineq(RowTag::DiagGeX, i, h.entry_mat(i, i) - h.border_mat(i), 0.0);
    h.add_ineq(RowTag::DiagGeNegX, i, h.entry_mat(i, i) + h.border_mat(i), 0.0);
    // Y_ii <= rho.
    h.add_ineq(RowTag::DiagLe1, i, h.corner_mat() - h.entry_mat(i, i), 0.0);
  }
  return h;
}

RelaxationHandle fix_variable(const RelaxationHandle& h, int i, int t) {
  RelaxationHandle out = h;
  out.apply_fixing(i, t);
  return out;
}

Eigen::MatrixXd aggregated_squared_matrix(const TqpInstance& inst) {
  if (inst.constraints.empty())
    throw EmptyConstraints("aggregated_squared_matrix: no constraints");
  const int n = inst.n();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::VectorXd v(n + 1);
  for (const auto& con : inst.constraints) {
    v[0] = -con.b;
    v.tail(n) = con.a;
    S += v * v.transpose();
  }
  return S;
}

}  // namespace ternopt::relax
