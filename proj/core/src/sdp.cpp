#include "ternopt/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ternopt::sdp {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// In-place A <- (A + A^T)/2. The temporary matters: assigning an expression
// containing A.transpose() back into A reads coefficients that have already
// been overwritten.
void symmetrize(Eigen::MatrixXd& A) {
  Eigen::MatrixXd At = A.transpose();
  A = 0.5 * (A + At);
}

struct Triplet {
  int r, c;
  double v;
};

// Internal row: equality or inequality after row equilibration. Inequalities
// own one slack coordinate in the nonnegative block.
struct Row {
  Eigen::MatrixXd A;
  double b = 0.0;
  bool ineq = false;
  int slack = -1;
  std::vector<Triplet> trip;   // all nonzeros, both mirror copies
  std::vector<int> cols;       // distinct nonzero columns
  double norm = 1.0;           // original Frobenius norm (scale factor)
};

double dot_row(const Row& row, const Eigen::MatrixXd& X) {
  double acc = 0.0;
  for (const auto& t : row.trip) acc += t.v * X(t.r, t.c);
  return acc;
}

void build_sparsity(Row& row) {
  const int m = static_cast<int>(row.A.rows());
  row.trip.clear();
  row.cols.clear();
  std::vector<char> colmark(static_cast<std::size_t>(m), 0);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      if (row.A(r, c) != 0.0) {
        row.trip.push_back({r, c, row.A(r, c)});
        colmark[static_cast<std::size_t>(c)] = 1;
      }
  for (int c = 0; c < m; ++c)
    if (colmark[static_cast<std::size_t>(c)]) row.cols.push_back(c);
}

// Largest alpha with X + alpha*dX still PSD, via lambda_min of
// L^{-1} dX L^{-T} where X = L L^T.
double max_step_psd(const Eigen::LLT<Eigen::MatrixXd>& llt,
                    const Eigen::MatrixXd& dX) {
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd W =
      L.triangularView<Eigen::Lower>().solve(dX.transpose()).transpose();
  W = L.triangularView<Eigen::Lower>().solve(W);
  symmetrize(W);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W,
                                                    Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin >= -1e-14 ? kInf : -1.0 / lmin;
}

double max_step_vec(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
  double a = kInf;
  for (int i = 0; i < x.size(); ++i)
    if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
  return a;
}

struct Solver {
  const SdpOptions opt;
  int m = 0;
  int q = 0;  // number of inequality slacks
  double obj_scale = 1.0;
  Eigen::MatrixXd C;
  std::vector<Row> rows;
  Eigen::VectorXd bvec;

  // Iterates.
  Eigen::MatrixXd X, Z;
  Eigen::VectorXd s, w, y;

  ConicSolution best;
  double best_merit = kInf;

  explicit Solver(const ConicProblem& p, const SdpOptions& o) : opt(o) {
    m = p.m;
    obj_scale = std::max(1.0, p.C.norm());
    C = 0.5 * (p.C + p.C.transpose()) / obj_scale;
    const auto add = [&](const AffineConstraint& c, bool ineq) {
      Row row;
      row.A = 0.5 * (c.A + c.A.transpose());
      row.norm = std::max(row.A.norm(), 1e-10);
      row.A /= row.norm;
      row.b = c.rhs / row.norm;
      row.ineq = ineq;
      if (ineq) row.slack = q++;
      build_sparsity(row);
      rows.push_back(std::move(row));
    };
    for (const auto& c : p.eqs) add(c, false);
    for (const auto& c : p.ineqs) add(c, true);
    bvec.resize(static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      bvec[static_cast<int>(i)] = rows[i].b;
  }

  Eigen::MatrixXd adjoint(const Eigen::VectorXd& yy) const {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double yi = yy[static_cast<int>(i)];
      if (yi == 0.0) continue;
      for (const auto& t : rows[i].trip) S(t.r, t.c) += yi * t.v;
    }
    return S;
  }

  void record_best(double merit, double pobj, double dobj, double prres,
                   double drres, double relgap, int iter,
                   SolveStatus status) {
    if (merit < best_merit) {
      best_merit = merit;
      best.X = X;
      best.objective = pobj;
      best.dual_objective = dobj;
      best.primal_residual = prres;
      best.dual_residual = drres;
      best.gap = relgap;
      best.iters = iter;
      best.status = status;
    }
  }

  bool infeasibility_certificate() const {
    const double ny = y.norm();
    if (ny < 1e7) return false;
    const Eigen::VectorXd yh = y / ny;
    if (bvec.dot(yh) < 1e-10) return false;
    for (const auto& row : rows)
      if (row.ineq && yh[static_cast<int>(&row - rows.data())] < -1e-8)
        return false;
    Eigen::MatrixXd S = -adjoint(yh);
    symmetrize(S);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S,
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-8;
  }

  ConicSolution run() {
    const int p = static_cast<int>(rows.size());
    ConicSolution out;
    if (m <= 0) {
      out.status = SolveStatus::NumericalFailure;
      return out;
    }
    if (p == 0) {
      // No constraints: optimum is X = 0 when C is PSD.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C,
                                                        Eigen::EigenvaluesOnly);
      out.X = Eigen::MatrixXd::Zero(m, m);
      out.status = es.eigenvalues().minCoeff() >= -1e-12
                       ? SolveStatus::Optimal
                       : SolveStatus::NumericalFailure;
      return out;
    }

    const double bmax = bvec.cwiseAbs().maxCoeff();
    const double xi_p = std::max(10.0, 1.5 * std::sqrt(double(m)) * (1.0 + bmax));
    const double xi_d = std::max(10.0, std::sqrt(double(m + q)));
    X = xi_p * Eigen::MatrixXd::Identity(m, m);
    Z = xi_d * Eigen::MatrixXd::Identity(m, m);
    s = Eigen::VectorXd::Constant(q, xi_p);
    w = Eigen::VectorXd::Constant(q, xi_d);
    y = Eigen::VectorXd::Zero(p);

    Eigen::VectorXd rp(p), rd_lp(q);
    double gamma = 0.9;
    int stall = 0;
    double last_merit = kInf;
    int no_progress = 0;

    for (int iter = 0; iter < opt.max_iter; ++iter) {
      // Residuals and convergence measures.
      for (int i = 0; i < p; ++i) {
        rp[i] = rows[static_cast<std::size_t>(i)].b - dot_row(rows[static_cast<std::size_t>(i)], X);
        if (rows[static_cast<std::size_t>(i)].ineq)
          rp[i] += s[rows[static_cast<std::size_t>(i)].slack];
      }
      Eigen::MatrixXd Rd = C - adjoint(y) - Z;
      symmetrize(Rd);
      for (const auto& row : rows)
        if (row.ineq)
          rd_lp[row.slack] = y[static_cast<int>(&row - rows.data())] - w[row.slack];

      const double pobj = obj_scale * (C.cwiseProduct(X)).sum();
      const double dobj = obj_scale * bvec.dot(y);
      const double prres = rp.norm() / (1.0 + bvec.norm());
      const double drres =
          std::sqrt(Rd.squaredNorm() + rd_lp.squaredNorm()) / (1.0 + C.norm());
      const double relgap =
          std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
      const double mu =
          ((X.cwiseProduct(Z)).sum() + s.dot(w)) / static_cast<double>(m + q);
      const double merit = std::max({prres, drres, relgap});

      record_best(merit, pobj, dobj, prres, drres, relgap, iter,
                  SolveStatus::MaxIter);

      if (prres <= opt.tol && drres <= opt.tol && relgap <= opt.tol) {
        best.status = SolveStatus::Optimal;
        best.X = X;
        best.objective = pobj;
        best.dual_objective = dobj;
        best.primal_residual = prres;
        best.dual_residual = drres;
        best.gap = relgap;
        best.iters = iter;
        return best;
      }
      if (infeasibility_certificate()) {
        best.status = SolveStatus::Infeasible;
        best.iters = iter;
        return best;
      }
      if (!std::isfinite(mu) || mu > 1e32) {
        best.status = SolveStatus::NumericalFailure;
        return best;
      }
      if (merit > last_merit * (1.0 - 1e-4)) {
        if (++no_progress > 25) break;
      } else {
        no_progress = 0;
      }
      last_merit = std::min(last_merit, merit);

      // Factorizations of the current iterate.
      Eigen::LLT<Eigen::MatrixXd> lltX(X), lltZ(Z);
      if (lltX.info() != Eigen::Success || lltZ.info() != Eigen::Success) {
        best.status = SolveStatus::NumericalFailure;
        return best;
      }
      const Eigen::MatrixXd Zi = lltZ.solve(Eigen::MatrixXd::Identity(m, m));

      // Schur complement M_ik = <A_i, X A_k Z^{-1}> (+ s/w on the diagonal
      // for inequality rows), built one column at a time through the sparse
      // triplets of each A_k.
      Eigen::MatrixXd M(p, p);
      Eigen::MatrixXd Pk(m, m), XA(m, m);
      for (int k = 0; k < p; ++k) {
        const Row& rk = rows[static_cast<std::size_t>(k)];
        XA.setZero();
        for (const auto& t : rk.trip) XA.col(t.c) += t.v * X.col(t.r);
        Pk.setZero();
        for (int c : rk.cols) Pk += XA.col(c) * Zi.row(c);
        for (int i = 0; i < p; ++i)
          M(i, k) = dot_row(rows[static_cast<std::size_t>(i)], Pk);
      }
      for (const auto& row : rows)
        if (row.ineq) {
          const int i = static_cast<int>(&row - rows.data());
          M(i, i) += s[row.slack] / w[row.slack];
        }
      symmetrize(M);

      Eigen::LLT<Eigen::MatrixXd> lltM(M);
      if (lltM.info() != Eigen::Success) {
        double reg = 1e-12 * (1.0 + M.trace() / p);
        for (int t = 0; t < 6 && lltM.info() != Eigen::Success; ++t) {
          lltM.compute(M + reg * Eigen::MatrixXd::Identity(p, p));
          reg *= 100.0;
        }
        if (lltM.info() != Eigen::Success) {
          best.status = SolveStatus::NumericalFailure;
          return best;
        }
      }

      // One Newton solve for a given complementarity target.
      Eigen::MatrixXd dX(m, m), dZ(m, m);
      Eigen::VectorXd ds(q), dw(q), dy(p);
      const auto newton = [&](const Eigen::MatrixXd& Rc,
                              const Eigen::VectorXd& rc_lp) {
        const Eigen::MatrixXd Raux = (Rc - X * Rd) * Zi;
        Eigen::VectorXd rhs = rp;
        for (int i = 0; i < p; ++i) {
          rhs[i] -= dot_row(rows[static_cast<std::size_t>(i)], Raux);
          const Row& row = rows[static_cast<std::size_t>(i)];
          if (row.ineq)
            rhs[i] += (rc_lp[row.slack] - s[row.slack] * rd_lp[row.slack]) /
                      w[row.slack];
        }
        dy = lltM.solve(rhs);
        dZ = Rd - adjoint(dy);
        symmetrize(dZ);
        for (const auto& row : rows)
          if (row.ineq)
            dw[row.slack] =
                rd_lp[row.slack] + dy[static_cast<int>(&row - rows.data())];
        dX = (Rc - X * dZ) * Zi;
        symmetrize(dX);
        for (int j = 0; j < q; ++j)
          ds[j] = (rc_lp[j] - s[j] * dw[j]) / w[j];
      };

      // Predictor.
      newton(-X * Z, -s.cwiseProduct(w));
      double ap = std::min({1.0, gamma * max_step_psd(lltX, dX),
                            gamma * max_step_vec(s, ds)});
      double ad = std::min({1.0, gamma * max_step_psd(lltZ, dZ),
                            gamma * max_step_vec(w, dw)});
      const double mu_aff =
          (((X + ap * dX).cwiseProduct(Z + ad * dZ)).sum() +
           (s + ap * ds).dot(w + ad * dw)) /
          static_cast<double>(m + q);
      double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
      sigma = std::clamp(sigma, 1e-8, 1.0);

      // Corrector (Mehrotra second-order term).
      const Eigen::MatrixXd Rc =
          sigma * mu * Eigen::MatrixXd::Identity(m, m) - X * Z - dX * dZ;
      const Eigen::VectorXd rc_lp = Eigen::VectorXd::Constant(q, sigma * mu) -
                                    s.cwiseProduct(w) - ds.cwiseProduct(dw);
      newton(Rc, rc_lp);

      ap = std::min({1.0, gamma * max_step_psd(lltX, dX),
                     gamma * max_step_vec(s, ds)});
      ad = std::min({1.0, gamma * max_step_psd(lltZ, dZ),
                     gamma * max_step_vec(w, dw)});
      if (ap < 1e-10 && ad < 1e-10) {
        if (++stall >= 3) break;
      } else {
        stall = 0;
      }

      X += ap * dX;
      s += ap * ds;
      y += ad * dy;
      Z += ad * dZ;
      w += ad * dw;
      symmetrize(X);
      symmetrize(Z);
      gamma = 0.9 + 0.09 * std::min({ap, ad, 1.0});
    }

    // Ran out of iterations or stalled: hand back the best iterate seen.
    if (best_merit <= opt.tol) best.status = SolveStatus::Optimal;
    return best;
  }
};

}  // namespace

ConicSolution solve(const ConicProblem& p, const SdpOptions& opt) {
  Solver s(p, opt);
  return s.run();
}

}  // namespace ternopt::sdp
