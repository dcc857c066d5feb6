#include "ternopt/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "ternopt/errors.hpp"

namespace ternopt::cuts {

const char* family_name(Family f) {
  switch (f) {
    case Family::Triangle: return "triangle";
    case Family::Pair: return "pair";
    case Family::Rlt: return "rlt";
    case Family::Split: return "split";
    case Family::KGonal5: return "kgonal5";
    case Family::KGonal7: return "kgonal7";
    case Family::KGonal9: return "kgonal9";
  }
  return "?";
}

std::string Cut::key() const {
  char buf[48];
  std::string k = family_name(family);
  for (const auto& [i, v] : x_coeffs) {
    std::snprintf(buf, sizeof(buf), "|x%d:%g", i, v);
    k += buf;
  }
  for (const auto& [ij, v] : X_coeffs) {
    std::snprintf(buf, sizeof(buf), "|X%d,%d:%g", ij.first, ij.second, v);
    k += buf;
  }
  std::snprintf(buf, sizeof(buf), "|r%g|b%g", rho_coeff, rhs);
  k += buf;
  return k;
}

double cut_lhs(const Cut& c, const Eigen::VectorXd& x,
               const Eigen::MatrixXd& X, double rho) {
  double acc = c.rho_coeff * rho;
  for (const auto& [i, v] : c.x_coeffs) acc += v * x[i];
  for (const auto& [ij, v] : c.X_coeffs) acc += v * X(ij.first, ij.second);
  return acc;
}

double cut_violation(const Cut& c, const Eigen::VectorXd& x,
                     const Eigen::MatrixXd& X, double rho) {
  return c.rhs - cut_lhs(c, x, X, rho);
}

bool cut_valid_on_ternary(const Cut& c, const TernaryVector& x, double tol) {
  const Eigen::VectorXd xv = x.as_vector();
  const Eigen::MatrixXd Xm = xv * xv.transpose();
  return cut_lhs(c, xv, Xm, 1.0) >= c.rhs - tol;
}

Cut scale_for_ratio(const Cut& c) {
  Cut out = c;
  out.rho_coeff = c.rho_coeff - c.rhs;
  out.rhs = 0.0;
  return out;
}

namespace {

void finalize(SeparationReport& rep, std::vector<std::pair<double, Cut>>& found,
              int max_cuts) {
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    if (a.second.family != b.second.family)
      return a.second.family < b.second.family;
    return a.second.key() < b.second.key();
  });
  if (max_cuts >= 0 && static_cast<int>(found.size()) > max_cuts)
    found.resize(static_cast<std::size_t>(max_cuts));
  rep.cuts.reserve(found.size());
  for (auto& [viol, cut] : found) {
    rep.max_violation = std::max(rep.max_violation, viol);
    rep.cuts.push_back(std::move(cut));
  }
}

Cut make_triangle(int i, int j, int k, int si, int sj, int sk) {
  Cut c;
  c.family = Family::Triangle;
  c.X_coeffs[{i, j}] = si;
  c.X_coeffs[{i, k}] = sj;
  c.X_coeffs[{j, k}] = sk;
  c.rhs = -1.0;
  return c;
}

}  // namespace

SeparationReport separate_triangle(const Eigen::MatrixXd& X, double tol,
                                   int max_cuts) {
  const int n = static_cast<int>(X.rows());
  SeparationReport rep;
  std::vector<std::pair<double, Cut>> found;
  static constexpr int kSigns[4][3] = {
      {1, 1, 1}, {-1, 1, -1}, {1, -1, -1}, {-1, -1, 1}};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        for (const auto& s : kSigns) {
          ++rep.examined;
          const double lhs =
              s[0] * X(i, j) + s[1] * X(i, k) + s[2] * X(j, k);
          if (-1.0 - lhs > tol)
            found.emplace_back(-1.0 - lhs,
                               make_triangle(i, j, k, s[0], s[1], s[2]));
        }
      }
    }
  }
  finalize(rep, found, max_cuts);
  return rep;
}

SeparationReport separate_pair(const Eigen::MatrixXd& X, double tol,
                               int max_cuts) {
  const int n = static_cast<int>(X.rows());
  SeparationReport rep;
  std::vector<std::pair<double, Cut>> found;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto ij = std::minmax(i, j);
      for (int sign : {-1, 1}) {
        // sign=-1: X_ii - X_ij >= 0, sign=+1: X_ii + X_ij >= 0.
        ++rep.examined;
        const double lhs = X(i, i) + sign * X(i, j);
        if (-lhs > tol) {
          Cut c;
          c.family = Family::Pair;
          c.X_coeffs[{i, i}] = 1.0;
          c.X_coeffs[{ij.first, ij.second}] += sign;
          c.rhs = 0.0;
          found.emplace_back(-lhs, std::move(c));
        }
      }
    }
  }
  finalize(rep, found, max_cuts);
  return rep;
}

SeparationReport separate_rlt(const Eigen::VectorXd& x,
                              const Eigen::MatrixXd& X, double tol,
                              int max_cuts) {
  const int n = static_cast<int>(X.rows());
  SeparationReport rep;
  std::vector<std::pair<double, Cut>> found;
  static constexpr int kSigns[4][3] = {
      {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (const auto& s : kSigns) {
        ++rep.examined;
        const double lhs = s[0] * X(i, j) + s[1] * x[i] + s[2] * x[j];
        if (-1.0 - lhs > tol) {
          Cut c;
          c.family = Family::Rlt;
          c.X_coeffs[{i, j}] = s[0];
          c.x_coeffs[i] = s[1];
          c.x_coeffs[j] = s[2];
          c.rhs = -1.0;
          found.emplace_back(-1.0 - lhs, std::move(c));
        }
      }
    }
  }
  finalize(rep, found, max_cuts);
  return rep;
}

SeparationReport separate_split(const Eigen::VectorXd& x,
                                const Eigen::MatrixXd& X, double tol,
                                int max_cuts) {
  const int n = static_cast<int>(X.rows());
  SeparationReport rep;
  std::vector<std::pair<double, Cut>> found;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int s : {1, -1}) {
        for (int t : {1, -1}) {
          // X_ii + X_jj + 2s X_ij + t x_i + t s x_j >= 0.
          ++rep.examined;
          const double lhs = X(i, i) + X(j, j) + 2.0 * s * X(i, j) +
                             t * x[i] + t * s * x[j];
          if (-lhs > tol) {
            Cut c;
            c.family = Family::Split;
            c.X_coeffs[{i, i}] = 1.0;
            c.X_coeffs[{j, j}] = 1.0;
            c.X_coeffs[{i, j}] = 2.0 * s;
            c.x_coeffs[i] = t;
            c.x_coeffs[j] = t * s;
            c.rhs = 0.0;
            found.emplace_back(-lhs, std::move(c));
          }
        }
      }
    }
  }
  finalize(rep, found, max_cuts);
  return rep;
}

namespace {

Cut make_kgonal(const std::vector<int>& support, const std::vector<int>& signs) {
  const int k = static_cast<int>(support.size());
  // Canonical form: indices ascending, global sign flipped so the first
  // sign is +1 (v and -v define the same cut).
  std::vector<int> order(static_cast<std::size_t>(k));
  for (int a = 0; a < k; ++a) order[static_cast<std::size_t>(a)] = a;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return support[static_cast<std::size_t>(a)] <
           support[static_cast<std::size_t>(b)];
  });
  const int flip = signs[static_cast<std::size_t>(order[0])] < 0 ? -1 : 1;
  Cut c;
  switch (k) {
    case 5: c.family = Family::KGonal5; break;
    case 7: c.family = Family::KGonal7; break;
    case 9: c.family = Family::KGonal9; break;
    default: throw KTooLarge("k-gonal cut with k = " + std::to_string(k));
  }
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const int ia = support[static_cast<std::size_t>(order[static_cast<std::size_t>(a)])];
      const int ib = support[static_cast<std::size_t>(order[static_cast<std::size_t>(b)])];
      const int va = flip * signs[static_cast<std::size_t>(order[static_cast<std::size_t>(a)])];
      const int vb = flip * signs[static_cast<std::size_t>(order[static_cast<std::size_t>(b)])];
      c.X_coeffs[{ia, ib}] = va * vb;
    }
  }
  c.rhs = -static_cast<double>((k - 1) / 2);
  return c;
}

}  // namespace

std::vector<Cut> kgonal_cuts_for_support(const std::vector<int>& support) {
  const int k = static_cast<int>(support.size());
  if (k != 5 && k != 7 && k != 9)
    throw KTooLarge("k-gonal support size must be 5, 7 or 9, got " +
                    std::to_string(k));
  std::vector<Cut> out;
  out.reserve(1u << (k - 1));
  std::vector<int> signs(static_cast<std::size_t>(k), 1);
  for (std::uint32_t mask = 0; mask < (1u << (k - 1)); ++mask) {
    for (int b = 0; b < k - 1; ++b)
      signs[static_cast<std::size_t>(b + 1)] = (mask >> b) & 1u ? -1 : 1;
    out.push_back(make_kgonal(support, signs));
  }
  return out;
}

SeparationReport separate_kgonal(const Eigen::MatrixXd& X,
                                 const KgonalOptions& opt) {
  const int k = opt.k;
  if (k != 5 && k != 7 && k != 9)
    throw KTooLarge("separate_kgonal: k must be 5, 7 or 9, got " +
                    std::to_string(k));
  const int n = static_cast<int>(X.rows());
  if (n < k)
    throw KTooLarge("separate_kgonal: k = " + std::to_string(k) +
                    " exceeds the block order " + std::to_string(n));
  SeparationReport rep;
  const double rhs = -static_cast<double>((k - 1) / 2);

  Rng rng(opt.seed);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::vector<int> signs(static_cast<std::size_t>(k), 1);
  std::vector<int> best_window(static_cast<std::size_t>(k));
  std::set<std::string> seen;
  std::vector<std::pair<double, Cut>> found;

  const int inner = 100 * n;
  for (std::uint32_t mask = 0; mask < (1u << (k - 1)); ++mask) {
    for (int b = 0; b < k - 1; ++b)
      signs[static_cast<std::size_t>(b + 1)] = (mask >> b) & 1u ? -1 : 1;
    for (int run = 0; run < opt.runs; ++run) {
      for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
      for (int i = n - 1; i > 0; --i)
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[rng.next_below(static_cast<std::uint64_t>(i + 1))]);
      double obj = 0.0;
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
          obj += signs[static_cast<std::size_t>(a)] *
                 signs[static_cast<std::size_t>(b)] *
                 X(perm[static_cast<std::size_t>(a)],
                   perm[static_cast<std::size_t>(b)]);
      double best = obj;
      for (int a = 0; a < k; ++a)
        best_window[static_cast<std::size_t>(a)] =
            perm[static_cast<std::size_t>(a)];

      double T = 1.0;
      for (int it = 0; it < inner; ++it) {
        if (it > 0 && it % n == 0) T *= 0.95;
        const int p = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k)));
        int qpos = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
        if (qpos >= p) ++qpos;
        ++rep.examined;
        double delta = 0.0;
        const int ip = perm[static_cast<std::size_t>(p)];
        const int iq = perm[static_cast<std::size_t>(qpos)];
        if (qpos < k) {
          const int dv = signs[static_cast<std::size_t>(p)] -
                         signs[static_cast<std::size_t>(qpos)];
          if (dv != 0) {
            for (int a = 0; a < k; ++a) {
              if (a == p || a == qpos) continue;
              const int ia = perm[static_cast<std::size_t>(a)];
              delta += signs[static_cast<std::size_t>(a)] * dv *
                       (X(ia, iq) - X(ia, ip));
            }
          }
        } else {
          for (int a = 0; a < k; ++a) {
            if (a == p) continue;
            const int ia = perm[static_cast<std::size_t>(a)];
            delta += signs[static_cast<std::size_t>(a)] *
                     signs[static_cast<std::size_t>(p)] *
                     (X(ia, iq) - X(ia, ip));
          }
        }
        bool accept = delta <= 0.0;
        if (!accept && T > 1e-12)
          accept = rng.next_real01() < std::exp(-delta / T);
        if (accept) {
          std::swap(perm[static_cast<std::size_t>(p)],
                    perm[static_cast<std::size_t>(qpos)]);
          obj += delta;
          if (obj < best) {
            best = obj;
            for (int a = 0; a < k; ++a)
              best_window[static_cast<std::size_t>(a)] =
                  perm[static_cast<std::size_t>(a)];
          }
        }
      }

      if (best < rhs - opt.tol) {
        Cut c = make_kgonal(best_window, signs);
        if (seen.insert(c.key()).second) {
          // Exact violation recheck on the canonical cut.
          double lhs = 0.0;
          for (const auto& [ij, v] : c.X_coeffs)
            lhs += v * X(ij.first, ij.second);
          if (c.rhs - lhs > opt.tol)
            found.emplace_back(c.rhs - lhs, std::move(c));
        }
      }
    }
  }
  finalize(rep, found, opt.max_cuts);
  return rep;
}

void rank_and_cap(std::vector<Cut>& cuts, const Eigen::VectorXd& x,
                  const Eigen::MatrixXd& X, double rho, int max_cuts) {
  std::vector<std::pair<double, Cut>> scored;
  scored.reserve(cuts.size());
  for (auto& c : cuts)
    scored.emplace_back(cut_violation(c, x, X, rho), std::move(c));
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    if (a.second.family != b.second.family)
      return a.second.family < b.second.family;
    return a.second.key() < b.second.key();
  });
  if (max_cuts >= 0 && static_cast<int>(scored.size()) > max_cuts)
    scored.resize(static_cast<std::size_t>(max_cuts));
  cuts.clear();
  for (auto& [viol, cut] : scored) cuts.push_back(std::move(cut));
}

}  // namespace ternopt::cuts
