#include "ternopt/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <queue>
#include <set>
#include <thread>

#include "ternopt/errors.hpp"
#include "ternopt/rng.hpp"

namespace ternopt::bnb {

relax::RelaxationHandle root_relaxation(const ProblemInstance& inst, Variant v,
                                        const BnbConfig& cfg) {
  switch (v) {
    case Variant::Quto:
      return relax::build_quto(inst.tqp);
    case Variant::Tqp:
      return relax::build_basic(inst.tqp, cfg.with_squared);
    case Variant::Linear: {
      relax::RelaxationHandle h = relax::build_linear(inst.tqp);
      if (cfg.use_facial_reduction) h = relax::facial_reduce(h);
      return h;
    }
    case Variant::RatioDirect:
      return relax::build_ratio(inst.ratio);
  }
  throw WrongVariant("root_relaxation: unknown variant");
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntegralTol = 1e-6;
constexpr double kTrustFactor = 10.0;  // dual residual slack for MaxIter bounds

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  Rng r = Rng::derive(Rng::derive(seed, a).next_u64(), b);
  return r.next_u64();
}

struct Node {
  std::int64_t id = 0;
  std::int64_t parent = -1;
  int depth = 0;
  double bound = -kInf;
  std::vector<std::pair<int, int>> fixings;  // (index, value), fixing order
  std::vector<cuts::Cut> pool;               // inherited cuts
};

// Best-first: lowest bound; ties prefer deeper nodes, then creation order.
// priority_queue pops the comparator's maximum, so every test is inverted.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

bool cut_support_fully_fixed(const cuts::Cut& c,
                             const std::map<int, int>& fixings) {
  for (const auto& [i, v] : c.x_coeffs) {
    (void)v;
    if (!fixings.count(i)) return false;
  }
  for (const auto& [ij, v] : c.X_coeffs) {
    (void)v;
    if (!fixings.count(ij.first) || !fixings.count(ij.second)) return false;
  }
  return true;
}

void add_cut_to_handle(relax::RelaxationHandle& h, const cuts::Cut& c) {
  if (h.variant == relax::Variant::Ratio) {
    cuts::Cut s = cuts::scale_for_ratio(c);
    h.add_lifted_inequality(s.x_coeffs, s.X_coeffs, s.rho_coeff, s.rhs);
  } else {
    h.add_lifted_inequality(c.x_coeffs, c.X_coeffs, c.rho_coeff, c.rhs);
  }
}

sdp::ConicSolution solve_with_retry(const sdp::ConicProblem& p,
                                    const sdp::SdpOptions& opt, int* solves) {
  sdp::ConicSolution s = sdp::solve(p, opt);
  ++*solves;
  if (s.status == sdp::SolveStatus::NumericalFailure) {
    sdp::SdpOptions relaxed = opt;
    relaxed.tol = opt.tol * 100.0;
    s = sdp::solve(p, relaxed);
    ++*solves;
  }
  return s;
}

bool bound_trusted(const sdp::ConicSolution& s, const sdp::SdpOptions& opt) {
  if (s.status == sdp::SolveStatus::Optimal) return true;
  return s.status == sdp::SolveStatus::MaxIter &&
         s.dual_residual <= kTrustFactor * opt.tol;
}

TernaryVector round_point(const Eigen::VectorXd& x) {
  TernaryVector r(static_cast<int>(x.size()));
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] >= 0.5)
      r.set(i, 1);
    else if (x[i] <= -0.5)
      r.set(i, -1);
  }
  return r;
}

// Moves the coordinate whose unit step toward balance costs least, repeatedly,
// until sum(x) = 0. Used to turn rounded relaxation points into feasible
// starts for the balanced variant.
void repair_balance(const TqpInstance& inst, TernaryVector& x) {
  const int n = x.size();
  Eigen::VectorXd alpha = inst.Q.mat() * x.as_vector();
  int sum = x.sum();
  while (sum != 0) {
    const int d = sum > 0 ? -1 : 1;
    int best = -1;
    double best_delta = kInf;
    for (int i = 0; i < n; ++i) {
      int v = x[i] + d;
      if (v < -1 || v > 1) continue;
      double delta = 2.0 * d * alpha(i) + inst.Q(i, i) + d * inst.c(i);
      if (delta < best_delta) {
        best_delta = delta;
        best = i;
      }
    }
    alpha += static_cast<double>(d) * inst.Q.mat().col(best);
    x.set(best, x[best] + d);
    sum += d;
  }
}

vns::Variant vns_variant(Variant v) {
  switch (v) {
    case Variant::Quto:
      return vns::Variant::Quto;
    case Variant::Linear:
      return vns::Variant::Linear;
    case Variant::RatioDirect:
      return vns::Variant::Ratio;
    default:
      throw WrongVariant("no neighborhood search for the general variant");
  }
}

// Evaluates a ternary point under the variant's exact objective; returns
// false when the point is infeasible (or the denominator fails to be
// positive on a malformed fractional instance).
bool exact_value(const ProblemInstance& inst, Variant variant,
                 const TernaryVector& x, double* value) {
  try {
    switch (variant) {
      case Variant::RatioDirect:
        *value = evaluate_ratio(inst.ratio, x);
        return true;
      case Variant::Tqp:
        if (!check_feasible(inst.tqp, x)) return false;
        *value = evaluate_objective(inst.tqp, x);
        return true;
      case Variant::Linear:
        if (x.sum() != 0) return false;
        *value = evaluate_objective(inst.tqp, x);
        return true;
      case Variant::Quto:
        *value = evaluate_objective(inst.tqp, x);
        return true;
    }
  } catch (const NonPositiveDenominator&) {
    return false;
  }
  return false;
}

struct ProcessOutcome {
  NodeRecord rec;
  std::vector<Node> children;  // ids unassigned; driver numbers them
  double node_bound = -kInf;
  bool has_candidate = false;
  Solution candidate;
  CutLoopResult loop;
};

void consider(const ProblemInstance& inst, Variant variant,
              const TernaryVector& x, ProcessOutcome* out) {
  double val;
  if (!exact_value(inst, variant, x, &val)) return;
  if (!out->has_candidate || val < out->candidate.value) {
    out->candidate = {x, val, true};
    out->has_candidate = true;
  }
}

ProcessOutcome process_node(const ProblemInstance& inst, Variant variant,
                            const BnbConfig& cfg, const Node& nd, double ub) {
  const int n = inst.n();
  ProcessOutcome out;
  out.rec.id = nd.id;
  out.rec.parent = nd.parent;
  out.rec.depth = nd.depth;
  out.node_bound = nd.bound;
  out.rec.bound = nd.bound;

  const auto prunable = [&](double bound, double best) {
    return std::isfinite(best) &&
           bound >= best - cfg.gap_tol * std::max(std::abs(best), 1.0);
  };

  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  int fix_sum = 0;
  for (const auto& [i, t] : nd.fixings) {
    fixed[static_cast<std::size_t>(i)] = 1;
    fix_sum += t;
  }
  const int free_count = n - static_cast<int>(nd.fixings.size());

  // Exact combinatorial feasibility for the balanced variant: the free
  // coordinates can offset a fixed surplus of at most their count.
  if (variant == Variant::Linear && std::abs(fix_sum) > free_count) {
    out.rec.action = "infeasible";
    return out;
  }

  // Fully determined: evaluate directly, no relaxation needed.
  if (free_count == 0) {
    TernaryVector x(n);
    for (const auto& [i, t] : nd.fixings) x.set(i, t);
    consider(inst, variant, x, &out);
    out.rec.action = out.has_candidate ? "integral" : "infeasible";
    if (out.has_candidate) out.node_bound = out.candidate.value;
    out.rec.bound = out.node_bound;
    return out;
  }

  relax::RelaxationHandle h = root_relaxation(inst, variant, cfg);
  for (const auto& [i, t] : nd.fixings) h.apply_fixing(i, t);
  out.loop = cutting_loop(h, cfg, nd.id, nd.pool);
  out.rec.cuts_added = out.loop.cuts_added;

  if (out.loop.infeasible) {
    out.rec.action = "infeasible";
    return out;
  }
  out.node_bound = std::max(nd.bound, out.loop.bound);
  out.rec.bound = out.node_bound;

  if (prunable(out.node_bound, ub)) {
    out.rec.action = "pruned";
    return out;
  }

  int branch_var = -1;
  bool integral = false;
  if (out.loop.have_point) {
    const auto& pt = out.loop.point;
    double rho = variant == Variant::RatioDirect ? pt.rho : 1.0;
    if (rho > 1e-9) {
      Eigen::VectorXd xhat = pt.x / rho;
      Eigen::MatrixXd Xhat = pt.X / rho;

      double phi_max = 0.0;
      for (int i = 0; i < n; ++i)
        phi_max = std::max(phi_max, fractionality(xhat[i]));
      double dev = (Xhat - xhat * xhat.transpose()).cwiseAbs().maxCoeff();
      integral = phi_max <= kIntegralTol && dev <= kIntegralTol;

      TernaryVector xr = round_point(xhat);
      if (variant == Variant::Linear) repair_balance(inst.tqp, xr);
      consider(inst, variant, xr, &out);
      if (cfg.use_vns && variant != Variant::Tqp) {
        vns::VnsParams vp = cfg.vns_params;
        vp.seed = mix_seed(cfg.seed, 0x706F6C, static_cast<std::uint64_t>(nd.id));
        consider(inst, variant,
                 vns::vns_from(inst, vns_variant(variant), xr, vp).x, &out);
      }

      if (!integral) {
        if (variant == Variant::RatioDirect)
          branch_var = select_branch_ratio(pt.rho, pt.x, pt.X, inst.ratio.A,
                                           fixed);
        else
          branch_var = select_branch_most_fractional(xhat, fixed);
      }
    }
  }
  if (integral) {
    out.rec.action = "integral";
    return out;
  }
  if (branch_var < 0) {
    // Relaxation gave no usable point; branch on the lowest free coordinate.
    for (int i = 0; i < n && branch_var < 0; ++i)
      if (!fixed[static_cast<std::size_t>(i)]) branch_var = i;
  }

  double new_ub = ub;
  if (out.has_candidate) new_ub = std::min(new_ub, out.candidate.value);
  if (prunable(out.node_bound, new_ub)) {
    out.rec.action = "pruned";
    return out;
  }

  out.rec.action = "branch";
  out.rec.branch_var = branch_var;
  const bool skip_zero = cfg.quto_diag_fix && variant == Variant::Quto &&
                         inst.tqp.Q(branch_var, branch_var) <= 0.0;
  for (int t = -1; t <= 1; ++t) {
    if (t == 0 && skip_zero) continue;
    Node child;
    child.parent = nd.id;
    child.depth = nd.depth + 1;
    child.bound = out.node_bound;
    child.fixings = nd.fixings;
    child.fixings.emplace_back(branch_var, t);
    if (cfg.inherit_cuts) {
      child.pool = nd.pool;
      child.pool.insert(child.pool.end(), out.loop.new_cuts.begin(),
                        out.loop.new_cuts.end());
    }
    out.children.push_back(std::move(child));
  }
  return out;
}

// Everything the workers share, guarded by mu except the start time.
struct SearchState {
  std::mutex mu;
  std::condition_variable cv;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> pq;
  int active = 0;
  bool stop = false;
  Status stop_status = Status::Optimal;
  double lb_closed = -kInf;  // bound of the node that met the gap rule
  bool gap_met = false;

  double ub = kInf;
  Solution incumbent;
  bool have_incumbent = false;

  std::int64_t next_id = 1;
  BnbStats stats;
  std::vector<NodeRecord> log;
  Clock::time_point t0;
};

void worker(const ProblemInstance& inst, Variant variant, const BnbConfig& cfg,
            SearchState& st) {
  std::unique_lock<std::mutex> lk(st.mu);
  for (;;) {
    st.cv.wait(lk, [&] { return st.stop || !st.pq.empty() || st.active == 0; });
    if (st.stop || (st.pq.empty() && st.active == 0)) {
      st.cv.notify_all();
      return;
    }
    if (st.pq.empty()) continue;

    if (seconds_since(st.t0) > cfg.time_limit) {
      st.stop = true;
      st.stop_status = Status::TimeLimit;
      st.cv.notify_all();
      return;
    }
    if (cfg.node_limit > 0 && st.stats.nodes_explored >= cfg.node_limit) {
      st.stop = true;
      st.stop_status = Status::NodeLimit;
      st.cv.notify_all();
      return;
    }

    Node nd = st.pq.top();
    st.pq.pop();
    if (st.have_incumbent &&
        nd.bound >= st.ub - cfg.gap_tol * std::max(std::abs(st.ub), 1.0)) {
      // Best-first order: every remaining node is at least as bad.
      st.stop = true;
      st.gap_met = true;
      st.lb_closed = std::min(nd.bound, st.ub);
      st.cv.notify_all();
      return;
    }

    ++st.active;
    ++st.stats.nodes_explored;
    double ub_snapshot = st.ub;
    lk.unlock();

    ProcessOutcome out = process_node(inst, variant, cfg, nd, ub_snapshot);

    lk.lock();
    st.stats.sdp_solves += out.loop.solves;
    for (int f = 0; f < kNumFamilies; ++f)
      st.stats.cuts_added[static_cast<std::size_t>(f)] +=
          out.loop.cuts_added[static_cast<std::size_t>(f)];
    if (nd.id == 0) {
      if (!out.loop.round_bounds.empty())
        st.stats.root_relax = out.loop.round_bounds.front();
      st.stats.root_bound = out.node_bound;
    }
    if (out.has_candidate &&
        (!st.have_incumbent || out.candidate.value < st.ub)) {
      st.incumbent = out.candidate;
      st.ub = out.candidate.value;
      st.have_incumbent = true;
    }
    out.rec.incumbent = st.ub;
    st.log.push_back(out.rec);
    for (Node& c : out.children) {
      c.id = st.next_id++;
      st.pq.push(std::move(c));
    }
    --st.active;
    st.cv.notify_all();
  }
}

}  // namespace

const char* status_name(Status s) {
  switch (s) {
    case Status::Optimal:
      return "optimal";
    case Status::TimeLimit:
      return "time_limit";
    case Status::NodeLimit:
      return "node_limit";
    case Status::Infeasible:
      return "infeasible";
  }
  return "?";
}

Variant variant_for_kind(ProblemKind k) {
  switch (k) {
    case ProblemKind::Quto:
      return Variant::Quto;
    case ProblemKind::Tqp:
      return Variant::Tqp;
    case ProblemKind::TqpLinear:
      return Variant::Linear;
    case ProblemKind::TqpRatio:
      return Variant::RatioDirect;
  }
  throw WrongVariant("variant_for_kind: unknown kind");
}

int family_index(cuts::Family f) {
  switch (f) {
    case cuts::Family::Triangle:
      return 0;
    case cuts::Family::Pair:
      return 1;
    case cuts::Family::Rlt:
      return 2;
    case cuts::Family::Split:
      return 3;
    case cuts::Family::KGonal5:
      return 4;
    case cuts::Family::KGonal7:
      return 5;
    case cuts::Family::KGonal9:
      return 6;
  }
  return 0;
}

double guarded_gap(double ub, double lb) {
  if (!std::isfinite(ub) || !std::isfinite(lb)) return kInf;
  return (ub - lb) / std::max(std::abs(ub), 1.0);
}

double fractionality(double t) {
  return std::min({std::abs(t + 1.0), std::abs(t), std::abs(t - 1.0)});
}

int select_branch_most_fractional(const Eigen::VectorXd& xs,
                                  const std::vector<char>& fixed) {
  int best = -1;
  double best_phi = -1.0;
  for (int i = 0; i < xs.size(); ++i) {
    if (fixed[static_cast<std::size_t>(i)]) continue;
    double phi = fractionality(xs[i]);
    if (phi > best_phi) {
      best_phi = phi;
      best = i;
    }
  }
  if (best < 0) throw AllFixed("select_branch_most_fractional: no free variable");
  return best;
}

int select_branch_ratio(double rho, const Eigen::VectorXd& y,
                        const Eigen::MatrixXd& Y, const SymMatrix& Q,
                        const std::vector<char>& fixed) {
  if (rho <= 0.0) throw NonPositiveRho("select_branch_ratio: rho must be positive");
  const int n = static_cast<int>(y.size());
  int best = -1;
  double best_score = -kInf;
  for (int j = 0; j < n; ++j) {
    if (fixed[static_cast<std::size_t>(j)]) continue;
    double score = 0.0;
    for (int k = 0; k < n; ++k)
      score += Q(k, j) * (y[j] * y[k] - rho * Y(j, k));
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  if (best < 0) throw AllFixed("select_branch_ratio: no free variable");
  return best;
}

CutLoopResult cutting_loop(relax::RelaxationHandle& h, const BnbConfig& cfg,
                           std::int64_t node_id,
                           const std::vector<cuts::Cut>& inherited) {
  const int n = h.n;
  CutLoopResult res;
  std::set<std::string> keys;
  for (const cuts::Cut& c : inherited) {
    if (cut_support_fully_fixed(c, h.fixings)) continue;
    if (!keys.insert(c.key()).second) continue;
    add_cut_to_handle(h, c);
  }

  const auto accept = [&](const sdp::ConicSolution& s) {
    if (s.status == sdp::SolveStatus::Infeasible) {
      res.infeasible = true;
      return false;
    }
    if (s.status == sdp::SolveStatus::NumericalFailure) return false;
    res.point = h.extract(s.X);
    res.have_point = true;
    if (bound_trusted(s, cfg.sdp)) {
      res.bound = std::max(res.bound, s.dual_objective);
      res.round_bounds.push_back(s.dual_objective);
    }
    return true;
  };

  sdp::ConicSolution sol = solve_with_retry(h.conic(), cfg.sdp, &res.solves);
  if (!accept(sol)) return res;

  std::vector<cuts::Family> cheap, annealed;
  for (cuts::Family f : cfg.families) {
    if (f == cuts::Family::KGonal5 || f == cuts::Family::KGonal7 ||
        f == cuts::Family::KGonal9)
      annealed.push_back(f);
    else
      cheap.push_back(f);
  }

  for (int phase = 0; phase < 2; ++phase) {
    const std::vector<cuts::Family>& fams = phase == 0 ? cheap : annealed;
    if (fams.empty()) continue;
    for (int round = 0; round < cfg.max_cut_rounds; ++round) {
      if (!res.have_point) break;
      double rho = h.variant == relax::Variant::Ratio ? res.point.rho : 1.0;
      if (rho <= 1e-9) break;
      Eigen::VectorXd xhat = res.point.x / rho;
      Eigen::MatrixXd Xhat = res.point.X / rho;

      std::vector<cuts::Cut> batch;
      for (cuts::Family f : fams) {
        cuts::SeparationReport rep;
        switch (f) {
          case cuts::Family::Triangle:
            rep = cuts::separate_triangle(Xhat, cfg.cut_tol,
                                          cfg.max_cuts_per_round);
            break;
          case cuts::Family::Pair:
            rep = cuts::separate_pair(Xhat, cfg.cut_tol,
                                      cfg.max_cuts_per_round);
            break;
          case cuts::Family::Rlt:
            rep = cuts::separate_rlt(xhat, Xhat, cfg.cut_tol,
                                     cfg.max_cuts_per_round);
            break;
          case cuts::Family::Split:
            rep = cuts::separate_split(xhat, Xhat, cfg.cut_tol,
                                       cfg.max_cuts_per_round);
            break;
          default: {
            cuts::KgonalOptions ko;
            ko.k = f == cuts::Family::KGonal5   ? 5
                   : f == cuts::Family::KGonal7 ? 7
                                                : 9;
            if (ko.k > static_cast<int>(Xhat.rows())) break;
            ko.runs = ko.k == 5   ? cfg.kgonal_runs5
                      : ko.k == 7 ? cfg.kgonal_runs7
                                  : cfg.kgonal_runs9;
            ko.tol = cfg.cut_tol;
            ko.max_cuts = cfg.max_cuts_per_round;
            ko.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(node_id),
                               static_cast<std::uint64_t>(round * 16 + ko.k));
            rep = cuts::separate_kgonal(Xhat, ko);
            break;
          }
        }
        for (cuts::Cut& c : rep.cuts) {
          if (keys.count(c.key())) continue;
          batch.push_back(std::move(c));
        }
      }
      // Cross-family duplicates are possible only via the key set above;
      // within the batch each family emits distinct keys already.
      const int found = static_cast<int>(batch.size());
      if (found == 0) break;
      cuts::rank_and_cap(batch, xhat, Xhat, 1.0, cfg.max_cuts_per_round);
      for (const cuts::Cut& c : batch) {
        keys.insert(c.key());
        add_cut_to_handle(h, c);
        ++res.cuts_added[static_cast<std::size_t>(family_index(c.family))];
        res.new_cuts.push_back(c);
      }
      sol = solve_with_retry(h.conic(), cfg.sdp, &res.solves);
      if (!accept(sol)) return res;
      if (found < n) break;  // few violations left: the phase has converged
    }
  }
  return res;
}

BnbResult solve(const ProblemInstance& inst, Variant variant,
                const BnbConfig& cfg) {
  const bool ok =
      (variant == Variant::Quto && inst.kind == ProblemKind::Quto) ||
      (variant == Variant::Linear && inst.kind == ProblemKind::TqpLinear) ||
      (variant == Variant::RatioDirect && inst.kind == ProblemKind::TqpRatio) ||
      (variant == Variant::Tqp && inst.kind != ProblemKind::TqpRatio);
  if (!ok) throw WrongVariant("solve: variant does not match the instance kind");

  SearchState st;
  st.t0 = Clock::now();

  if (cfg.use_vns && variant != Variant::Tqp) {
    vns::VnsParams vp = cfg.vns_params;
    vp.seed = cfg.seed;
    st.incumbent = vns::vns(inst, vns_variant(variant), vp);
    st.ub = st.incumbent.value;
    st.have_incumbent = true;
  } else {
    TernaryVector zero(inst.n());
    double val;
    if (exact_value(inst, variant, zero, &val)) {
      st.incumbent = {zero, val, true};
      st.ub = val;
      st.have_incumbent = true;
    }
  }

  st.pq.push(Node{});
  const int nthreads = std::max(1, cfg.threads);
  if (nthreads == 1) {
    worker(inst, variant, cfg, st);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] { worker(inst, variant, cfg, st); });
    for (std::thread& t : pool) t.join();
  }

  BnbResult res;
  res.stats = st.stats;
  res.log = std::move(st.log);

  double lb;
  if (st.gap_met) {
    lb = st.lb_closed;
    res.status = Status::Optimal;
  } else if (st.stop) {
    lb = st.pq.empty() ? st.ub : std::min(st.pq.top().bound, st.ub);
    res.status = st.stop_status;
  } else {
    // Queue exhausted: every node was fathomed.
    lb = st.ub;
    res.status = st.have_incumbent ? Status::Optimal : Status::Infeasible;
  }

  if (st.have_incumbent) {
    res.sol = st.incumbent;
  } else {
    res.sol.x = TernaryVector(inst.n());
    res.sol.value = kInf;
    res.sol.feasible = false;
  }
  res.bound = lb;
  res.stats.final_gap =
      res.status == Status::Infeasible ? 0.0 : guarded_gap(st.ub, lb);
  res.stats.wall_time = seconds_since(st.t0);
  return res;
}

DinkelbachResult dinkelbach(const ProblemInstance& inst, const BnbConfig& cfg,
                            double eps) {
  if (inst.kind != ProblemKind::TqpRatio)
    throw WrongVariant("dinkelbach: instance must be the fractional kind");
  const RatioInstance& R = inst.ratio;
  const auto t0 = Clock::now();

  DinkelbachResult res;

  vns::VnsParams vp = cfg.vns_params;
  vp.seed = cfg.seed;
  Solution seed = vns::vns(inst, vns::Variant::Ratio, vp);
  double fx = evaluate_numerator(R, seed.x);
  double lambda = fx / evaluate_denominator(R, seed.x);
  if (eps <= 0.0) eps = 1e-6 * (1.0 + std::abs(fx));

  TernaryVector xbest = seed.x;
  res.lambdas.push_back(lambda);

  constexpr int kMaxIter = 100;
  bool converged = false;
  for (int it = 1; it <= kMaxIter; ++it) {
    ProblemInstance sub;
    sub.kind = ProblemKind::Quto;
    sub.tqp.Q = SymMatrix(R.A.mat() - lambda * R.B.mat());
    sub.tqp.c = R.a - lambda * R.b;
    const double c0 = R.a0 - lambda * R.b0;

    BnbConfig icfg = cfg;
    icfg.seed = mix_seed(cfg.seed, 0xD1Dull, static_cast<std::uint64_t>(it));
    BnbResult inner = solve(sub, Variant::Quto, icfg);

    res.iterations = it;
    res.stats.nodes_explored += inner.stats.nodes_explored;
    res.stats.sdp_solves += inner.stats.sdp_solves;
    for (int f = 0; f < kNumFamilies; ++f)
      res.stats.cuts_added[static_cast<std::size_t>(f)] +=
          inner.stats.cuts_added[static_cast<std::size_t>(f)];

    if (inner.status != Status::Optimal) {
      res.status = DinkelbachStatus::InnerSolverFailure;
      break;
    }
    const double phi = inner.sol.value + c0;
    xbest = inner.sol.x;
    if (std::abs(phi) < eps) {
      converged = true;
      break;
    }
    lambda = evaluate_numerator(R, xbest) / evaluate_denominator(R, xbest);
    res.lambdas.push_back(lambda);
  }
  if (!converged && res.status == DinkelbachStatus::Optimal)
    res.status = DinkelbachStatus::InnerSolverFailure;

  res.sol.x = xbest;
  res.sol.value = evaluate_ratio(R, xbest);
  res.sol.feasible = true;
  res.lambda = res.sol.value;
  res.stats.wall_time = seconds_since(t0);
  res.stats.final_gap = 0.0;
  return res;
}

}  // namespace ternopt::bnb
