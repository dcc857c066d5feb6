// ternopt: generate, bound, solve and oracle-check ternary quadratic
// programs. Exit codes: 0 solved (or proven infeasible), 3 stopped on a
// time/node limit, 2 bad flags or unsupported request, 1 IO/parse/solver
// failure.

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ternopt/bnb.hpp"
#include "ternopt/instances.hpp"
#include "ternopt/vns.hpp"

namespace {

using nlohmann::json;
using namespace ternopt;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Usage problems only detectable after flag parsing (bad family list,
// method/kind mismatch, oracle cap). Reported like CLI11 parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr cuts::Family kAllFamilies[] = {
    cuts::Family::Triangle, cuts::Family::Pair,    cuts::Family::Rlt,
    cuts::Family::Split,    cuts::Family::KGonal5, cuts::Family::KGonal7,
    cuts::Family::KGonal9};

struct SolveFlags {
  double gap_tol = 1e-4;
  double cut_tol = 1e-3;
  int max_cuts = 5000;
  int max_rounds = 50;
  double time_limit = kInf;
  std::int64_t node_limit = 0;
  std::string cuts = "default";
  int kgonal_runs5 = 500;
  int kgonal_runs7 = 1000;
  int kgonal_runs9 = 1000;
  bool no_inherit = false;
  bool no_facial = false;
  bool no_squared = false;
  bool diag_fix = false;
  bool no_vns = false;
  int threads = 1;
  std::uint64_t seed = 0;
  int restarts = 100;
  int s_min = 2;
  int s_max = 0;
  int s_step = 2;
  int iter_max = 3;
  double sdp_tol = 1e-7;
  int sdp_max_iter = 200;
};

void add_solver_flags(CLI::App* c, SolveFlags& f) {
  c->add_option("--gap-tol", f.gap_tol, "relative optimality gap")
      ->capture_default_str();
  c->add_option("--cut-tol", f.cut_tol, "minimum violation to add a cut")
      ->capture_default_str();
  c->add_option("--max-cuts", f.max_cuts, "cut cap per separation round")
      ->capture_default_str();
  c->add_option("--max-rounds", f.max_rounds, "separation rounds per phase")
      ->capture_default_str();
  c->add_option("--time-limit", f.time_limit, "wall-clock limit in seconds")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--node-limit", f.node_limit, "node cap, 0 = unlimited")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--cuts", f.cuts,
                "default|all|none or a comma list of triangle,pair,rlt,split,"
                "kgonal5,kgonal7,kgonal9")
      ->capture_default_str();
  c->add_option("--kgonal-runs5", f.kgonal_runs5,
                "annealing starts per sign vector, 5-gonal")
      ->capture_default_str();
  c->add_option("--kgonal-runs7", f.kgonal_runs7,
                "annealing starts per sign vector, 7-gonal")
      ->capture_default_str();
  c->add_option("--kgonal-runs9", f.kgonal_runs9,
                "annealing starts per sign vector, 9-gonal")
      ->capture_default_str();
  c->add_flag("--no-inherit-cuts", f.no_inherit,
              "children restart with an empty cut pool");
  c->add_flag("--no-facial-reduction", f.no_facial,
              "solve the balance variant without the reduced cone");
  c->add_flag("--no-squared-rows", f.no_squared,
              "drop the squared-constraint rows on general instances");
  c->add_flag("--quto-diag-fix", f.diag_fix,
              "skip the zero branch where the diagonal is nonpositive");
  c->add_flag("--no-vns", f.no_vns, "disable the primal heuristic");
  c->add_option("--threads", f.threads, "parallel tree workers")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--seed", f.seed, "RNG seed")->envname("TQP_SEED");
  c->add_option("--restarts", f.restarts, "heuristic restarts")
      ->capture_default_str();
  c->add_option("--s-min", f.s_min, "initial shake size")->capture_default_str();
  c->add_option("--s-max", f.s_max, "maximum shake size, 0 = n")
      ->capture_default_str();
  c->add_option("--s-step", f.s_step, "shake size increment")
      ->capture_default_str();
  c->add_option("--iter-max", f.iter_max, "outer heuristic sweeps")
      ->capture_default_str();
  c->add_option("--sdp-tol", f.sdp_tol, "interior-point tolerance")
      ->capture_default_str();
  c->add_option("--sdp-max-iter", f.sdp_max_iter, "interior-point iteration cap")
      ->capture_default_str();
}

std::vector<cuts::Family> parse_families(const std::string& s) {
  if (s == "none") return {};
  if (s == "default") return bnb::BnbConfig{}.families;
  if (s == "all")
    return {kAllFamilies, kAllFamilies + std::size(kAllFamilies)};
  std::vector<cuts::Family> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    std::string tok = s.substr(pos, comma - pos);
    bool found = false;
    for (cuts::Family f : kAllFamilies)
      if (tok == cuts::family_name(f)) {
        out.push_back(f);
        found = true;
      }
    if (!found) throw UsageError("--cuts: unknown cut family '" + tok + "'");
    pos = comma + 1;
  }
  return out;
}

bnb::BnbConfig to_config(const SolveFlags& f) {
  bnb::BnbConfig cfg;
  cfg.gap_tol = f.gap_tol;
  cfg.cut_tol = f.cut_tol;
  cfg.max_cuts_per_round = f.max_cuts;
  cfg.max_cut_rounds = f.max_rounds;
  cfg.time_limit = f.time_limit;
  cfg.node_limit = f.node_limit;
  cfg.families = parse_families(f.cuts);
  cfg.kgonal_runs5 = f.kgonal_runs5;
  cfg.kgonal_runs7 = f.kgonal_runs7;
  cfg.kgonal_runs9 = f.kgonal_runs9;
  cfg.inherit_cuts = !f.no_inherit;
  cfg.use_facial_reduction = !f.no_facial;
  cfg.with_squared = !f.no_squared;
  cfg.quto_diag_fix = f.diag_fix;
  cfg.use_vns = !f.no_vns;
  cfg.threads = f.threads;
  cfg.seed = f.seed;
  cfg.vns_params.restarts = f.restarts;
  cfg.vns_params.s_min = f.s_min;
  cfg.vns_params.s_max = f.s_max;
  cfg.vns_params.s_step = f.s_step;
  cfg.vns_params.iter_max = f.iter_max;
  cfg.sdp.tol = f.sdp_tol;
  cfg.sdp.max_iter = f.sdp_max_iter;
  return cfg;
}

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string fmt_or_blank(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json cuts_json(const std::array<std::int64_t, bnb::kNumFamilies>& a) {
  json j = json::object();
  for (cuts::Family f : kAllFamilies)
    j[cuts::family_name(f)] = a[static_cast<std::size_t>(bnb::family_index(f))];
  return j;
}

std::string cuts_line(const std::array<std::int64_t, bnb::kNumFamilies>& a) {
  std::string s;
  for (cuts::Family f : kAllFamilies) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%s=%lld", s.empty() ? "" : " ",
                  cuts::family_name(f),
                  static_cast<long long>(
                      a[static_cast<std::size_t>(bnb::family_index(f))]));
    s += buf;
  }
  return s;
}

std::string vector_line(const TernaryVector& x) {
  std::string s = "[";
  for (int i = 0; i < x.size(); ++i) {
    if (i) s += ' ';
    s += x[i] > 0 ? "+1" : (x[i] < 0 ? "-1" : "0");
  }
  return s + "]";
}

json config_json(const bnb::BnbConfig& cfg) {
  json fams = json::array();
  for (cuts::Family f : cfg.families) fams.push_back(cuts::family_name(f));
  return {{"gap_tol", cfg.gap_tol},
          {"cut_tol", cfg.cut_tol},
          {"max_cuts_per_round", cfg.max_cuts_per_round},
          {"max_cut_rounds", cfg.max_cut_rounds},
          {"time_limit", finite_or_null(cfg.time_limit)},
          {"node_limit", cfg.node_limit},
          {"families", fams},
          {"kgonal_runs", {cfg.kgonal_runs5, cfg.kgonal_runs7, cfg.kgonal_runs9}},
          {"inherit_cuts", cfg.inherit_cuts},
          {"use_facial_reduction", cfg.use_facial_reduction},
          {"with_squared", cfg.with_squared},
          {"quto_diag_fix", cfg.quto_diag_fix},
          {"use_vns", cfg.use_vns},
          {"threads", cfg.threads},
          {"seed", cfg.seed},
          {"vns",
           {{"s_min", cfg.vns_params.s_min},
            {"s_max", cfg.vns_params.s_max},
            {"s_step", cfg.vns_params.s_step},
            {"iter_max", cfg.vns_params.iter_max},
            {"restarts", cfg.vns_params.restarts}}},
          {"sdp", {{"tol", cfg.sdp.tol}, {"max_iter", cfg.sdp.max_iter}}}};
}

json instance_json(const std::string& path, const ProblemInstance& inst) {
  json j = {{"path", path}, {"kind", kind_name(inst.kind)}, {"n", inst.n()}};
  if (inst.meta.present)
    j["meta"] = {{"generator", inst.meta.generator},
                 {"p", inst.meta.param},
                 {"seed", inst.meta.seed}};
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path + " failed");
}

int status_exit(bnb::Status s) {
  switch (s) {
    case bnb::Status::Optimal:
    case bnb::Status::Infeasible:
      return 0;
    case bnb::Status::TimeLimit:
    case bnb::Status::NodeLimit:
      return 3;
  }
  return 1;
}

std::string variant_name(bnb::Variant v) {
  switch (v) {
    case bnb::Variant::Quto: return "quto";
    case bnb::Variant::Tqp: return "tqp";
    case bnb::Variant::Linear: return "tqp-linear";
    case bnb::Variant::RatioDirect: return "tqp-ratio";
  }
  return "?";
}

// ---- generate ----

struct GenerateArgs {
  std::string kind;
  int n = 0;
  double p = 50.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  gen::GeneratorSpec spec;
  spec.kind = gen::gen_kind_from_name(a.kind);
  spec.n = a.n;
  spec.p = a.p;
  spec.seed = a.seed;
  ProblemInstance inst = gen::generate(spec);
  gen::write_instance(inst, a.out);
  std::printf("wrote %s  kind=%s n=%d generator=%s p=%g seed=%llu\n",
              a.out.c_str(), kind_name(inst.kind).c_str(), inst.n(),
              a.kind.c_str(), a.p, static_cast<unsigned long long>(a.seed));
  return 0;
}

// ---- solve ----

struct SolveArgs {
  std::string file;
  std::string method = "direct";
  std::string json_out;
  std::string node_log;
  SolveFlags flags;
};

json bnb_report(const SolveArgs& a, const ProblemInstance& inst,
                bnb::Variant var, const bnb::BnbConfig& cfg,
                const bnb::BnbResult& r) {
  json j;
  j["format_version"] = 1;
  j["instance"] = instance_json(a.file, inst);
  j["variant"] = variant_name(var);
  j["method"] = a.method;
  j["config"] = config_json(cfg);
  j["status"] = bnb::status_name(r.status);
  j["value"] = r.sol.feasible ? json(r.sol.value) : json(nullptr);
  j["solution"] = r.sol.feasible ? json(r.sol.x.raw()) : json(nullptr);
  j["bound"] = finite_or_null(r.bound);
  j["gap"] = finite_or_null(r.stats.final_gap);
  j["nodes"] = r.stats.nodes_explored;
  j["sdp_solves"] = r.stats.sdp_solves;
  j["root_relaxation"] = finite_or_null(r.stats.root_relax);
  j["root_bound"] = finite_or_null(r.stats.root_bound);
  j["cuts"] = cuts_json(r.stats.cuts_added);
  j["time_s"] = r.stats.wall_time;
  return j;
}

json dinkelbach_report(const SolveArgs& a, const ProblemInstance& inst,
                       const bnb::BnbConfig& cfg,
                       const bnb::DinkelbachResult& d) {
  bool ok = d.status == bnb::DinkelbachStatus::Optimal;
  json j;
  j["format_version"] = 1;
  j["instance"] = instance_json(a.file, inst);
  j["variant"] = "tqp-ratio";
  j["method"] = "dinkelbach";
  j["config"] = config_json(cfg);
  j["status"] = ok ? "optimal" : "inner-solver-failure";
  j["value"] = d.sol.feasible ? json(d.sol.value) : json(nullptr);
  j["solution"] = d.sol.feasible ? json(d.sol.x.raw()) : json(nullptr);
  j["bound"] = ok ? json(d.sol.value) : json(nullptr);
  j["gap"] = ok ? json(0.0) : json(nullptr);
  j["lambda_sequence"] = d.lambdas;
  j["iterations"] = d.iterations;
  j["nodes"] = d.stats.nodes_explored;
  j["sdp_solves"] = d.stats.sdp_solves;
  j["cuts"] = cuts_json(d.stats.cuts_added);
  j["time_s"] = d.stats.wall_time;
  return j;
}

void print_report(const json& j) {
  std::printf("%s: kind=%s n=%d", j["instance"]["path"].get<std::string>().c_str(),
              j["instance"]["kind"].get<std::string>().c_str(),
              j["instance"]["n"].get<int>());
  if (j["instance"].contains("meta")) {
    const json& m = j["instance"]["meta"];
    std::printf("  [%s p=%g seed=%llu]", m["generator"].get<std::string>().c_str(),
                m["p"].get<double>(),
                static_cast<unsigned long long>(m["seed"].get<std::uint64_t>()));
  }
  std::printf("\nvariant     %s (%s)\n", j["variant"].get<std::string>().c_str(),
              j["method"].get<std::string>().c_str());
  std::printf("status      %s\n", j["status"].get<std::string>().c_str());
  if (j["value"].is_null())
    std::printf("value       (no feasible point found)\n");
  else
    std::printf("value       %.12g\n", j["value"].get<double>());
  if (!j["bound"].is_null())
    std::printf("bound       %.12g\n", j["bound"].get<double>());
  if (!j["gap"].is_null())
    std::printf("gap         %.3g\n", j["gap"].get<double>());
  std::printf("nodes       %lld  (sdp solves %lld)\n",
              j["nodes"].get<long long>(), j["sdp_solves"].get<long long>());
  std::printf("time        %.3f s\n", j["time_s"].get<double>());
  std::string cl;
  for (cuts::Family f : kAllFamilies) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%s=%lld", cl.empty() ? "" : " ",
                  cuts::family_name(f),
                  j["cuts"][cuts::family_name(f)].get<long long>());
    cl += buf;
  }
  std::printf("cuts        %s\n", cl.c_str());
}

int cmd_solve(const SolveArgs& a) {
  ProblemInstance inst = gen::read_instance(a.file);
  bnb::BnbConfig cfg = to_config(a.flags);
  if (a.method == "dinkelbach") {
    if (inst.kind != ProblemKind::TqpRatio)
      throw UsageError("--method dinkelbach requires a tqp-ratio instance (" +
                       a.file + " is " + kind_name(inst.kind) + ")");
    if (!a.node_log.empty())
      throw UsageError("--node-log requires --method direct");
    bnb::DinkelbachResult d = bnb::dinkelbach(inst, cfg);
    json j = dinkelbach_report(a, inst, cfg, d);
    print_report(j);
    if (d.status == bnb::DinkelbachStatus::Optimal)
      std::printf("iterations  %d\n", d.iterations);
    if (!a.json_out.empty()) write_text(a.json_out, j.dump(2) + "\n");
    return d.status == bnb::DinkelbachStatus::Optimal ? 0 : 3;
  }
  bnb::Variant var = bnb::variant_for_kind(inst.kind);
  bnb::BnbResult r = bnb::solve(inst, var, cfg);
  json j = bnb_report(a, inst, var, cfg, r);
  print_report(j);
  if (r.sol.feasible) std::printf("x           %s\n", vector_line(r.sol.x).c_str());
  if (!a.json_out.empty()) write_text(a.json_out, j.dump(2) + "\n");
  if (!a.node_log.empty()) {
    std::string lines;
    for (const bnb::NodeRecord& rec : r.log) {
      json o = {{"id", rec.id},
                {"parent", rec.parent},
                {"depth", rec.depth},
                {"bound", finite_or_null(rec.bound)},
                {"cuts", cuts_json(rec.cuts_added)},
                {"incumbent", finite_or_null(rec.incumbent)},
                {"branch_var", rec.branch_var},
                {"action", rec.action}};
      lines += o.dump() + "\n";
    }
    write_text(a.node_log, lines);
  }
  return status_exit(r.status);
}

// ---- bound ----

struct BoundArgs {
  std::string file;
  std::string json_out;
  SolveFlags flags;
};

int cmd_bound(const BoundArgs& a) {
  ProblemInstance inst = gen::read_instance(a.file);
  bnb::Variant var = bnb::variant_for_kind(inst.kind);
  bnb::BnbConfig cfg = to_config(a.flags);
  relax::RelaxationHandle h = bnb::root_relaxation(inst, var, cfg);
  bnb::CutLoopResult loop = bnb::cutting_loop(h, cfg, 0);
  if (loop.infeasible) {
    std::printf("%s: root relaxation infeasible\n", a.file.c_str());
    if (!a.json_out.empty()) {
      json j = {{"format_version", 1},
                {"instance", instance_json(a.file, inst)},
                {"infeasible", true}};
      write_text(a.json_out, j.dump(2) + "\n");
    }
    return 0;
  }
  if (loop.round_bounds.empty())
    throw Error("root relaxation failed numerically");
  std::printf("%s: kind=%s n=%d\n", a.file.c_str(),
              kind_name(inst.kind).c_str(), inst.n());
  std::printf("relaxation bound  %.12g\n", loop.round_bounds.front());
  std::printf("post-cut bound    %.12g\n", loop.bound);
  std::printf("solves            %d\n", loop.solves);
  std::printf("cuts              %s\n", cuts_line(loop.cuts_added).c_str());
  if (!a.json_out.empty()) {
    json j = {{"format_version", 1},
              {"instance", instance_json(a.file, inst)},
              {"variant", variant_name(var)},
              {"config", config_json(cfg)},
              {"infeasible", false},
              {"relaxation_bound", loop.round_bounds.front()},
              {"bound", loop.bound},
              {"round_bounds", loop.round_bounds},
              {"solves", loop.solves},
              {"cuts", cuts_json(loop.cuts_added)}};
    write_text(a.json_out, j.dump(2) + "\n");
  }
  return 0;
}

// ---- oracle / heuristic ----

struct FileArgs {
  std::string file;
};

int cmd_oracle(const FileArgs& a) {
  ProblemInstance inst = gen::read_instance(a.file);
  if (inst.n() > 14)
    throw UsageError("oracle: n=" + std::to_string(inst.n()) +
                     " exceeds the exhaustive enumeration cap (14)");
  Solution s = gen::brute_force(inst);
  if (!s.feasible) {
    std::printf("%s: infeasible\n", a.file.c_str());
    return 0;
  }
  std::printf("value %.17g\n", s.value);
  std::printf("x %s\n", vector_line(s.x).c_str());
  return 0;
}

struct HeuristicArgs {
  std::string file;
  int restarts = 100;
  std::uint64_t seed = 0;
  int s_min = 2;
  int s_max = 0;
  int s_step = 2;
  int iter_max = 3;
};

int cmd_heuristic(const HeuristicArgs& a) {
  ProblemInstance inst = gen::read_instance(a.file);
  vns::Variant v;
  switch (inst.kind) {
    case ProblemKind::Quto: v = vns::Variant::Quto; break;
    case ProblemKind::TqpLinear: v = vns::Variant::Linear; break;
    case ProblemKind::TqpRatio: v = vns::Variant::Ratio; break;
    default:
      throw UsageError(
          "heuristic: general equality-constrained instances are not "
          "supported (kinds: quto, tqp-linear, tqp-ratio)");
  }
  vns::VnsParams params;
  params.restarts = a.restarts;
  params.seed = a.seed;
  params.s_min = a.s_min;
  params.s_max = a.s_max;
  params.s_step = a.s_step;
  params.iter_max = a.iter_max;
  Solution s = vns::vns(inst, v, params);
  std::printf("value %.17g\n", s.value);
  std::printf("x %s\n", vector_line(s.x).c_str());
  return 0;
}

// ---- bench ----

struct BenchArgs {
  std::vector<std::string> kinds = {"type1", "type2", "type3"};
  std::vector<int> ns = {6, 8, 10};
  std::vector<double> ps = {25.0, 50.0, 75.0};
  int seeds = 5;
  std::uint64_t seed0 = 1;
  std::string method = "direct";
  std::string out = "-";
  SolveFlags flags;
};

int cmd_bench(const BenchArgs& a) {
  std::vector<gen::GenKind> kinds;
  for (const std::string& k : a.kinds) kinds.push_back(gen::gen_kind_from_name(k));
  if (a.method == "dinkelbach")
    for (gen::GenKind k : kinds)
      if (k != gen::GenKind::Ratio)
        throw UsageError("--method dinkelbach requires ratio kinds only");
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (a.out != "-") {
    file.open(a.out);
    if (!file) throw IoError("cannot open " + a.out + " for writing");
    os = &file;
  }
  *os << "kind,n,p,seed,variant,method,status,value,bound,gap,nodes,"
         "sdp_solves,time_s,cuts_triangle,cuts_pair,cuts_rlt,cuts_split,"
         "cuts_kgonal5,cuts_kgonal7,cuts_kgonal9,root_relaxation,root_bound\n";
  for (gen::GenKind kind : kinds)
    for (int n : a.ns)
      for (double p : a.ps)
        for (int s = 0; s < a.seeds; ++s) {
          gen::GeneratorSpec spec{kind, n, p, a.seed0 + static_cast<std::uint64_t>(s)};
          ProblemInstance inst = gen::generate(spec);
          bnb::Variant var = bnb::variant_for_kind(inst.kind);
          bnb::BnbConfig cfg = to_config(a.flags);
          std::string status, method = a.method;
          double value = kInf, bound = -kInf, gap = kInf;
          double root_relax = kInf, root_bound = kInf, time_s = 0.0;
          std::int64_t nodes = 0, solves = 0;
          std::array<std::int64_t, bnb::kNumFamilies> cc{};
          bool feasible = false;
          if (inst.kind == ProblemKind::TqpRatio && a.method == "dinkelbach") {
            bnb::DinkelbachResult d = bnb::dinkelbach(inst, cfg);
            bool ok = d.status == bnb::DinkelbachStatus::Optimal;
            status = ok ? "optimal" : "inner-solver-failure";
            feasible = d.sol.feasible;
            value = d.sol.value;
            if (ok) bound = d.sol.value, gap = 0.0;
            nodes = d.stats.nodes_explored;
            solves = d.stats.sdp_solves;
            time_s = d.stats.wall_time;
            cc = d.stats.cuts_added;
            root_relax = d.stats.root_relax;
            root_bound = d.stats.root_bound;
          } else {
            bnb::BnbResult r = bnb::solve(inst, var, cfg);
            status = bnb::status_name(r.status);
            feasible = r.sol.feasible;
            value = r.sol.value;
            bound = r.bound;
            gap = r.stats.final_gap;
            nodes = r.stats.nodes_explored;
            solves = r.stats.sdp_solves;
            time_s = r.stats.wall_time;
            cc = r.stats.cuts_added;
            root_relax = r.stats.root_relax;
            root_bound = r.stats.root_bound;
          }
          *os << gen::gen_kind_name(kind) << ',' << n << ',' << p << ','
              << (a.seed0 + static_cast<std::uint64_t>(s)) << ','
              << variant_name(var) << ',' << method << ',' << status << ','
              << (feasible ? fmt_or_blank(value) : std::string()) << ','
              << fmt_or_blank(bound) << ',' << fmt_or_blank(gap) << ','
              << nodes << ',' << solves << ',' << fmt_or_blank(time_s);
          for (cuts::Family f : kAllFamilies)
            *os << ',' << cc[static_cast<std::size_t>(bnb::family_index(f))];
          *os << ',' << fmt_or_blank(root_relax) << ','
              << fmt_or_blank(root_bound) << '\n';
          if (!*os) throw IoError("write to " + a.out + " failed");
        }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact solver for quadratic programs over {0,+-1} variables"};
  app.require_subcommand(1);

  GenerateArgs ga;
  CLI::App* cg = app.add_subcommand("generate", "write a seeded random instance");
  cg->add_option("--kind", ga.kind, "instance family")
      ->required()
      ->check(CLI::IsMember({"type1", "type2", "type3", "quto-type1",
                             "quto-type2", "quto-type3", "ratio"}));
  cg->add_option("--n", ga.n, "dimension")->required()->check(CLI::PositiveNumber);
  cg->add_option("--p,--d", ga.p,
                 "percent parameter (eigenvalue share / sparsity / density)")
      ->check(CLI::Range(0.0, 100.0))
      ->capture_default_str();
  cg->add_option("--seed", ga.seed, "generator seed")->envname("TQP_SEED");
  cg->add_option("-o,--output", ga.out, "output path")->required();

  SolveArgs sa;
  CLI::App* cs = app.add_subcommand("solve", "solve an instance to optimality");
  cs->add_option("file", sa.file, "instance path")->required();
  cs->add_option("--method", sa.method, "direct|dinkelbach (ratio instances)")
      ->check(CLI::IsMember({"direct", "dinkelbach"}))
      ->capture_default_str();
  cs->add_option("--json-out", sa.json_out, "write the run report here");
  cs->add_option("--node-log", sa.node_log, "write one JSON line per node here");
  add_solver_flags(cs, sa.flags);

  BoundArgs ba;
  CLI::App* cb = app.add_subcommand("bound", "root relaxation and cut loop only");
  cb->add_option("file", ba.file, "instance path")->required();
  cb->add_option("--json-out", ba.json_out, "write the bound report here");
  add_solver_flags(cb, ba.flags);

  FileArgs oa;
  CLI::App* co = app.add_subcommand("oracle", "exhaustive optimum (n <= 14)");
  co->add_option("file", oa.file, "instance path")->required();

  HeuristicArgs ha;
  CLI::App* ch = app.add_subcommand("heuristic", "variable neighborhood search");
  ch->add_option("file", ha.file, "instance path")->required();
  ch->add_option("--restarts", ha.restarts, "multistart count")->capture_default_str();
  ch->add_option("--seed", ha.seed, "RNG seed")->envname("TQP_SEED");
  ch->add_option("--s-min", ha.s_min, "initial shake size")->capture_default_str();
  ch->add_option("--s-max", ha.s_max, "maximum shake size, 0 = n")->capture_default_str();
  ch->add_option("--s-step", ha.s_step, "shake size increment")->capture_default_str();
  ch->add_option("--iter-max", ha.iter_max, "outer sweeps")->capture_default_str();

  BenchArgs bba;
  CLI::App* cbe = app.add_subcommand("bench", "seeded sweep, CSV of run reports");
  cbe->add_option("--kinds", bba.kinds, "comma list of generator kinds")
      ->delimiter(',')
      ->capture_default_str();
  cbe->add_option("--n-list", bba.ns, "comma list of dimensions")
      ->delimiter(',')
      ->capture_default_str();
  cbe->add_option("--p-list", bba.ps, "comma list of percent parameters")
      ->delimiter(',')
      ->capture_default_str();
  cbe->add_option("--seeds", bba.seeds, "seeds per cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cbe->add_option("--seed0", bba.seed0, "first seed")->envname("TQP_SEED");
  cbe->add_option("--method", bba.method, "direct|dinkelbach")
      ->check(CLI::IsMember({"direct", "dinkelbach"}))
      ->capture_default_str();
  cbe->add_option("-o,--output", bba.out, "CSV path, - for stdout")
      ->capture_default_str();
  add_solver_flags(cbe, bba.flags);

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(cg)) return cmd_generate(ga);
    if (app.got_subcommand(cs)) return cmd_solve(sa);
    if (app.got_subcommand(cb)) return cmd_bound(ba);
    if (app.got_subcommand(co)) return cmd_oracle(oa);
    if (app.got_subcommand(ch)) return cmd_heuristic(ha);
    if (app.got_subcommand(cbe)) return cmd_bench(bba);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
