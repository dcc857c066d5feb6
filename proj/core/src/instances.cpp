#include "ternopt/instances.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ternopt::gen {

std::string gen_kind_name(GenKind k) {
  switch (k) {
    case GenKind::Type1: return "type1";
    case GenKind::Type2: return "type2";
    case GenKind::Type3: return "type3";
    case GenKind::QutoType1: return "quto-type1";
    case GenKind::QutoType2: return "quto-type2";
    case GenKind::QutoType3: return "quto-type3";
    case GenKind::Ratio: return "ratio";
  }
  return "?";
}

GenKind gen_kind_from_name(const std::string& s) {
  if (s == "type1") return GenKind::Type1;
  if (s == "type2") return GenKind::Type2;
  if (s == "type3") return GenKind::Type3;
  if (s == "quto-type1") return GenKind::QutoType1;
  if (s == "quto-type2") return GenKind::QutoType2;
  if (s == "quto-type3") return GenKind::QutoType3;
  if (s == "ratio") return GenKind::Ratio;
  throw ParseError("unknown generator kind \"" + s + "\"");
}

namespace {

// Random orthonormal basis: draw the raw matrix column by column (column-major
// draw order), then modified Gram-Schmidt with a second projection pass per
// column. A column whose residual norm falls below 1e-12 is redrawn from the
// same stream.
Eigen::MatrixXd random_orthonormal(int n, Rng& rng) {
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd v(n);
  for (int j = 0; j < n; ++j) {
    for (;;) {
      for (int i = 0; i < n; ++i) v[i] = rng.next_real(-1.0, 1.0);
      for (int pass = 0; pass < 2; ++pass)
        for (int q = 0; q < j; ++q) v -= V.col(q).dot(v) * V.col(q);
      const double norm = v.norm();
      if (norm >= 1e-12) {
        V.col(j) = v / norm;
        break;
      }
    }
  }
  return V;
}

Eigen::VectorXd random_linear(int n, Rng& rng) {
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c[i] = rng.next_real(-1.0, 1.0);
  return c;
}

Eigen::MatrixXd spectral_q(int n, const Eigen::VectorXd& mu, Rng& rng) {
  const Eigen::MatrixXd V = random_orthonormal(n, rng);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    Q += mu[i] * V.col(i) * V.col(i).transpose();
  return 0.5 * (Q + Q.transpose());
}

TqpInstance make_tqp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c,
                     bool balanced) {
  TqpInstance inst;
  inst.Q = SymMatrix(Q);
  inst.c = c;
  if (balanced) {
    LinearConstraint con;
    con.a = Eigen::VectorXd::Ones(Q.rows());
    con.b = 0.0;
    inst.constraints.push_back(con);
  }
  return inst;
}

}  // namespace

ProblemInstance generate(const GeneratorSpec& spec) {
  const int n = spec.n;
  if (n < 1) throw Error("generator: n must be >= 1");
  if (spec.p < 0.0 || spec.p > 100.0)
    throw Error("generator: p must lie in [0,100]");
  Rng rng(spec.seed);

  ProblemInstance out;
  out.meta.generator = gen_kind_name(spec.kind);
  out.meta.param = spec.p;
  out.meta.seed = spec.seed;
  out.meta.present = true;

  const bool quto = spec.kind == GenKind::QutoType1 ||
                    spec.kind == GenKind::QutoType2 ||
                    spec.kind == GenKind::QutoType3;
  out.kind = quto ? ProblemKind::Quto
                  : (spec.kind == GenKind::Ratio ? ProblemKind::TqpRatio
                                                 : ProblemKind::TqpLinear);

  switch (spec.kind) {
    case GenKind::Type1:
    case GenKind::QutoType1: {
      const int neg = static_cast<int>(spec.p * n / 100.0);
      Eigen::VectorXd mu(n);
      for (int i = 0; i < neg; ++i) mu[i] = rng.next_real(-1.0, 0.0);
      for (int i = neg; i < n; ++i) mu[i] = rng.next_real(0.0, 1.0);
      Eigen::MatrixXd Q = spectral_q(n, mu, rng);
      if (quto) Q.diagonal() = Q.diagonal().cwiseAbs();
      out.tqp = make_tqp(Q, random_linear(n, rng), !quto);
      break;
    }
    case GenKind::Type2:
    case GenKind::QutoType2: {
      Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
      for (int i = n / 2; i < n; ++i) {
        if (rng.next_real01() < spec.p / 100.0) mu[i] = rng.next_real01();
      }
      Eigen::MatrixXd Q = spectral_q(n, mu, rng);
      if (quto) Q.diagonal() = Q.diagonal().cwiseAbs();
      out.tqp = make_tqp(Q, random_linear(n, rng), !quto);
      break;
    }
    case GenKind::Type3:
    case GenKind::QutoType3: {
      Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
          if (rng.next_real01() < spec.p / 100.0) {
            const double v = rng.next_real(-1.0, 1.0);
            Q(i, j) = v;
            Q(j, i) = v;
          }
        }
      }
      if (quto) Q.diagonal() = Q.diagonal().cwiseAbs();
      out.tqp = make_tqp(Q, random_linear(n, rng), !quto);
      break;
    }
    case GenKind::Ratio: {
      auto sparse_sym = [&](Eigen::MatrixXd& M) {
        M.setZero(n, n);
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j <= i; ++j) {
            if (rng.next_real01() < spec.p / 100.0) {
              const double v = static_cast<double>(rng.next_int(-50, 50));
              M(i, j) = v;
              M(j, i) = v;
            }
          }
        }
      };
      auto int_vec = [&](Eigen::VectorXd& v) {
        v.resize(n);
        for (int i = 0; i < n; ++i)
          v[i] = static_cast<double>(rng.next_int(-50, 50));
      };
      RatioInstance r;
      Eigen::MatrixXd A, B;
      sparse_sym(A);
      int_vec(r.a);
      r.a0 = static_cast<double>(rng.next_int(-50, 50));
      sparse_sym(B);
      int_vec(r.b);
      double b0 = 1.0;
      for (int i = 0; i < n; ++i) b0 += std::abs(B(i, i));
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) b0 += 2.0 * std::abs(B(i, j));
      for (int i = 0; i < n; ++i) b0 += std::abs(r.b[i]);
      r.b0 = b0;
      r.A = SymMatrix(A);
      r.B = SymMatrix(B);
      out.ratio = r;
      break;
    }
  }
  return out;
}

Solution brute_force(const ProblemInstance& inst) {
  const int n = inst.n();
  if (n > 14)
    throw DimensionTooLarge("brute_force: n = " + std::to_string(n) +
                            " exceeds the 3^n enumeration cap of 14");
  const bool ratio = inst.kind == ProblemKind::TqpRatio;
  const SymMatrix& Q = ratio ? inst.ratio.A : inst.tqp.Q;
  const SymMatrix& B = ratio ? inst.ratio.B : inst.tqp.Q;  // B unused if !ratio
  const Eigen::VectorXd lin_f = ratio ? inst.ratio.a : inst.tqp.c;

  std::vector<int> x(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd alpha_f = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd alpha_g = Eigen::VectorXd::Zero(n);
  double f = ratio ? inst.ratio.a0 : 0.0;
  double g = ratio ? inst.ratio.b0 : 0.0;
  const int m = ratio ? 0 : static_cast<int>(inst.tqp.constraints.size());
  Eigen::VectorXd conval = Eigen::VectorXd::Zero(std::max(m, 1));

  bool found = false;
  double best = 0.0;
  std::vector<int> best_x;

  std::function<void(int)> rec = [&](int depth) {
    if (depth == n) {
      if (!ratio) {
        for (int k = 0; k < m; ++k)
          if (std::abs(conval[k] - inst.tqp.constraints[static_cast<std::size_t>(k)].b) >
              1e-9)
            return;
      }
      double val;
      if (ratio) {
        if (g <= 0.0)
          throw NonPositiveDenominator("brute_force: denominator <= 0");
        val = f / g;
      } else {
        val = f;
      }
      if (!found || val < best) {
        found = true;
        best = val;
        best_x = x;
      }
      return;
    }
    for (int v = -1; v <= 1; ++v) {
      if (v == 0) {
        x[static_cast<std::size_t>(depth)] = 0;
        rec(depth + 1);
        continue;
      }
      x[static_cast<std::size_t>(depth)] = v;
      const double df =
          2.0 * v * alpha_f[depth] + Q(depth, depth) + v * lin_f[depth];
      f += df;
      alpha_f += v * Q.mat().col(depth);
      double dg = 0.0;
      if (ratio) {
        dg = 2.0 * v * alpha_g[depth] + B(depth, depth) + v * inst.ratio.b[depth];
        g += dg;
        alpha_g += v * B.mat().col(depth);
      } else {
        for (int k = 0; k < m; ++k)
          conval[k] += v * inst.tqp.constraints[static_cast<std::size_t>(k)].a[depth];
      }
      rec(depth + 1);
      alpha_f -= v * Q.mat().col(depth);
      f -= df;
      if (ratio) {
        alpha_g -= v * B.mat().col(depth);
        g -= dg;
      } else {
        for (int k = 0; k < m; ++k)
          conval[k] -= v * inst.tqp.constraints[static_cast<std::size_t>(k)].a[depth];
      }
      x[static_cast<std::size_t>(depth)] = 0;
    }
  };
  rec(0);

  Solution sol;
  if (!found) {
    sol.feasible = false;
    return sol;
  }
  sol.x = TernaryVector(best_x);
  sol.feasible = true;
  // Recompute from scratch so the reported value carries no incremental drift.
  sol.value = ratio ? evaluate_ratio(inst.ratio, sol.x)
                    : evaluate_objective(inst.tqp, sol.x);
  return sol;
}

// ---------------------------------------------------------------------------
// JSON serialization. The emitter is hand-rolled so that doubles are printed
// with %.17g (bit-faithful roundtrip) and the byte layout is stable enough to
// diff golden files.

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_vector(std::ostringstream& os, const Eigen::VectorXd& v) {
  os << "[";
  for (int i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << fmt_double(v[i]);
  }
  os << "]";
}

// Matrices with a sparse upper triangle go out as 0-based COO triples
// [i, j, value] with i <= j; dense ones as a row-major flat array.
void emit_matrix(std::ostringstream& os, const std::string& indent,
                 const SymMatrix& M) {
  const int n = M.n();
  int nnz = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (M(i, j) != 0.0) ++nnz;
  const bool coo = nnz * 4 < n * (n + 1) / 2;
  os << "{\n" << indent << "  ";
  if (coo) {
    os << "\"coo\": [";
    bool first = true;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        if (M(i, j) == 0.0) continue;
        if (!first) os << ", ";
        first = false;
        os << "[" << i << ", " << j << ", " << fmt_double(M(i, j)) << "]";
      }
    }
    os << "]";
  } else {
    os << "\"dense\": [";
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i || j) os << ", ";
        os << fmt_double(M(i, j));
      }
    os << "]";
  }
  os << "\n" << indent << "}";
}

void emit_meta(std::ostringstream& os, const ProblemInstance& inst) {
  const bool ratio = inst.kind == ProblemKind::TqpRatio;
  os << "\"meta\": {\n";
  os << "    \"generator\": \"" << inst.meta.generator << "\",\n";
  os << "    \"" << (ratio ? "d" : "p") << "\": " << fmt_double(inst.meta.param)
     << ",\n";
  os << "    \"seed\": " << inst.meta.seed << "\n";
  os << "  }";
}

SymMatrix parse_matrix(const nlohmann::json& j, int n, const std::string& key) {
  if (!j.is_object())
    throw ParseError("field \"" + key + "\" must be an object");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  if (j.contains("dense")) {
    const auto& arr = j.at("dense");
    if (!arr.is_array() || static_cast<int>(arr.size()) != n * n)
      throw ParseError("\"" + key + ".dense\" must hold n*n numbers");
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c)
        M(i, c) = arr[static_cast<std::size_t>(i * n + c)].get<double>();
  } else if (j.contains("coo")) {
    for (const auto& t : j.at("coo")) {
      if (!t.is_array() || t.size() != 3)
        throw ParseError("\"" + key + ".coo\" entries must be [i, j, value]");
      const int i = t[0].get<int>(), c = t[1].get<int>();
      if (i < 0 || c < 0 || i >= n || c >= n || i > c)
        throw ParseError("\"" + key +
                         ".coo\" index out of the 0-based upper triangle");
      const double v = t[2].get<double>();
      M(i, c) = v;
      M(c, i) = v;
    }
  } else {
    throw ParseError("field \"" + key + "\" needs a \"dense\" or \"coo\" key");
  }
  return SymMatrix(M);
}

Eigen::VectorXd parse_vector(const nlohmann::json& j, int n,
                             const std::string& key) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ParseError("field \"" + key + "\" must hold n numbers");
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

std::string to_json_string(const ProblemInstance& inst) {
  std::ostringstream os;
  const int n = inst.n();
  os << "{\n";
  os << "  \"format_version\": 1,\n";
  os << "  \"kind\": \"" << kind_name(inst.kind) << "\",\n";
  os << "  \"n\": " << n << ",\n";
  if (inst.kind == ProblemKind::TqpRatio) {
    os << "  \"A\": ";
    emit_matrix(os, "  ", inst.ratio.A);
    os << ",\n  \"a\": ";
    emit_vector(os, inst.ratio.a);
    os << ",\n  \"a0\": " << fmt_double(inst.ratio.a0) << ",\n";
    os << "  \"B\": ";
    emit_matrix(os, "  ", inst.ratio.B);
    os << ",\n  \"b\": ";
    emit_vector(os, inst.ratio.b);
    os << ",\n  \"b0\": " << fmt_double(inst.ratio.b0);
  } else {
    os << "  \"Q\": ";
    emit_matrix(os, "  ", inst.tqp.Q);
    os << ",\n  \"c\": ";
    emit_vector(os, inst.tqp.c);
    os << ",\n  \"constraints\": [";
    for (std::size_t k = 0; k < inst.tqp.constraints.size(); ++k) {
      if (k) os << ", ";
      os << "{\"a\": ";
      emit_vector(os, inst.tqp.constraints[k].a);
      os << ", \"b\": " << fmt_double(inst.tqp.constraints[k].b) << "}";
    }
    os << "]";
  }
  if (inst.meta.present) {
    os << ",\n  ";
    emit_meta(os, inst);
  }
  os << "\n}\n";
  return os.str();
}

ProblemInstance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw ParseError("top level must be an object");
    if (!j.contains("format_version") || j.at("format_version").get<int>() != 1)
      throw ParseError("missing or unsupported \"format_version\" (need 1)");
    if (!j.contains("kind")) throw ParseError("missing field \"kind\"");
    ProblemInstance inst;
    inst.kind = kind_from_name(j.at("kind").get<std::string>());
    if (!j.contains("n")) throw ParseError("missing field \"n\"");
    const int n = j.at("n").get<int>();
    if (n < 1) throw ParseError("\"n\" must be >= 1");

    if (inst.kind == ProblemKind::TqpRatio) {
      for (const char* key : {"A", "a", "a0", "B", "b", "b0"})
        if (!j.contains(key))
          throw ParseError(std::string("missing field \"") + key + "\"");
      inst.ratio.A = parse_matrix(j.at("A"), n, "A");
      inst.ratio.a = parse_vector(j.at("a"), n, "a");
      inst.ratio.a0 = j.at("a0").get<double>();
      inst.ratio.B = parse_matrix(j.at("B"), n, "B");
      inst.ratio.b = parse_vector(j.at("b"), n, "b");
      inst.ratio.b0 = j.at("b0").get<double>();
    } else {
      if (!j.contains("Q")) throw ParseError("missing field \"Q\"");
      if (!j.contains("c")) throw ParseError("missing field \"c\"");
      inst.tqp.Q = parse_matrix(j.at("Q"), n, "Q");
      inst.tqp.c = parse_vector(j.at("c"), n, "c");
      if (j.contains("constraints")) {
        for (const auto& cj : j.at("constraints")) {
          LinearConstraint con;
          con.a = parse_vector(cj.at("a"), n, "constraints[].a");
          con.b = cj.at("b").get<double>();
          inst.tqp.constraints.push_back(con);
        }
      }
    }
    if (j.contains("meta")) {
      const auto& mj = j.at("meta");
      inst.meta.present = true;
      if (mj.contains("generator"))
        inst.meta.generator = mj.at("generator").get<std::string>();
      if (mj.contains("p")) inst.meta.param = mj.at("p").get<double>();
      if (mj.contains("d")) inst.meta.param = mj.at("d").get<double>();
      if (mj.contains("seed"))
        inst.meta.seed = mj.at("seed").get<std::uint64_t>();
    }
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  }
}

void write_instance(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << to_json_string(inst);
  if (!out) throw IoError("failed writing \"" + path + "\"");
}

ProblemInstance read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open \"" + path + "\" for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

}  // namespace ternopt::gen
