#pragma once

#include <cstdint>
#include <string>

#include "ternopt/rng.hpp"
#include "ternopt/types.hpp"

namespace ternopt::gen {

enum class GenKind { Type1, Type2, Type3, QutoType1, QutoType2, QutoType3, Ratio };

std::string gen_kind_name(GenKind k);
GenKind gen_kind_from_name(const std::string& s);

// n: dimension. p: percent parameter (negative-eigenvalue share for Type-1,
// nonzero probability for Type-2/3, density for Ratio). All draws come from a
// single splitmix64 stream in a pinned order, so (kind, n, p, seed) determines
// the instance bit-for-bit.
struct GeneratorSpec {
  GenKind kind = GenKind::Type1;
  int n = 0;
  double p = 50.0;
  std::uint64_t seed = 0;
};

// Type-1: Q = sum_i mu_i v_i v_i^T with floor(p*n/100) eigenvalues uniform
// [-1,0], the rest uniform [0,1], and an orthonormal basis obtained by
// modified Gram-Schmidt (with one re-orthogonalization pass) from a uniform
// [-1,1] matrix. Type-2: the first floor(n/2) eigenvalues are zero and each
// remaining one is uniform [0,1] with probability p/100, else zero. Type-3:
// each lower-triangle entry (diagonal included) is uniform [-1,1] with
// probability p/100, else zero, mirrored. c is always uniform [-1,1].
// Type-1/2/3 carry the balance constraint sum(x) = 0; the Quto variants drop
// it and replace diag(Q) by absolute values. Ratio: A, B sparse symmetric
// with integer entries in [-50,50] at density p, integer a, b, a0, and
// b0 = 1 + sum|B_ii| + 2*sum_{i<j}|B_ij| + sum|b_i| so that the denominator
// is >= 1 on every ternary point.
ProblemInstance generate(const GeneratorSpec& spec);

// Exact 3^n enumeration (depth-first with incremental objective updates).
// Feasibility uses |a^T x - b| <= 1e-9; ties in the objective keep the first
// minimizer in enumeration order (digits -1, 0, +1 per coordinate).
// Throws DimensionTooLarge for n > 14. Returns feasible=false when no
// ternary point satisfies the constraints.
Solution brute_force(const ProblemInstance& inst);

std::string to_json_string(const ProblemInstance& inst);
ProblemInstance parse_instance(const std::string& text);
void write_instance(const ProblemInstance& inst, const std::string& path);
ProblemInstance read_instance(const std::string& path);

}  // namespace ternopt::gen
