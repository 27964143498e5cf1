#pragma once

// Frobenius-cocycle descent: given a Serre-Tate-type invariant q in 1 + πR and
// the value c_γ of the twisting character on Frobenius, find w with
// w^{φ-1} = q^{(c_γ-1)/p}, form q_p = q / w^p, and decide splitting.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exsplit/unit_classes.hpp"

namespace exsplit {

/// Root of x^p - x = a with zero constant coordinate, or nullopt when
/// trace(a) != 0 (a degree-p extension of the residue field then suffices).
std::optional<ResidueElement> artin_schreier_solve(const ResidueElement& a);

/// w ∈ 1 + πR with φ(w)/w ≡ target (mod π^precision), built one digit at a
/// time; precision 0 means target.precision(). Throws ExtensionNeeded when a
/// digit equation has no root in the current residue field.
CycloElement solve_frobenius_equation(const CycloElement& target, unsigned precision = 0);

/// Solutions of u^{φ-1} = ζ and v^{φ-1} = 1 + π^p.
struct FrobeniusGenerators {
  CycloElement u;
  CycloElement v;
};
FrobeniusGenerators frobenius_generators(const ContextPtr& ctx, unsigned precision = 0);

struct CocycleCheck {
  bool holds = true;
  /// (i, j) with c(φ^i) φ^i(c(φ^j)) != c(φ^{i+j}).
  std::optional<std::pair<unsigned, unsigned>> failing;
};

/// Checks c(σ)·σ(c(τ)) = c(στ) for σ = φ^i, τ = φ^j, 1 <= i, j <= j_max,
/// where c(φ^j) = q^{(c_γ^j - 1)/p}, at precision π^{p+1}.
CocycleCheck verify_cocycle(const CycloElement& q, u64 c_gamma, unsigned j_max);

/// (c_γ - 1)/p as an exponent modulo p^{K-1}.
u64 descent_exponent(const ContextPtr& ctx, u64 c_gamma);

struct DescentProblem {
  CycloElement q;
  u64 c_gamma = 1;  // ≡ 1 mod p, reduced mod p^K
  unsigned n = 1;   // order of a_p; the descent target degree
};

struct DescentResult {
  CycloElement w;
  CycloElement q_p;  // in the degree-n context, precision p+1
  EigenNormalForm nf_q;
  EigenNormalForm nf_qp;
  u64 exponent = 0;  // (c_γ - 1)/p
  unsigned precision_used = 0;
  unsigned extension_degree_used = 0;
};

/// Builds w from the closed form (u^s v^t)^{(c_γ-1)/p}, checks it against a
/// direct digit-by-digit solve and against ζ^s(1+π^p)^{t+s(c_γ-1)/p}, and
/// descends q/w^p to degree n. Throws NotAdmissible, ExtensionNeeded,
/// PreconditionError or InternalCheckFailed.
DescentResult qp_from_q(const DescentProblem& problem);
/// Same, reusing generators solved earlier in the same context.
DescentResult qp_from_q(const DescentProblem& problem, const FrobeniusGenerators& gens);

enum class Verdict { split, not_split, inconclusive };
const char* to_string(Verdict v);

struct SplittingVerdict {
  Verdict verdict = Verdict::inconclusive;
  std::optional<u64> s;
  std::optional<u64> t;
  std::vector<std::string> failed_conditions;
  unsigned precision_used = 0;
  unsigned extension_degree_used = 0;
};

/// Values of the two pairings, supplied externally.
struct InvariantInputs {
  CycloElement inner_infty;  // the (,)_∞ value, known mod π^{precision}
  ResidueElement cup_I;      // the Igusa-curve cup product
};

/// Split iff v_π(inner_infty) >= p+1 and cup_I = 0.
SplittingVerdict splitting_verdict(const InvariantInputs& in);
/// Split iff the descended class q_p is trivial.
SplittingVerdict splitting_verdict(const DescentProblem& problem);

}  // namespace exsplit
