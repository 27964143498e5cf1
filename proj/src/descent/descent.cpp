#include "exsplit/descent.hpp"

#include <stdexcept>

#include "exsplit/errors.hpp"
#include "exsplit/fp_linalg.hpp"

namespace exsplit {

std::optional<ResidueElement> artin_schreier_solve(const ResidueElement& a) {
  const auto& F = a.field();
  const unsigned N = F->degree();
  const u64 p = F->characteristic();
  // x -> x^p - x is F_p-linear; column i is the image of y^i.
  fp_linalg::Matrix A(N, N);
  for (unsigned i = 0; i < N; ++i) {
    std::vector<u64> e(N, 0);
    e[i] = 1;
    const ResidueElement b = F->from_coords(e);
    const ResidueElement img = b.frobenius() - b;
    for (unsigned j = 0; j < N; ++j) A.at(j, i) = img.coord(j);
  }
  std::vector<u64> rhs(N);
  for (unsigned j = 0; j < N; ++j) rhs[j] = a.coord(j);
  auto sol = fp_linalg::solve(std::move(A), std::move(rhs), p);
  if (!sol) return std::nullopt;
  ResidueElement x = F->from_coords(*sol);
  return x - F->from_int(static_cast<i64>(x.coord(0)));
}

CycloElement solve_frobenius_equation(const CycloElement& target, unsigned precision) {
  const auto& ctx = target.context();
  if (!target.is_one_unit()) throw PreconditionError("solve_frobenius_equation: target is not a 1-unit");
  const unsigned prec = precision == 0 ? target.precision() : std::min(precision, target.precision());
  const CycloElement t = target.truncated(prec);
  CycloElement w = CycloElement::one(ctx).truncated(prec);
  CycloElement pim = CycloElement::pi(ctx);
  for (unsigned m = 1; m < prec; ++m) {
    const CycloElement residual = t * w / frobenius(w);
    const ResidueElement a = digit(residual, m);
    auto c = artin_schreier_solve(a);
    if (!c) {
      throw ExtensionNeeded(m, static_cast<std::size_t>(ctx->n_work() * ctx->p()),
                            "Artin-Schreier digit equation at position " + std::to_string(m) +
                                " has no root over F_{p^" + std::to_string(ctx->n_work()) +
                                "}; rerun with n_work = " + std::to_string(ctx->n_work() * ctx->p()));
    }
    if (!c->is_zero()) w = w * (CycloElement::one(ctx) + CycloElement::from_witt(teichmuller(ctx, *c)) * pim);
    pim = pim.times_pi();
  }
  return w;
}

FrobeniusGenerators frobenius_generators(const ContextPtr& ctx, unsigned precision) {
  const unsigned prec = precision == 0 ? ctx->precision() : precision;
  const CycloElement zeta = CycloElement::zeta(ctx).truncated(prec);
  const CycloElement one_pi_p = normal_form_element(ctx, 0, 1).truncated(prec);
  return FrobeniusGenerators{solve_frobenius_equation(zeta), solve_frobenius_equation(one_pi_p)};
}

u64 descent_exponent(const ContextPtr& ctx, u64 c_gamma) {
  const u64 p = ctx->p(), pK = ctx->coeff_modulus();
  c_gamma %= pK;
  if (c_gamma % p != 1) throw PreconditionError("c_gamma must be congruent to 1 mod p");
  return (c_gamma - 1) / p;
}

CocycleCheck verify_cocycle(const CycloElement& q, u64 c_gamma, unsigned j_max) {
  const auto& ctx = q.context();
  const u64 p = ctx->p(), pK = ctx->coeff_modulus();
  if (j_max < 2) throw PreconditionError("verify_cocycle: j_max must be >= 2");
  if (!q.is_one_unit()) throw PreconditionError("verify_cocycle: q is not a 1-unit");
  descent_exponent(ctx, c_gamma);
  const unsigned prec = static_cast<unsigned>(p + 1);
  const CycloElement qt = q.truncated(prec);
  std::vector<CycloElement> coc(2 * j_max + 1);
  for (unsigned j = 1; j <= 2 * j_max; ++j) {
    const u64 cj = pow_mod(c_gamma % pK, j, pK);
    coc[j] = pow_padic_u(qt, (cj + pK - 1) % pK / p);
  }
  CocycleCheck out;
  for (unsigned i = 1; i <= j_max; ++i) {
    for (unsigned j = 1; j <= j_max; ++j) {
      const CycloElement lhs = coc[i] * frobenius_pow(coc[j], i);
      if (!lhs.congruent(coc[i + j], prec)) {
        out.holds = false;
        out.failing = std::make_pair(i, j);
        return out;
      }
    }
  }
  return out;
}

namespace {

NormalFormResult require_admissible(const CycloElement& q) {
  auto nfr = extract_normal_form(q);
  if (!nfr.admissible) {
    const std::size_t pos = nfr.failing_position.value_or(0);
    throw NotAdmissible(pos, "q is not admissible: digit " + std::to_string(pos) +
                                 " rules out the form ζ^s(1+π^p)^t");
  }
  return nfr;
}

DescentResult descend(const DescentProblem& problem, const FrobeniusGenerators* gens) {
  const CycloElement& q = problem.q;
  const auto& ctx = q.context();
  const u64 p = ctx->p();
  const unsigned prec = static_cast<unsigned>(p + 1);
  if (q.precision() < prec) throw PreconditionError("q must be known to precision >= p+1");
  if (problem.n == 0 || ctx->n_work() % problem.n != 0)
    throw PreconditionError("descent degree n must divide n_work");

  DescentResult out;
  out.nf_q = require_admissible(q).nf;
  out.exponent = descent_exponent(ctx, problem.c_gamma);
  out.precision_used = prec;
  out.extension_degree_used = ctx->n_work();
  const auto [s, t] = out.nf_q;
  const CycloElement qt = q.truncated(prec);

  // Closed form w = (u^s v^t)^{(c_γ-1)/p}.
  CycloElement w = CycloElement::one(ctx).truncated(prec);
  if (out.exponent != 0 && (s != 0 || t != 0)) {
    const CycloElement zeta = CycloElement::zeta(ctx).truncated(prec);
    const CycloElement one_pi_p = normal_form_element(ctx, 0, 1).truncated(prec);
    CycloElement base = CycloElement::one(ctx).truncated(prec);
    if (s != 0) {
      const CycloElement u = gens ? gens->u.truncated(prec) : solve_frobenius_equation(zeta);
      base = base * u.pow(static_cast<i64>(s));
    }
    if (t != 0) {
      const CycloElement v = gens ? gens->v.truncated(prec) : solve_frobenius_equation(one_pi_p);
      base = base * v.pow(static_cast<i64>(t));
    }
    w = pow_padic_u(base, out.exponent);
  }
  out.w = w;
  const CycloElement qp_full = qt / w.pow(static_cast<i64>(p));

  if (!frobenius(qp_full).congruent(qp_full, prec))
    throw InternalCheckFailed("q/w^p is not fixed by Frobenius at precision p+1");

  const CycloElement closed = normal_form_element(ctx, s, (t + s * (out.exponent % p)) % p);
  if (!closed.congruent(qp_full, prec))
    throw InternalCheckFailed("q/w^p disagrees with ζ^s(1+π^p)^{t+s(c-1)/p}");

  // Direct route: solve w'^{φ-1} = q^{(c_γ-1)/p} digit by digit. w and w'
  // differ by a φ-fixed 1-unit, whose p-th power is 1 mod π^{p+1}.
  const CycloElement w_direct = solve_frobenius_equation(pow_padic_u(qt, out.exponent), prec);
  if (!(frobenius(w_direct) / w_direct).congruent(pow_padic_u(qt, out.exponent), prec))
    throw InternalCheckFailed("direct Frobenius solve does not satisfy its equation");
  if (!(qt / w_direct.pow(static_cast<i64>(p))).congruent(qp_full, prec))
    throw InternalCheckFailed("direct and closed-form routes give different q_p");

  out.q_p = descend_subfield(qp_full, problem.n);
  out.nf_qp = require_admissible(out.q_p).nf;
  return out;
}

}  // namespace

DescentResult qp_from_q(const DescentProblem& problem) { return descend(problem, nullptr); }

DescentResult qp_from_q(const DescentProblem& problem, const FrobeniusGenerators& gens) {
  return descend(problem, &gens);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::split:
      return "split";
    case Verdict::not_split:
      return "not-split";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

SplittingVerdict splitting_verdict(const InvariantInputs& in) {
  const auto& ctx = in.inner_infty.context();
  const u64 p = ctx->p();
  const unsigned prec = static_cast<unsigned>(p + 1);
  if (in.inner_infty.precision() < prec)
    throw PreconditionError("inner_infty must be known to precision >= p+1");
  SplittingVerdict out;
  out.precision_used = prec;
  out.extension_degree_used = ctx->n_work();

  const unsigned v = in.inner_infty.truncated(prec).valuation();
  const bool log_trivial = v >= prec;
  const bool cup_trivial = in.cup_I.is_zero();
  if (in.cup_I.in_prime_field()) out.s = in.cup_I.prime_value();
  if (log_trivial) {
    out.t = 0;
  } else if (v == p) {
    const ResidueElement d = digit(in.inner_infty, p);
    if (d.in_prime_field()) out.t = d.prime_value();
  }
  if (!cup_trivial) out.failed_conditions.push_back("d log q is nonzero mod π dπ (cup_I != 0)");
  if (!log_trivial)
    out.failed_conditions.push_back("log q is nonzero mod π^" + std::to_string(prec) +
                                    " (inner_infty has valuation " + std::to_string(v) + ")");
  out.verdict = (log_trivial && cup_trivial) ? Verdict::split : Verdict::not_split;
  return out;
}

SplittingVerdict splitting_verdict(const DescentProblem& problem) {
  const DescentResult r = qp_from_q(problem);
  SplittingVerdict out;
  out.s = r.nf_qp.s;
  out.t = r.nf_qp.t;
  out.precision_used = r.precision_used;
  out.extension_degree_used = r.extension_degree_used;
  if (r.nf_qp.s != 0) out.failed_conditions.push_back("s != 0");
  if (r.nf_qp.t != 0) out.failed_conditions.push_back("t != 0");
  out.verdict = is_pth_power_class(r.nf_qp) ? Verdict::split : Verdict::not_split;
  return out;
}

}  // namespace exsplit
