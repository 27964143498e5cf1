#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "exsplit/descent.hpp"
#include "exsplit/errors.hpp"
#include "random_elements.hpp"

using namespace exsplit;
using exsplit::testing::Rng;

namespace {

// Root of x^p - x = a by exhaustive search over the field.
std::optional<ResidueElement> as_root_by_search(const ResidueElement& a) {
  for (const auto& x : a.field()->elements())
    if (x.pow(a.field()->characteristic()) - x == a) return x;
  return std::nullopt;
}

u64 random_c_gamma(u64 p, u64 pK, Rng& rng) { return (1 + p * (rng() % (pK / p))) % pK; }

CycloElement one_plus_pi_p(const ContextPtr& ctx) {
  return CycloElement::one(ctx) + CycloElement::pi(ctx).pow(static_cast<i64>(ctx->p()));
}

}  // namespace

TEST_CASE("artin_schreier_solve examples") {
  auto F1 = FiniteField::make(3, 1);
  REQUIRE(artin_schreier_solve(F1->zero()).has_value());
  CHECK(artin_schreier_solve(F1->zero())->is_zero());
  CHECK_FALSE(artin_schreier_solve(F1->from_int(-1)).has_value());

  auto F3 = FiniteField::make(3, 3);
  auto x = artin_schreier_solve(F3->from_int(-1));
  REQUIRE(x.has_value());
  CHECK(x->pow(3) - *x == F3->from_int(-1));
  CHECK(as_root_by_search(F3->from_int(-1)).has_value());
}

TEST_CASE("artin_schreier_solve agrees with root search over F_27 and F_25") {
  for (auto [p, n] : {std::pair<u64, unsigned>{3, 3}, {5, 2}, {5, 1}}) {
    auto F = FiniteField::make(p, n);
    for (const auto& a : F->elements()) {
      auto x = artin_schreier_solve(a);
      auto oracle = as_root_by_search(a);
      CHECK(x.has_value() == oracle.has_value());
      CHECK(x.has_value() == (a.trace() == 0));
      if (x) {
        CHECK(x->pow(p) - *x == a);
        CHECK(x->coord(0) == 0);
      }
    }
  }
}

TEST_CASE("solve_frobenius_equation examples") {
  for (u64 p : {3, 5, 7}) {
    const unsigned cls = static_cast<unsigned>(p + 1);
    auto c1 = PrimeContext::make(p, 1);
    CHECK(solve_frobenius_equation(CycloElement::one(c1)) == CycloElement::one(c1));
    CHECK_THROWS_AS(solve_frobenius_equation(CycloElement::zeta(c1)), ExtensionNeeded);
    CHECK_THROWS_AS(solve_frobenius_equation(CycloElement::from_int(c1, 2)), PreconditionError);

    auto ctx = PrimeContext::make(p, static_cast<unsigned>(p));
    auto v = solve_frobenius_equation(one_plus_pi_p(ctx));
    CHECK((frobenius(v) / v) == one_plus_pi_p(ctx));
    CHECK(v.pow(static_cast<i64>(p)).congruent(CycloElement::one(ctx), cls));

    auto u = solve_frobenius_equation(CycloElement::zeta(ctx));
    CHECK((frobenius(u) / u) == CycloElement::zeta(ctx));
    CHECK((u.pow(static_cast<i64>(p)) * one_plus_pi_p(ctx)).congruent(CycloElement::one(ctx), cls));
  }
}

TEST_CASE("ExtensionNeeded names the position and the enlarged degree") {
  auto ctx = PrimeContext::make(5, 2);
  try {
    solve_frobenius_equation(CycloElement::zeta(ctx));
    FAIL("expected ExtensionNeeded");
  } catch (const ExtensionNeeded& e) {
    CHECK(e.position() == 1);
    CHECK(e.suggested_n_work() == 10);
  }
  try {
    solve_frobenius_equation(one_plus_pi_p(ctx));
    FAIL("expected ExtensionNeeded");
  } catch (const ExtensionNeeded& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("solver contract on random targets") {
  Rng rng(21);
  for (u64 p : {3, 5}) {
    auto ctx = PrimeContext::make(p, static_cast<unsigned>(p));
    for (int i = 0; i < 100; ++i) {
      auto z = testing::random_one_unit(ctx, rng);
      auto target = frobenius(z) / z * normal_form_element(ctx, rng() % p, rng() % p);
      auto w = solve_frobenius_equation(target);
      CHECK(w.is_one_unit());
      CHECK((frobenius(w) / w) == target);
    }
  }
}

TEST_CASE("frobenius_generators") {
  for (u64 p : {3, 5, 7}) {
    auto ctx = PrimeContext::make(p, static_cast<unsigned>(p));
    auto g = frobenius_generators(ctx, static_cast<unsigned>(p + 1));
    CHECK((frobenius(g.u) / g.u).congruent(CycloElement::zeta(ctx), static_cast<unsigned>(p + 1)));
    CHECK((frobenius(g.v) / g.v).congruent(one_plus_pi_p(ctx), static_cast<unsigned>(p + 1)));
  }
}

TEST_CASE("verify_cocycle holds on admissible inputs") {
  Rng rng(22);
  for (u64 p : {3, 5}) {
    auto ctx = PrimeContext::make(p, 1);
    CHECK(verify_cocycle(CycloElement::one(ctx), 1 + p, 4).holds);
    CHECK(verify_cocycle(CycloElement::zeta(ctx), 1 + p, 3).holds);
    for (int i = 0; i < 10; ++i) {
      auto q = normal_form_element(ctx, rng() % p, rng() % p);
      CHECK(verify_cocycle(q, random_c_gamma(p, ctx->coeff_modulus(), rng), 4).holds);
    }
  }
}

TEST_CASE("verify_cocycle fails on a non-eigen input") {
  auto ctx = PrimeContext::make(3, 2);
  auto y = CycloElement::from_witt(teichmuller(ctx, ctx->residue_field()->generator()));
  auto q = CycloElement::one(ctx) + y * CycloElement::pi(ctx);
  auto r = verify_cocycle(q, 4, 4);
  CHECK_FALSE(r.holds);
  REQUIRE(r.failing.has_value());
  CHECK(r.failing->first >= 1);
  CHECK(r.failing->second >= 1);
}

TEST_CASE("verify_cocycle preconditions") {
  auto ctx = PrimeContext::make(3, 1);
  CHECK_THROWS_AS(verify_cocycle(CycloElement::zeta(ctx), 4, 1), PreconditionError);
  CHECK_THROWS_AS(verify_cocycle(CycloElement::zeta(ctx), 5, 3), PreconditionError);
  CHECK_THROWS_AS(verify_cocycle(CycloElement::from_int(ctx, 2), 4, 3), PreconditionError);
}

TEST_CASE("qp_from_q with c_gamma = 1 is the identity") {
  for (u64 p : {3, 5}) {
    auto ctx = PrimeContext::make(p, 1);
    for (u64 s = 0; s < p; ++s)
      for (u64 t = 0; t < p; ++t) {
        auto q = normal_form_element(ctx, s, t);
        auto r = qp_from_q({q, 1, 1});
        CHECK(r.w == CycloElement::one(ctx));
        CHECK(r.q_p.congruent(transport(q, r.q_p.context()), static_cast<unsigned>(p + 1)));
        CHECK(r.nf_qp == EigenNormalForm{s, t});
      }
  }
}

TEST_CASE("qp_from_q with s = 0 keeps the class") {
  Rng rng(23);
  for (u64 p : {3, 5}) {
    auto ctx = PrimeContext::make(p, static_cast<unsigned>(p));
    for (u64 t = 0; t < p; ++t) {
      auto r = qp_from_q({normal_form_element(ctx, 0, t), random_c_gamma(p, ctx->coeff_modulus(), rng), 1});
      CHECK(r.nf_qp == EigenNormalForm{0, t});
      CHECK(r.w.pow(static_cast<i64>(p)).congruent(CycloElement::one(ctx), static_cast<unsigned>(p + 1)));
    }
  }
}

TEST_CASE("qp_from_q: p = 3, (1,0), c_gamma = 4 gives (1,1)") {
  auto ctx = PrimeContext::make(3, 3);
  auto r = qp_from_q({normal_form_element(ctx, 1, 0), 4, 1});
  CHECK(r.exponent == 1);
  CHECK(r.nf_q == EigenNormalForm{1, 0});
  CHECK(r.nf_qp == EigenNormalForm{1, 1});
  CHECK(r.q_p.context()->n_work() == 1);
  CHECK(r.precision_used == 4);
  CHECK(r.extension_degree_used == 3);
  CHECK(r.q_p == normal_form_element(r.q_p.context(), 1, 1));
}

TEST_CASE("qp_from_q matches the closed form for every class") {
  Rng rng(24);
  for (u64 p : {3, 5}) {
    auto ctx = PrimeContext::make(p, static_cast<unsigned>(p));
    auto gens = frobenius_generators(ctx, static_cast<unsigned>(p + 1));
    for (int k = 0; k < 3; ++k) {
      const u64 c = random_c_gamma(p, ctx->coeff_modulus(), rng);
      const u64 e = (c - 1) / p;
      for (u64 s = 0; s < p; ++s)
        for (u64 t = 0; t < p; ++t) {
          auto r = qp_from_q({normal_form_element(ctx, s, t), c, 1}, gens);
          CHECK(r.nf_qp == EigenNormalForm{s, (t + s * e) % p});
          CHECK(frobenius(r.w) / r.w == pow_padic_u(normal_form_element(ctx, s, t), e).truncated(r.precision_used));
        }
    }
  }
}

TEST_CASE("qp_from_q descends to a proper subfield") {
  auto ctx = PrimeContext::make(5, 10);
  auto r = qp_from_q({normal_form_element(ctx, 2, 1), 6, 2});
  CHECK(r.q_p.context()->n_work() == 2);
  CHECK(r.nf_qp == EigenNormalForm{2, 3});
}

TEST_CASE("qp_from_q errors") {
  auto c1 = PrimeContext::make(3, 1);
  CHECK_THROWS_AS(qp_from_q({normal_form_element(c1, 1, 0), 4, 1}), ExtensionNeeded);
  CHECK_THROWS_AS(qp_from_q({normal_form_element(c1, 0, 1), 4, 1}), ExtensionNeeded);
  auto c5 = PrimeContext::make(5, 1);
  try {
    qp_from_q({CycloElement::one(c5) + CycloElement::pi(c5).pow(2), 1, 1});
    FAIL("expected NotAdmissible");
  } catch (const NotAdmissible& e) {
    CHECK(e.position() == 2);
  }
  CHECK_THROWS_AS(qp_from_q({normal_form_element(c5, 1, 1), 1, 2}), PreconditionError);
  CHECK_THROWS_AS(qp_from_q({normal_form_element(c5, 1, 1), 3, 1}), PreconditionError);
}

TEST_CASE("splitting_verdict examples") {
  for (u64 p : {3, 5}) {
    auto ctx = PrimeContext::make(p, 1);
    const auto F = ctx->residue_field();
    auto v0 = splitting_verdict(InvariantInputs{CycloElement::zero(ctx), F->zero()});
    CHECK(v0.verdict == Verdict::split);
    CHECK(v0.failed_conditions.empty());
    auto v1 = splitting_verdict(InvariantInputs{CycloElement::zero(ctx), F->one()});
    CHECK(v1.verdict == Verdict::not_split);
    CHECK(v1.s == std::optional<u64>{1});
    auto v2 = splitting_verdict(InvariantInputs{CycloElement::pi(ctx).pow(static_cast<i64>(p)), F->zero()});
    CHECK(v2.verdict == Verdict::not_split);
    CHECK(v2.t == std::optional<u64>{1});
    CHECK(v2.failed_conditions.size() == 1);
    CHECK_THROWS_AS(splitting_verdict(InvariantInputs{CycloElement::zero(ctx).truncated(3), F->zero()}),
                    PreconditionError);
  }
  CHECK(std::string(to_string(Verdict::not_split)) == "not-split");
}

TEST_CASE("q-mode and invariant-mode verdicts agree for p = 3") {
  auto ctx = PrimeContext::make(3, 1);
  for (u64 s = 0; s < 3; ++s)
    for (u64 t = 0; t < 3; ++t) {
      auto q = normal_form_element(ctx, s, t);
      auto vq = splitting_verdict(DescentProblem{q, 1, 1});
      auto vi = splitting_verdict(InvariantInputs{log_one_unit(q), -dlog_mod_pi(q)});
      CHECK(vq.verdict == vi.verdict);
      CHECK(vq.verdict == ((s == 0 && t == 0) ? Verdict::split : Verdict::not_split));
      CHECK(vi.s == std::optional<u64>{s});
      if (s == 0) CHECK(vi.t == std::optional<u64>{t});
    }
}
