#include "exsplit/unit_classes.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "exsplit/errors.hpp"

namespace exsplit {

namespace {

unsigned class_precision(const ContextPtr& ctx) { return static_cast<unsigned>(ctx->p() + 1); }

}  // namespace

UnitClass UnitClass::of(const CycloElement& q) {
  const auto& ctx = q.context();
  const unsigned prec = class_precision(ctx);
  if (q.precision() < prec) throw PreconditionError("unit class needs precision >= p+1");
  auto d = digit_expansion(q.truncated(prec)).digits;
  if (!d[0].is_one()) throw PreconditionError("unit class of a non-1-unit");
  return UnitClass{ctx, std::vector<ResidueElement>(d.begin() + 1, d.end())};
}

CycloElement UnitClass::element() const {
  std::vector<ResidueElement> d;
  d.push_back(ctx->residue_field()->one());
  d.insert(d.end(), digits.begin(), digits.end());
  return CycloElement::from_digits(ctx, d);
}

bool UnitClass::operator<(const UnitClass& o) const {
  return std::lexicographical_compare(digits.begin(), digits.end(), o.digits.begin(), o.digits.end());
}

CycloElement normal_form_element(const ContextPtr& ctx, u64 s, u64 t) {
  const u64 p = ctx->p();
  const CycloElement base = CycloElement::one(ctx) + CycloElement::pi(ctx).pow(static_cast<i64>(p));
  return CycloElement::zeta(ctx).pow(static_cast<i64>(s % p)) * base.pow(static_cast<i64>(t % p));
}

NormalFormResult extract_normal_form(const CycloElement& q) {
  const auto& ctx = q.context();
  const u64 p = ctx->p();
  const unsigned prec = class_precision(ctx);
  if (q.precision() < prec) throw PreconditionError("normal form needs precision >= p+1");
  if (!q.is_unit()) throw PreconditionError("normal form of a non-unit");
  if (!q.is_one_unit()) throw PreconditionError("normal form needs a 1-unit (digit 0 must be 1)");

  NormalFormResult out;
  const ResidueElement d1 = digit(q, 1);
  if (!d1.in_prime_field()) {
    out.failing_position = 1;
    return out;
  }
  const u64 s = (p - d1.prime_value()) % p;
  const CycloElement r = (q * CycloElement::zeta(ctx).pow(static_cast<i64>((p - s) % p))).truncated(prec);
  const auto digits = digit_expansion(r).digits;
  for (std::size_t i = 1; i < p; ++i) {
    if (!digits[i].is_zero()) {
      out.failing_position = i;
      return out;
    }
  }
  if (!digits[p].in_prime_field()) {
    out.failing_position = p;
    return out;
  }
  out.nf = {s, digits[p].prime_value()};
  out.admissible = true;
  return out;
}

bool is_pth_power_mod(const CycloElement& x) {
  const auto& ctx = x.context();
  const u64 p = ctx->p();
  const auto digits = digit_expansion(x.truncated(class_precision(ctx))).digits;
  if (!digits[0].is_one()) throw PreconditionError("is_pth_power_mod: not a 1-unit");
  for (std::size_t i = 1; i < p; ++i)
    if (!digits[i].is_zero()) return false;
  return digits[p].trace() == 0;
}

bool verify_galois_eigen(const CycloElement& q, u64 c_gamma) {
  const auto& ctx = q.context();
  const u64 p = ctx->p();
  const unsigned prec = class_precision(ctx);
  if (c_gamma % p != 1) throw PreconditionError("c_gamma must be congruent to 1 mod p");
  if (!q.is_one_unit()) throw PreconditionError("verify_galois_eigen: q is not a 1-unit");
  const CycloElement qt = q.truncated(prec);
  for (u64 u = 1; u < p; ++u) {
    CycloElement ratio = sigma(qt, u) / pow_padic_u(qt, u);
    if (!ratio.is_one_unit()) {
      const ResidueElement d0 = digit(ratio, 0);
      ratio = ratio / CycloElement::from_witt(teichmuller(ctx, d0));
    }
    if (!is_pth_power_mod(ratio)) return false;
  }
  return frobenius(qt).congruent(pow_padic_u(qt, c_gamma), prec);
}

bool is_pth_power_class(const EigenNormalForm& nf) { return nf.s == 0 && nf.t == 0; }

std::vector<UnitClass> brute_force_eigenclasses(const ContextPtr& ctx, u64 c_gamma) {
  const u64 p = ctx->p();
  const u64 q = ctx->residue_field()->order();
  u64 total = 1;
  for (u64 i = 0; i < p; ++i) {
    if (total > 10'000'000 / q) throw PreconditionError("eigenclass enumeration exceeds 10^7 classes");
    total *= q;
  }
  const auto elems = ctx->residue_field()->elements();
  std::vector<UnitClass> out;
  std::vector<u64> idx(p, 0);
  for (u64 count = 0; count < total; ++count) {
    // idx[0] is the most significant position so the output is sorted.
    UnitClass cls{ctx, {}};
    for (u64 i = 0; i < p; ++i) cls.digits.push_back(elems[idx[i]]);
    if (verify_galois_eigen(cls.element(), c_gamma)) out.push_back(std::move(cls));
    for (std::size_t i = p; i-- > 0;) {
      if (++idx[i] < q) break;
      idx[i] = 0;
    }
  }
  return out;
}

u64 mult_order(u64 a, u64 p) {
  a %= p;
  if (a == 0) throw PreconditionError("mult_order: a is divisible by p");
  u64 x = a, n = 1;
  while (x != 1) {
    x = (x * a) % p;
    ++n;
  }
  return n;
}

u64 teichmuller_int(u64 u, u64 p, u64 modulus) {
  u %= p;
  if (u == 0) return 0;
  // ω(u) = lim u^{p^k}; exponent bits of modulus suffice.
  u64 x = u;
  for (u64 m = modulus; m > 1; m /= p) x = pow_mod(x, p, modulus);
  return x;
}

GaloisCharacter GaloisCharacter::unramified(u64 p, u64 modulus, u64 alpha) {
  if (alpha % p == 0) throw PreconditionError("unramified character value must be a unit");
  return GaloisCharacter{p, modulus, alpha % modulus, 0};
}

GaloisCharacter GaloisCharacter::cyclotomic(u64 p, u64 modulus, i64 exponent) {
  return GaloisCharacter{p, modulus, 1, reduce_signed(exponent, p - 1)};
}

u64 GaloisCharacter::evaluate(u64 frobenius_power, u64 u) const {
  if (u % p == 0) throw PreconditionError("GaloisCharacter::evaluate: u must be a unit mod p");
  const u64 lam = pow_mod(frobenius_value, frobenius_power, modulus);
  const u64 cyc = pow_mod(teichmuller_int(u, p, modulus), cyclotomic_exponent, modulus);
  return mul_mod(lam, cyc, modulus);
}

GaloisCharacter GaloisCharacter::operator*(const GaloisCharacter& o) const {
  if (p != o.p || modulus != o.modulus) throw std::invalid_argument("GaloisCharacter: mismatched moduli");
  return GaloisCharacter{p, modulus, mul_mod(frobenius_value, o.frobenius_value, modulus),
                         (cyclotomic_exponent + o.cyclotomic_exponent) % (p - 1)};
}

GaloisCharacter GaloisCharacter::inverse() const {
  return GaloisCharacter{p, modulus, inv_mod(frobenius_value, modulus),
                         (p - 1 - cyclotomic_exponent % (p - 1)) % (p - 1)};
}

}  // namespace exsplit
