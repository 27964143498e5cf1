#pragma once

// Classes of 1-units modulo p-th powers at precision π^{p+1}: the normal form
// ζ^s (1+π^p)^t, Galois-eigenspace tests, p-th power triviality, and an
// exhaustive enumeration oracle.

#include <compare>
#include <cstddef>
#include <optional>
#include <vector>

#include "exsplit/cyclo.hpp"

namespace exsplit {

struct EigenNormalForm {
  u64 s = 0;
  u64 t = 0;
  auto operator<=>(const EigenNormalForm&) const = default;
};

struct NormalFormResult {
  EigenNormalForm nf;
  bool admissible = false;
  /// First digit position that rules out the normal form (inadmissible only).
  std::optional<std::size_t> failing_position;
};

/// Class of a 1-unit modulo 1 + π^{p+1}R, as its digits at positions 1..p.
struct UnitClass {
  ContextPtr ctx;
  std::vector<ResidueElement> digits;  // positions 1..p

  static UnitClass of(const CycloElement& q);
  CycloElement element() const;

  bool operator==(const UnitClass& o) const { return digits == o.digits; }
  bool operator<(const UnitClass& o) const;
};

/// ζ^s (1+π^p)^t.
CycloElement normal_form_element(const ContextPtr& ctx, u64 s, u64 t);

/// Reads s from digit 1 and t from digit p of q ζ^{-s}. Requires a 1-unit at
/// precision >= p+1.
NormalFormResult extract_normal_form(const CycloElement& q);

/// True iff x lies in (1+πR)^p (1+π^{p+1}R): digits 1..p-1 vanish and digit p
/// is in the image of r -> r^p - r (trace zero).
bool is_pth_power_mod(const CycloElement& x);

/// (a) σ_u(q) / q^u is a p-th power class for every u in (Z/p)^*, and
/// (b) φ(q) ≡ q^{c_gamma} (mod π^{p+1}). c_gamma must be ≡ 1 mod p.
bool verify_galois_eigen(const CycloElement& q, u64 c_gamma);

/// Trivial iff s = t = 0. Valid because the descent field has degree prime
/// to p over Q_p(ζ_p).
bool is_pth_power_class(const EigenNormalForm& nf);

/// Every class with digits at positions 1..p passing verify_galois_eigen,
/// sorted by digit list. Refuses enumerations above 10^7 classes.
std::vector<UnitClass> brute_force_eigenclasses(const ContextPtr& ctx, u64 c_gamma);

/// Order of a in F_p^*.
u64 mult_order(u64 a, u64 p);

/// Character of the local Galois group of Q_p(ζ_p)^unr / Q_p, evaluated on
/// φ^j σ_u as λ^j ω(u)^e, with λ a unit mod p^K and ω the Teichmüller
/// character (ω(u) ≡ u mod p).
struct GaloisCharacter {
  u64 p = 0;
  u64 modulus = 0;           // p^K
  u64 frobenius_value = 1;   // λ(α) sends φ to α
  u64 cyclotomic_exponent = 0;  // power of χ, read mod p-1

  static GaloisCharacter unramified(u64 p, u64 modulus, u64 alpha);
  static GaloisCharacter cyclotomic(u64 p, u64 modulus, i64 exponent);

  u64 evaluate(u64 frobenius_power, u64 u) const;
  GaloisCharacter operator*(const GaloisCharacter& o) const;
  GaloisCharacter inverse() const;
  bool operator==(const GaloisCharacter&) const = default;
};

/// ω(u): the (p-1)-st root of unity in Z/p^K congruent to u.
u64 teichmuller_int(u64 u, u64 p, u64 modulus);

}  // namespace exsplit
