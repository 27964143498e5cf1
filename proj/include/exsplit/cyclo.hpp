#pragma once

// Elements of R/π^M and the operations the splitting criterion needs:
// Teichmüller digit expansions, Frobenius, the cyclotomic automorphisms σ_u,
// p-adic powers of 1-units, the logarithm, and dlog mod π.

#include <cstddef>
#include <string>
#include <vector>

#include "exsplit/context.hpp"

namespace exsplit {

class CycloElement;

/// Teichmüller π-adic digits, little-endian: a ≡ Σ teich(d_i) π^i (mod π^M).
struct PiDigitExpansion {
  ContextPtr ctx;
  std::vector<ResidueElement> digits;

  bool is_unit() const { return !digits.empty() && !digits[0].is_zero(); }
  /// "d0 + d1·π + d2·π^2 + ...", zero digits omitted; "0" when all vanish.
  std::string to_string() const;
  bool operator==(const PiDigitExpansion& o) const { return digits == o.digits; }
};

class CycloElement {
 public:
  CycloElement() = default;

  static CycloElement zero(const ContextPtr& ctx);
  static CycloElement one(const ContextPtr& ctx);
  static CycloElement from_int(const ContextPtr& ctx, i64 v);
  static CycloElement from_witt(const WittCoefficient& w);
  /// x = π.
  static CycloElement pi(const ContextPtr& ctx);
  /// ζ = 1 - π.
  static CycloElement zeta(const ContextPtr& ctx);
  /// Σ teich(d_i) π^i; precision = max(ctx precision, digit count) capped at
  /// the context precision.
  static CycloElement from_digits(const ContextPtr& ctx, const std::vector<ResidueElement>& digits);
  /// Raw power-basis coefficients (x-index major, y-index minor).
  static CycloElement from_raw(const ContextPtr& ctx, std::vector<u64> raw, unsigned precision);

  const ContextPtr& context() const noexcept { return ctx_; }
  unsigned precision() const noexcept { return prec_; }
  const std::vector<u64>& raw() const noexcept { return c_; }
  WittCoefficient coefficient(std::size_t i) const;

  /// Same value, precision lowered to min(precision(), m).
  CycloElement truncated(unsigned m) const;

  /// π-adic valuation, capped at precision().
  unsigned valuation() const;
  bool is_zero() const { return valuation() >= prec_; }
  bool is_unit() const;
  /// digit_0 = 1, i.e. a ∈ 1 + πR.
  bool is_one_unit() const;
  /// a ≡ b (mod π^m).
  bool congruent(const CycloElement& o, unsigned m) const;

  CycloElement operator-() const;
  CycloElement& operator+=(const CycloElement& o);
  CycloElement& operator-=(const CycloElement& o);
  CycloElement& operator*=(const CycloElement& o);
  friend CycloElement operator+(CycloElement a, const CycloElement& b) { return a += b; }
  friend CycloElement operator-(CycloElement a, const CycloElement& b) { return a -= b; }
  friend CycloElement operator*(CycloElement a, const CycloElement& b) { return a *= b; }
  /// Throws PreconditionError when b is not a unit.
  friend CycloElement operator/(const CycloElement& a, const CycloElement& b);
  CycloElement inverse() const;
  /// Ring power by repeated squaring; any unit may take negative exponents.
  CycloElement pow(i64 e) const;
  CycloElement times_pi() const;

  /// Digit-expansion equality through min(precision) - 1.
  bool operator==(const CycloElement& o) const;

 private:
  CycloElement(ContextPtr ctx, std::vector<u64> c, unsigned prec)
      : ctx_(std::move(ctx)), c_(std::move(c)), prec_(prec) {}
  void require_same(const CycloElement& o) const;

  ContextPtr ctx_;
  std::vector<u64> c_;
  unsigned prec_ = 0;
};

enum class RingOp { add, mul, div };
CycloElement ring_arith(const CycloElement& a, const CycloElement& b, RingOp op);

PiDigitExpansion digit_expansion(const CycloElement& a);
ResidueElement digit(const CycloElement& a, std::size_t position);

/// Acts on coefficients by the Frobenius of W_K, fixes π.
CycloElement frobenius(const CycloElement& a);
CycloElement frobenius_pow(const CycloElement& a, unsigned j);
/// ζ -> ζ^u, trivial on coefficients.
CycloElement sigma(const CycloElement& a, u64 u);

/// Truncated series Σ (-1)^{k+1}(a-1)^k/k for a 1-unit. The result carries
/// the output precision M_out <= precision(a), which accounts for the p-adic
/// digits lost in the divisions by k.
CycloElement log_one_unit(const CycloElement& a);

/// Constant π-digit of a'(x)/a(x) for a unit a.
ResidueElement dlog_mod_pi(const CycloElement& a);

/// a^e for a 1-unit a and e an integer taken modulo p^K.
CycloElement pow_padic(const CycloElement& a, i64 e);
CycloElement pow_padic_u(const CycloElement& a, u64 e);

/// Re-express a φ^n-invariant element over the degree-n subfield, in a new
/// context (p, n, precision(a)). Throws PreconditionError naming the first
/// digit position that is not φ^n-fixed.
CycloElement descend_subfield(const CycloElement& a, unsigned n);

/// F_{p^n} inside a larger F_{p^N} (n | N), via the least-index root of the
/// degree-n defining polynomial; the identity when n = N.
class SubfieldEmbedding {
 public:
  SubfieldEmbedding(std::shared_ptr<const FiniteField> big, unsigned n);

  const std::shared_ptr<const FiniteField>& big() const noexcept { return big_; }
  const std::shared_ptr<const FiniteField>& small() const noexcept { return small_; }
  const ResidueElement& root() const noexcept { return root_; }

  ResidueElement embed(const ResidueElement& x) const;
  /// Throws PreconditionError when x is not in the image.
  ResidueElement restrict(const ResidueElement& x) const;
  bool contains(const ResidueElement& x) const;

 private:
  std::shared_ptr<const FiniteField> big_;
  std::shared_ptr<const FiniteField> small_;
  ResidueElement root_;
  std::vector<ResidueElement> powers_;
};

/// Re-express an element whose digits lie in a subfield of the residue field
/// in the context ctx (whose residue degree divides that of a's context).
/// Digits beyond ctx's precision are dropped.
CycloElement transport(const CycloElement& a, const ContextPtr& ctx);

}  // namespace exsplit
