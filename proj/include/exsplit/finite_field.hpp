#pragma once

// Finite fields F_{p^n} = F_p[y]/(h) with h the lexicographically least monic
// irreducible polynomial of degree n. The same kernel serves as the residue
// field of the cyclotomic rings and as the coefficient field of mod-p
// q-expansions.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "exsplit/modular.hpp"

namespace exsplit {

namespace fp_poly {

/// Dense polynomial over F_p, constant term first, no trailing zeros.
using Poly = std::vector<u64>;

void trim(Poly& a);
Poly sub(const Poly& a, const Poly& b, u64 p);
Poly mul(const Poly& a, const Poly& b, u64 p);
Poly rem(Poly a, const Poly& m, u64 p);
Poly gcd(Poly a, Poly b, u64 p);
Poly powmod(const Poly& base, u64 e, const Poly& m, u64 p);

/// Ben-Or test: h (monic, degree n) has no factor of degree <= n/2.
bool is_irreducible(const Poly& h, u64 p);

/// The monic irreducible polynomial of the given degree whose coefficient
/// tuple (c_{n-1}, ..., c_0) is lexicographically least. Degree 1 gives y.
Poly least_irreducible(u64 p, unsigned degree);

}  // namespace fp_poly

class ResidueElement;

class FiniteField : public std::enable_shared_from_this<FiniteField> {
 public:
  static std::shared_ptr<const FiniteField> make(u64 p, unsigned degree);

  u64 characteristic() const noexcept { return p_; }
  unsigned degree() const noexcept { return n_; }
  /// p^n; throws if it does not fit in 63 bits.
  u64 order() const;
  /// Defining polynomial, monic, constant term first (size n+1).
  const fp_poly::Poly& modulus() const noexcept { return h_; }

  ResidueElement zero() const;
  ResidueElement one() const;
  ResidueElement from_int(i64 v) const;
  /// Coordinates in the power basis 1, y, ..., y^{n-1}; shorter vectors are
  /// zero-padded, entries are reduced mod p.
  ResidueElement from_coords(std::span<const u64> coords) const;
  /// Inverse of ResidueElement::index().
  ResidueElement from_index(u64 index) const;
  /// The class of y.
  ResidueElement generator() const;

  /// All elements, ordered by index(). Guarded to 10^7 elements.
  std::vector<ResidueElement> elements() const;

  bool operator==(const FiniteField& o) const noexcept {
    return p_ == o.p_ && h_ == o.h_;
  }

 private:
  FiniteField(u64 p, unsigned n, fp_poly::Poly h)
      : p_(p), n_(n), h_(std::move(h)) {}

  u64 p_;
  unsigned n_;
  fp_poly::Poly h_;
};

class ResidueElement {
 public:
  ResidueElement() = default;
  ResidueElement(std::shared_ptr<const FiniteField> field, std::vector<u64> coords);

  const std::shared_ptr<const FiniteField>& field() const noexcept { return field_; }
  const std::vector<u64>& coords() const noexcept { return c_; }
  u64 coord(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }

  bool is_zero() const noexcept;
  bool is_one() const noexcept;
  /// True iff the element lies in the prime field F_p.
  bool in_prime_field() const noexcept;
  /// Value as an integer in [0, p) for prime-field elements.
  u64 prime_value() const;

  /// Base-p integer with digit i = coordinate i.
  u64 index() const;

  ResidueElement operator-() const;
  ResidueElement& operator+=(const ResidueElement& o);
  ResidueElement& operator-=(const ResidueElement& o);
  ResidueElement& operator*=(const ResidueElement& o);
  friend ResidueElement operator+(ResidueElement a, const ResidueElement& b) { return a += b; }
  friend ResidueElement operator-(ResidueElement a, const ResidueElement& b) { return a -= b; }
  friend ResidueElement operator*(ResidueElement a, const ResidueElement& b) { return a *= b; }
  friend ResidueElement operator/(const ResidueElement& a, const ResidueElement& b) {
    return a * b.inverse();
  }
  ResidueElement scaled(u64 k) const;

  ResidueElement pow(u64 e) const;
  ResidueElement inverse() const;
  /// x -> x^p.
  ResidueElement frobenius() const;
  /// Absolute trace to F_p.
  u64 trace() const;

  bool operator==(const ResidueElement& o) const noexcept { return c_ == o.c_; }
  bool operator<(const ResidueElement& o) const noexcept { return index() < o.index(); }

  /// "3" for prime-field elements, "[c0,c1,...]" otherwise.
  std::string to_string() const;

 private:
  std::shared_ptr<const FiniteField> field_;
  std::vector<u64> c_;
};

}  // namespace exsplit
