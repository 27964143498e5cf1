#pragma once

// Working context for R/π^M, where R is the ring of integers of the degree-n
// unramified extension of Q_p(ζ_p) and π = 1 - ζ_p.
//
// Coefficients ("Witt coefficients") live in W_K = (Z/p^K)[y]/(H), the
// unramified ring of degree n truncated at p^K. Ring elements are polynomials
// of degree < p-1 in x = π over W_K, reduced by the Eisenstein relation
//   E(x) = ((1-x)^p - 1)/(-x) = x^{p-1} + ... + p.
// Because v_π(p) = p-1, W_K-exactness gives π-adic exactness through
// K(p-1) - 1 >= M + p - 2, which leaves room for the divisions by p taken in
// the logarithm and in digit extraction.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "exsplit/finite_field.hpp"
#include "exsplit/modular.hpp"

namespace exsplit {

class WittCoefficient;

class PrimeContext : public std::enable_shared_from_this<PrimeContext> {
 public:
  /// precision = 0 selects the default p + 2.
  static std::shared_ptr<const PrimeContext> make(u64 p, unsigned n_work, unsigned precision = 0);

  u64 p() const noexcept { return p_; }
  unsigned n_work() const noexcept { return n_; }
  /// Tracked π-digits.
  unsigned precision() const noexcept { return M_; }
  /// Coefficient precision exponent; coefficients are integers mod p^K.
  unsigned coeff_exponent() const noexcept { return K_; }
  u64 coeff_modulus() const noexcept { return pK_; }
  /// Number of x-coefficients of a ring element (p - 1).
  std::size_t rank() const noexcept { return static_cast<std::size_t>(p_ - 1); }

  const std::shared_ptr<const FiniteField>& residue_field() const noexcept { return field_; }
  /// Integer lift of the residue-field modulus h (monic, size n+1).
  const std::vector<u64>& lifted_modulus() const noexcept { return H_; }
  /// Coefficients e_0 .. e_{p-1} of E(x) modulo p^K (e_0 = p, e_{p-1} = 1).
  const std::vector<u64>& eisenstein() const noexcept { return E_; }

  bool same_as(const PrimeContext& o) const noexcept {
    return p_ == o.p_ && n_ == o.n_ && M_ == o.M_;
  }

  std::string describe() const;

  // --- coefficient-ring kernels (spans of length n_work) ---
  void w_mul(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const;
  void w_frobenius(std::span<const u64> a, std::span<u64> out) const;
  void w_frobenius_inverse(std::span<const u64> a, std::span<u64> out) const;
  /// Inverse of a unit of W_K (nonzero reduction mod p).
  std::vector<u64> w_inverse(std::span<const u64> a) const;
  std::vector<u64> w_pow(std::span<const u64> a, u64 e) const;
  /// Teichmüller lift of a residue-field element, as coordinates.
  std::vector<u64> w_teichmuller(const ResidueElement& r) const;
  ResidueElement w_reduce(std::span<const u64> a) const;

 private:
  PrimeContext() = default;

  u64 p_ = 0;
  unsigned n_ = 0;
  unsigned M_ = 0;
  unsigned K_ = 0;
  u64 pK_ = 0;
  std::shared_ptr<const FiniteField> field_;
  std::vector<u64> H_;
  std::vector<u64> E_;
  // Column i holds φ(y^i) (resp. φ^{-1}(y^i)); row-major n x n.
  std::vector<u64> frob_;
  std::vector<u64> frob_inv_;
};

using ContextPtr = std::shared_ptr<const PrimeContext>;

/// Element of W_K: a polynomial of degree < n_work over Z/p^K modulo H.
class WittCoefficient {
 public:
  WittCoefficient() = default;
  WittCoefficient(ContextPtr ctx, std::vector<u64> coords);

  static WittCoefficient from_int(ContextPtr ctx, i64 v);
  /// Coordinatewise lift of a residue-field element (not multiplicative).
  static WittCoefficient lift(ContextPtr ctx, const ResidueElement& r);

  const ContextPtr& context() const noexcept { return ctx_; }
  const std::vector<u64>& coords() const noexcept { return c_; }

  ResidueElement reduce() const { return ctx_->w_reduce(c_); }
  bool is_unit() const { return !reduce().is_zero(); }

  WittCoefficient operator-() const;
  friend WittCoefficient operator+(const WittCoefficient& a, const WittCoefficient& b);
  friend WittCoefficient operator-(const WittCoefficient& a, const WittCoefficient& b);
  friend WittCoefficient operator*(const WittCoefficient& a, const WittCoefficient& b);
  WittCoefficient inverse() const;
  WittCoefficient pow(u64 e) const;
  WittCoefficient frobenius() const;

  bool operator==(const WittCoefficient& o) const noexcept { return c_ == o.c_; }

 private:
  ContextPtr ctx_;
  std::vector<u64> c_;
};

/// The multiplicative section of reduction W_K -> F_{p^n}.
WittCoefficient teichmuller(const ContextPtr& ctx, const ResidueElement& r);

}  // namespace exsplit
