#pragma once

// Mod-p modular forms as truncated q-expansions over F_{p^m}: Dirichlet
// characters, θ and Hecke operators, Eisenstein series, companion forms and
// the exceptional-case predicate.

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exsplit/finite_field.hpp"

namespace exsplit {

using FieldPtr = std::shared_ptr<const FiniteField>;

/// Character mod N with values in F_{p^m}, stored as a table over Z/N.
class DirichletCharacter {
 public:
  /// Validates ε(1) = 1, ε = 0 off (Z/N)^* and multiplicativity on all pairs.
  DirichletCharacter(FieldPtr F, u64 N, std::vector<ResidueElement> table,
                     std::optional<std::vector<i64>> integer_values = std::nullopt);

  static DirichletCharacter principal(FieldPtr F, u64 N);
  /// n -> (D/n) for a fundamental discriminant D, modulus |D|.
  static DirichletCharacter kronecker(FieldPtr F, i64 D);
  /// Values given as integers (reduced into F); keeps them as the lift used
  /// by generalized Bernoulli numbers.
  static DirichletCharacter from_integers(FieldPtr F, u64 N, const std::vector<i64>& values);

  const FieldPtr& field() const noexcept { return F_; }
  u64 modulus() const noexcept { return N_; }
  const std::vector<ResidueElement>& table() const noexcept { return table_; }
  const std::optional<std::vector<i64>>& integer_values() const noexcept { return lift_; }

  ResidueElement operator()(i64 n) const;
  /// ε(-1) as +1 or -1.
  int parity() const;
  bool is_trivial() const;

  /// Product on modulus N1·N2.
  DirichletCharacter operator*(const DirichletCharacter& o) const;
  bool operator==(const DirichletCharacter& o) const;

 private:
  FieldPtr F_;
  u64 N_;
  std::vector<ResidueElement> table_;
  std::optional<std::vector<i64>> lift_;
};

/// a_0 ... a_B.
class QExpansion {
 public:
  QExpansion(FieldPtr F, std::vector<ResidueElement> coeffs);
  static QExpansion zero(FieldPtr F, std::size_t bound);

  const FieldPtr& field() const noexcept { return F_; }
  std::size_t bound() const noexcept { return a_.size() - 1; }
  const ResidueElement& operator[](std::size_t n) const { return a_.at(n); }
  const std::vector<ResidueElement>& coefficients() const noexcept { return a_; }

  QExpansion truncated(std::size_t bound) const;
  /// First index <= through where the two differ; both bounds must reach it.
  std::optional<std::size_t> first_difference(const QExpansion& o, std::size_t through) const;
  /// Equality through the smaller bound.
  bool operator==(const QExpansion& o) const;

 private:
  FieldPtr F_;
  std::vector<ResidueElement> a_;
};

struct ModFormModP {
  QExpansion qexp;
  unsigned k = 0;
  u64 N = 1;
  DirichletCharacter eps;
  u64 p = 0;

  /// Checks gcd(p, N) = 1, a prime p, and matching coefficient fields.
  ModFormModP(QExpansion qexp, unsigned k, u64 N, DirichletCharacter eps);
};

/// The lifted data at p: A_p and ε_N(p) modulo p^K, and c_γ = A_p^2/ε_N(p).
struct LiftedFormData {
  u64 p = 0;
  u64 modulus = 0;  // p^K
  u64 A_p = 0;
  u64 eps_N_at_p = 0;

  LiftedFormData(u64 p, u64 modulus, u64 A_p, u64 eps_N_at_p);
  u64 c_gamma() const;
  bool exceptional() const { return c_gamma() % p == 1; }
};

/// n a_n; weight k + p + 1.
ModFormModP theta(const ModFormModP& f);
/// θ applied j times.
ModFormModP theta_pow(const ModFormModP& f, unsigned j);
/// n^j a_n in one step.
QExpansion theta_pow_closed(const QExpansion& f, unsigned j);

/// a_n(T_l f) = a_{nl} + ε(l) l^{k-1} a_{n/l}; bound floor(B/l).
ModFormModP hecke_T(const ModFormModP& f, u64 l);
/// a_n(U_p f) = a_{np}; bound floor(B/p).
ModFormModP hecke_U(const ModFormModP& f);

/// E_k^{ε1,ε2} reduced mod p at level N1·N2 with character ε1ε2. The
/// constant term is -B_{k,ε2}/(2k) when ε1 is trivial mod 1, else 0.
ModFormModP eisenstein(unsigned k, const DirichletCharacter& eps1, const DirichletCharacter& eps2,
                       std::size_t bound);

/// B_{k,ε} = N^{k-1} Σ_{a=1}^{N} ε(a) B_k(a/N), as a reduced fraction string
/// "num/den" (or "num"). ε must carry integer values.
std::string generalized_bernoulli(unsigned k, const DirichletCharacter& eps);

enum class CompanionStatus { holds, coefficient_mismatch, weight_mismatch, character_mismatch, level_mismatch };
const char* to_string(CompanionStatus s);

struct CompanionResult {
  CompanionStatus status = CompanionStatus::holds;
  std::optional<std::size_t> first_mismatch;
  bool holds() const { return status == CompanionStatus::holds; }
};

/// θg = θ^{k'} f through q^B, k' = p + 1 - k.
CompanionResult companion_check(const ModFormModP& f, const ModFormModP& g, std::size_t bound);

/// a_p != 0, k = p and ε(p) = a_p^2.
bool exceptional_check(const ModFormModP& f, const ResidueElement& a_p);

struct FrobeniusCharpoly {
  ResidueElement trace;
  ResidueElement det;
};
/// x^2 - a_l x + ε(l) l^{k-1}.
FrobeniusCharpoly frobenius_charpoly(const ModFormModP& f, u64 l);

/// Plain-text exchange format:
///   qexp-v1
///   p <p>
///   m <m>
///   k <k>
///   N <N>
///   character <ε(0)> ... <ε(N-1)>
///   bound <B>
///   <n>: <value>          for n = 0..B
/// A value is an F_p integer when m = 1, else comma-joined power-basis
/// coordinates c_0,...,c_{m-1}.
std::string write_qexp(const ModFormModP& f);
ModFormModP read_qexp(const std::string& text);
std::string format_value(const ResidueElement& x);

}  // namespace exsplit
