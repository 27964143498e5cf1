#include "exsplit/modforms.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <numeric>
#include <sstream>

#include "exsplit/errors.hpp"

namespace exsplit {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

int jacobi(i64 a, i64 n) {
  a %= n;
  if (a < 0) a += n;
  int r = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const i64 m = n % 8;
      if (m == 3 || m == 5) r = -r;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) r = -r;
    a %= n;
  }
  return n == 1 ? r : 0;
}

int kronecker_symbol(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int r = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) r = -r;
  }
  if (n % 2 == 0) {
    if (a % 2 == 0) return 0;
    const i64 m = ((a % 8) + 8) % 8;
    while (n % 2 == 0) {
      n /= 2;
      if (m == 3 || m == 5) r = -r;
    }
  }
  return r * jacobi(a, n);
}

u64 gcd_u(u64 a, u64 b) { return std::gcd(a, b); }

ResidueElement reduce_rational(const Rational& x, const FieldPtr& F) {
  const u64 p = F->characteristic();
  const BigInt num = boost::multiprecision::numerator(x), den = boost::multiprecision::denominator(x);
  const i64 d = static_cast<i64>(BigInt(den % p));
  if (d == 0) throw PreconditionError("constant term has a denominator divisible by p");
  BigInt nm = num % p;
  if (nm < 0) nm += p;
  return F->from_int(static_cast<i64>(nm)) * F->from_int(d).inverse();
}

// Bernoulli numbers B_0..B_k with B_1 = -1/2.
std::vector<Rational> bernoulli_numbers(unsigned k) {
  std::vector<Rational> B(k + 1);
  B[0] = 1;
  for (unsigned m = 1; m <= k; ++m) {
    Rational acc = 0;
    BigInt binom = 1;  // C(m+1, j)
    for (unsigned j = 0; j < m; ++j) {
      acc += Rational(binom) * B[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    B[m] = -acc / Rational(m + 1);
  }
  return B;
}

Rational bernoulli_generalized(unsigned k, const DirichletCharacter& eps) {
  if (!eps.integer_values()) throw PreconditionError("generalized Bernoulli number needs an integer-valued character");
  const auto& vals = *eps.integer_values();
  const u64 N = eps.modulus();
  const auto B = bernoulli_numbers(k);
  Rational total = 0;
  for (u64 a = 1; a <= N; ++a) {
    const i64 e = vals[a % N];
    if (e == 0) continue;
    const Rational x{BigInt(a), BigInt(N)};
    Rational bk = 0;
    BigInt binom = 1;
    for (unsigned j = 0; j <= k; ++j) {
      Rational xp = 1;
      for (unsigned i = 0; i < k - j; ++i) xp *= x;
      bk += Rational(binom) * B[j] * xp;
      binom = binom * (k - j) / (j + 1);
    }
    total += Rational(e) * bk;
  }
  Rational scale = 1;
  for (unsigned i = 0; i + 1 < k; ++i) scale *= Rational(BigInt(N));
  return total * scale;
}

void require_same_field(const FieldPtr& a, const FieldPtr& b) {
  if (!(*a == *b)) throw PreconditionError("coefficient fields differ");
}

}  // namespace

DirichletCharacter::DirichletCharacter(FieldPtr F, u64 N, std::vector<ResidueElement> table,
                                       std::optional<std::vector<i64>> integer_values)
    : F_(std::move(F)), N_(N), table_(std::move(table)), lift_(std::move(integer_values)) {
  if (N_ == 0) throw PreconditionError("character modulus must be >= 1");
  if (table_.size() != N_) throw PreconditionError("character table must have N entries");
  if (lift_ && lift_->size() != N_) throw PreconditionError("integer character values must have N entries");
  for (const auto& v : table_) require_same_field(v.field(), F_);
  if (!table_[1 % N_].is_one()) throw PreconditionError("character must send 1 to 1");
  for (u64 a = 0; a < N_; ++a) {
    const bool unit = gcd_u(a, N_) == 1;
    if (!unit && !table_[a].is_zero()) throw PreconditionError("character must vanish off (Z/N)^*");
    if (unit && table_[a].is_zero()) throw PreconditionError("character must be nonzero on (Z/N)^*");
  }
  for (u64 a = 0; a < N_; ++a) {
    if (gcd_u(a, N_) != 1) continue;
    for (u64 b = a; b < N_; ++b) {
      if (gcd_u(b, N_) != 1) continue;
      if (!(table_[(a * b) % N_] == table_[a] * table_[b]))
        throw PreconditionError("character is not multiplicative at (" + std::to_string(a) + ", " +
                                std::to_string(b) + ")");
    }
  }
}

DirichletCharacter DirichletCharacter::principal(FieldPtr F, u64 N) {
  std::vector<i64> v(N);
  for (u64 a = 0; a < N; ++a) v[a] = gcd_u(a, N) == 1 ? 1 : 0;
  return from_integers(std::move(F), N, v);
}

DirichletCharacter DirichletCharacter::kronecker(FieldPtr F, i64 D) {
  if (D == 0) throw PreconditionError("discriminant must be nonzero");
  const u64 N = static_cast<u64>(D < 0 ? -D : D);
  std::vector<i64> v(N);
  for (u64 a = 0; a < N; ++a) v[a] = kronecker_symbol(D, static_cast<i64>(a));
  if (N == 1) v[0] = 1;
  return from_integers(std::move(F), N, v);
}

DirichletCharacter DirichletCharacter::from_integers(FieldPtr F, u64 N, const std::vector<i64>& values) {
  std::vector<ResidueElement> t;
  t.reserve(values.size());
  for (i64 v : values) t.push_back(F->from_int(v));
  return DirichletCharacter(std::move(F), N, std::move(t), values);
}

ResidueElement DirichletCharacter::operator()(i64 n) const {
  return table_[static_cast<std::size_t>(reduce_signed(n, N_))];
}

int DirichletCharacter::parity() const { return (*this)(-1).is_one() ? 1 : -1; }

bool DirichletCharacter::is_trivial() const {
  for (u64 a = 0; a < N_; ++a)
    if (gcd_u(a, N_) == 1 && !table_[a].is_one()) return false;
  return true;
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& o) const {
  require_same_field(F_, o.F_);
  const u64 N = N_ * o.N_;
  std::vector<ResidueElement> t;
  std::optional<std::vector<i64>> lift;
  if (lift_ && o.lift_) lift.emplace();
  for (u64 a = 0; a < N; ++a) {
    const bool unit = gcd_u(a, N) == 1;
    t.push_back(unit ? (*this)(static_cast<i64>(a)) * o(static_cast<i64>(a)) : F_->zero());
    if (lift) lift->push_back(unit ? (*lift_)[a % N_] * (*o.lift_)[a % o.N_] : 0);
  }
  return DirichletCharacter(F_, N, std::move(t), std::move(lift));
}

bool DirichletCharacter::operator==(const DirichletCharacter& o) const {
  return N_ == o.N_ && *F_ == *o.F_ && table_ == o.table_;
}

QExpansion::QExpansion(FieldPtr F, std::vector<ResidueElement> coeffs) : F_(std::move(F)), a_(std::move(coeffs)) {
  if (a_.empty()) throw PreconditionError("q-expansion needs at least a_0");
  for (const auto& c : a_) require_same_field(c.field(), F_);
}

QExpansion QExpansion::zero(FieldPtr F, std::size_t bound) {
  std::vector<ResidueElement> a(bound + 1, F->zero());
  return QExpansion(std::move(F), std::move(a));
}

QExpansion QExpansion::truncated(std::size_t bound) const {
  if (bound > this->bound()) throw PreconditionError("cannot extend a truncated q-expansion");
  return QExpansion(F_, std::vector<ResidueElement>(a_.begin(), a_.begin() + static_cast<std::ptrdiff_t>(bound + 1)));
}

std::optional<std::size_t> QExpansion::first_difference(const QExpansion& o, std::size_t through) const {
  if (through > bound() || through > o.bound())
    throw PreconditionError("comparison bound " + std::to_string(through) + " exceeds a q-expansion bound");
  for (std::size_t n = 0; n <= through; ++n)
    if (!(a_[n] == o.a_[n])) return n;
  return std::nullopt;
}

bool QExpansion::operator==(const QExpansion& o) const {
  return !first_difference(o, std::min(bound(), o.bound())).has_value();
}

ModFormModP::ModFormModP(QExpansion q, unsigned weight, u64 level, DirichletCharacter e)
    : qexp(std::move(q)), k(weight), N(level), eps(std::move(e)), p(qexp.field()->characteristic()) {
  if (p == 2) throw PreconditionError("p must be an odd prime");
  if (k == 0) throw PreconditionError("weight must be positive");
  if (gcd_u(p, N) != 1) throw PreconditionError("level must be prime to p");
  if (N % eps.modulus() != 0) throw PreconditionError("character modulus must divide the level");
  require_same_field(qexp.field(), eps.field());
}

LiftedFormData::LiftedFormData(u64 p_, u64 modulus_, u64 A, u64 e)
    : p(p_), modulus(modulus_), A_p(A % modulus_), eps_N_at_p(e % modulus_) {
  if (A_p % p == 0) throw PreconditionError("A_p must be a unit (f ordinary)");
  if (eps_N_at_p % p == 0) throw PreconditionError("eps_N(p) must be a unit");
}

u64 LiftedFormData::c_gamma() const {
  return mul_mod(mul_mod(A_p, A_p, modulus), inv_mod(eps_N_at_p, modulus), modulus);
}

ModFormModP theta(const ModFormModP& f) {
  const auto& F = f.qexp.field();
  std::vector<ResidueElement> a;
  a.reserve(f.qexp.bound() + 1);
  for (std::size_t n = 0; n <= f.qexp.bound(); ++n) a.push_back(f.qexp[n].scaled(n % f.p));
  return ModFormModP(QExpansion(F, std::move(a)), f.k + static_cast<unsigned>(f.p + 1), f.N, f.eps);
}

ModFormModP theta_pow(const ModFormModP& f, unsigned j) {
  ModFormModP g = f;
  for (unsigned i = 0; i < j; ++i) g = theta(g);
  return g;
}

QExpansion theta_pow_closed(const QExpansion& f, unsigned j) {
  const u64 p = f.field()->characteristic();
  std::vector<ResidueElement> a;
  for (std::size_t n = 0; n <= f.bound(); ++n) a.push_back(f[n].scaled(j == 0 ? 1 : pow_mod(n % p, j, p)));
  return QExpansion(f.field(), std::move(a));
}

ModFormModP hecke_T(const ModFormModP& f, u64 l) {
  if (!is_prime(l)) throw PreconditionError("T_l needs a prime l");
  if (l == f.p || f.N % l == 0) throw PreconditionError("T_l needs l prime to Np");
  const std::size_t B = f.qexp.bound();
  if (B < l) throw PreconditionError("q-expansion bound is smaller than l");
  const ResidueElement w = f.eps(static_cast<i64>(l)).scaled(pow_mod(l % f.p, f.k - 1, f.p));
  std::vector<ResidueElement> a;
  for (std::size_t n = 0; n <= B / l; ++n) {
    ResidueElement c = f.qexp[n * l];
    if (n % l == 0) c += w * f.qexp[n / l];
    a.push_back(c);
  }
  return ModFormModP(QExpansion(f.qexp.field(), std::move(a)), f.k, f.N, f.eps);
}

ModFormModP hecke_U(const ModFormModP& f) {
  std::vector<ResidueElement> a;
  for (std::size_t n = 0; n <= f.qexp.bound() / f.p; ++n) a.push_back(f.qexp[n * f.p]);
  return ModFormModP(QExpansion(f.qexp.field(), std::move(a)), f.k, f.N, f.eps);
}

std::string generalized_bernoulli(unsigned k, const DirichletCharacter& eps) {
  std::ostringstream os;
  os << bernoulli_generalized(k, eps);
  return os.str();
}

ModFormModP eisenstein(unsigned k, const DirichletCharacter& eps1, const DirichletCharacter& eps2,
                       std::size_t bound) {
  if (k == 0) throw PreconditionError("weight must be positive");
  require_same_field(eps1.field(), eps2.field());
  const int sign = (k % 2 == 0) ? 1 : -1;
  if (eps1.parity() * eps2.parity() != sign) throw PreconditionError("parity: eps1(-1) eps2(-1) must equal (-1)^k");
  const auto& F = eps1.field();
  const u64 p = F->characteristic();
  std::vector<ResidueElement> a(bound + 1, F->zero());
  if (eps1.modulus() == 1) {
    const Rational B = bernoulli_generalized(k, eps2);
    a[0] = reduce_rational(-B / Rational(2 * k), F);
  }
  for (std::size_t d = 1; d <= bound; ++d) {
    const ResidueElement e2 = eps2(static_cast<i64>(d));
    if (e2.is_zero()) continue;
    const ResidueElement dk = e2.scaled(pow_mod(d % p, k - 1, p));
    for (std::size_t n = d; n <= bound; n += d) a[n] += eps1(static_cast<i64>(n / d)) * dk;
  }
  return ModFormModP(QExpansion(F, std::move(a)), k, eps1.modulus() * eps2.modulus(), eps1 * eps2);
}

const char* to_string(CompanionStatus s) {
  switch (s) {
    case CompanionStatus::holds:
      return "holds";
    case CompanionStatus::coefficient_mismatch:
      return "coefficient-mismatch";
    case CompanionStatus::weight_mismatch:
      return "weight-mismatch";
    case CompanionStatus::character_mismatch:
      return "character-mismatch";
    case CompanionStatus::level_mismatch:
      return "level-mismatch";
  }
  return "coefficient-mismatch";
}

CompanionResult companion_check(const ModFormModP& f, const ModFormModP& g, std::size_t bound) {
  CompanionResult out;
  if (f.p != g.p || f.N != g.N) {
    out.status = CompanionStatus::level_mismatch;
    return out;
  }
  if (f.k > f.p || g.k != f.p + 1 - f.k) {
    out.status = CompanionStatus::weight_mismatch;
    return out;
  }
  if (!(f.eps == g.eps)) {
    out.status = CompanionStatus::character_mismatch;
    return out;
  }
  const unsigned kp = g.k;
  const auto lhs = theta(g).qexp;
  const auto rhs = theta_pow(f, kp).qexp;
  if (auto n = lhs.first_difference(rhs, bound)) {
    out.status = CompanionStatus::coefficient_mismatch;
    out.first_mismatch = n;
  }
  return out;
}

bool exceptional_check(const ModFormModP& f, const ResidueElement& a_p) {
  if (a_p.is_zero()) return false;
  if (f.k != f.p) return false;
  return f.eps(static_cast<i64>(f.p)) == a_p * a_p;
}

FrobeniusCharpoly frobenius_charpoly(const ModFormModP& f, u64 l) {
  if (!is_prime(l)) throw PreconditionError("l must be prime");
  if (l == f.p || f.N % l == 0) throw PreconditionError("ramified prime: l divides Np");
  if (l > f.qexp.bound()) throw PreconditionError("q-expansion bound is smaller than l");
  return {f.qexp[l], f.eps(static_cast<i64>(l)).scaled(pow_mod(l % f.p, f.k - 1, f.p))};
}

std::string format_value(const ResidueElement& x) {
  const unsigned m = x.field()->degree();
  if (m == 1) return std::to_string(x.coord(0));
  std::string s;
  for (unsigned i = 0; i < m; ++i) {
    if (i) s += ',';
    s += std::to_string(x.coord(i));
  }
  return s;
}

std::string write_qexp(const ModFormModP& f) {
  std::ostringstream os;
  os << "qexp-v1\n";
  os << "p " << f.p << "\n";
  os << "m " << f.qexp.field()->degree() << "\n";
  os << "k " << f.k << "\n";
  os << "N " << f.N << "\n";
  os << "character";
  for (const auto& v : f.eps.table()) os << ' ' << format_value(v);
  os << "\n";
  os << "bound " << f.qexp.bound() << "\n";
  for (std::size_t n = 0; n <= f.qexp.bound(); ++n) os << n << ": " << format_value(f.qexp[n]) << "\n";
  return os.str();
}

namespace {

u64 parse_uint(const std::string& tok, const std::string& what) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected a non-negative integer for " + what + ", got '" + tok + "'");
  try {
    return std::stoull(tok);
  } catch (const std::out_of_range&) {
    throw ParseError("integer out of range for " + what);
  }
}

ResidueElement parse_value(const std::string& tok, const FieldPtr& F, const std::string& what) {
  std::vector<u64> c;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = tok.find(',', start);
    const u64 v = parse_uint(tok.substr(start, comma - start), what);
    if (v >= F->characteristic()) throw ParseError(what + ": coordinate " + std::to_string(v) + " is not below p");
    c.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (c.size() != F->degree())
    throw ParseError(what + ": expected " + std::to_string(F->degree()) + " coordinates");
  return F->from_coords(c);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

}  // namespace

ModFormModP read_qexp(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(is, line)) {
    auto toks = split_ws(line);
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  if (lines.size() < 7 || lines[0] != std::vector<std::string>{"qexp-v1"}) throw ParseError("missing qexp-v1 header");
  auto field = [&](std::size_t i, const char* key) -> const std::vector<std::string>& {
    if (lines[i].empty() || lines[i][0] != key) throw ParseError(std::string("expected header field '") + key + "'");
    return lines[i];
  };
  auto single = [&](std::size_t i, const char* key) {
    const auto& l = field(i, key);
    if (l.size() != 2) throw ParseError(std::string("header field '") + key + "' takes one value");
    return parse_uint(l[1], key);
  };
  const u64 p = single(1, "p");
  const u64 m = single(2, "m");
  const u64 k = single(3, "k");
  const u64 N = single(4, "N");
  if (!is_prime(p) || p == 2) throw PreconditionError("p must be an odd prime");
  if (m == 0 || m > 64) throw ParseError("m out of range");
  if (N == 0) throw ParseError("N must be positive");
  const auto F = FiniteField::make(p, static_cast<unsigned>(m));
  const auto& ch = field(5, "character");
  if (ch.size() != N + 1) throw ParseError("character line must list N values");
  std::vector<ResidueElement> table;
  for (u64 a = 0; a < N; ++a) table.push_back(parse_value(ch[a + 1], F, "character[" + std::to_string(a) + "]"));
  const u64 B = single(6, "bound");
  if (lines.size() != 7 + B + 1) throw ParseError("expected " + std::to_string(B + 1) + " coefficient lines");
  std::vector<ResidueElement> a;
  for (u64 n = 0; n <= B; ++n) {
    const auto& l = lines[7 + n];
    if (l.size() != 2 || l[0] != std::to_string(n) + ":")
      throw ParseError("coefficient line " + std::to_string(n) + " must read '" + std::to_string(n) + ": <value>'");
    a.push_back(parse_value(l[1], F, "a_" + std::to_string(n)));
  }
  return ModFormModP(QExpansion(F, std::move(a)), static_cast<unsigned>(k), N, DirichletCharacter(F, N, std::move(table)));
}

}  // namespace exsplit
