#include "exsplit/finite_field.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace exsplit {

namespace fp_poly {

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly sub(const Poly& a, const Poly& b, u64 p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    u64 x = i < a.size() ? a[i] : 0;
    u64 y = i < b.size() ? b[i] : 0;
    r[i] = sub_mod(x, y, p);
  }
  trim(r);
  return r;
}

Poly mul(const Poly& a, const Poly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

Poly rem(Poly a, const Poly& m, u64 p) {
  trim(a);
  if (m.empty()) throw std::domain_error("fp_poly::rem: zero modulus");
  const std::size_t dm = m.size() - 1;
  const u64 lead_inv = inv_mod(m.back(), p);
  while (a.size() > dm) {
    const std::size_t shift = a.size() - 1 - dm;
    const u64 f = (a.back() * lead_inv) % p;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = sub_mod(a[shift + i], (f * m[i]) % p, p);
    trim(a);
  }
  return a;
}

Poly gcd(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const u64 inv = inv_mod(a.back(), p);
    for (auto& c : a) c = (c * inv) % p;
  }
  return a;
}

Poly powmod(const Poly& base, u64 e, const Poly& m, u64 p) {
  Poly r{1};
  Poly b = rem(base, m, p);
  while (e) {
    if (e & 1) r = rem(mul(r, b, p), m, p);
    b = rem(mul(b, b, p), m, p);
    e >>= 1;
  }
  return r;
}

bool is_irreducible(const Poly& h, u64 p) {
  if (h.size() < 2) return false;
  const std::size_t n = h.size() - 1;
  if (n == 1) return true;
  const Poly x{0, 1};
  Poly xq = x;  // x^{p^d} mod h
  for (std::size_t d = 1; d <= n / 2; ++d) {
    xq = powmod(xq, p, h, p);
    Poly g = gcd(h, sub(xq, x, p), p);
    if (g.size() > 1) return false;
  }
  return true;
}

Poly least_irreducible(u64 p, unsigned degree) {
  if (degree == 0) throw std::invalid_argument("least_irreducible: degree must be >= 1");
  // Enumerate the tail (c_0, ..., c_{n-1}) as a base-p counter whose most
  // significant digit is c_{n-1}; counting upward is lexicographic order on
  // (c_{n-1}, ..., c_0).
  Poly h(degree + 1, 0);
  h[degree] = 1;
  while (true) {
    if (is_irreducible(h, p)) return h;
    std::size_t i = 0;
    while (i < degree && ++h[i] == p) h[i++] = 0;
    if (i == degree) throw std::logic_error("least_irreducible: search exhausted");
  }
}

}  // namespace fp_poly

std::shared_ptr<const FiniteField> FiniteField::make(u64 p, unsigned degree) {
  if (p < 2 || !is_prime(p)) throw std::invalid_argument("FiniteField: characteristic must be prime");
  if (degree == 0) throw std::invalid_argument("FiniteField: degree must be >= 1");
  return std::shared_ptr<const FiniteField>(
      new FiniteField(p, degree, fp_poly::least_irreducible(p, degree)));
}

u64 FiniteField::order() const {
  u64 q = 1;
  for (unsigned i = 0; i < n_; ++i) {
    if (q > (u64{1} << 62) / p_) throw std::overflow_error("FiniteField::order overflows");
    q *= p_;
  }
  return q;
}

ResidueElement FiniteField::zero() const {
  return ResidueElement(shared_from_this(), std::vector<u64>(n_, 0));
}

ResidueElement FiniteField::one() const { return from_int(1); }

ResidueElement FiniteField::from_int(i64 v) const {
  std::vector<u64> c(n_, 0);
  c[0] = reduce_signed(v, p_);
  return ResidueElement(shared_from_this(), std::move(c));
}

ResidueElement FiniteField::from_coords(std::span<const u64> coords) const {
  if (coords.size() > n_) throw std::invalid_argument("from_coords: more coordinates than the field degree");
  std::vector<u64> c(n_, 0);
  for (std::size_t i = 0; i < coords.size(); ++i) c[i] = coords[i] % p_;
  return ResidueElement(shared_from_this(), std::move(c));
}

ResidueElement FiniteField::from_index(u64 index) const {
  std::vector<u64> c(n_, 0);
  for (unsigned i = 0; i < n_; ++i) {
    c[i] = index % p_;
    index /= p_;
  }
  return ResidueElement(shared_from_this(), std::move(c));
}

ResidueElement FiniteField::generator() const {
  // In degree 1 the modulus is y itself, so y reduces to 0.
  if (n_ == 1) return zero();
  std::vector<u64> c(n_, 0);
  c[1] = 1;
  return ResidueElement(shared_from_this(), std::move(c));
}

std::vector<ResidueElement> FiniteField::elements() const {
  const u64 q = order();
  if (q > 10'000'000) throw std::length_error("FiniteField::elements: field too large to enumerate");
  std::vector<ResidueElement> out;
  out.reserve(q);
  for (u64 i = 0; i < q; ++i) out.push_back(from_index(i));
  return out;
}

ResidueElement::ResidueElement(std::shared_ptr<const FiniteField> field, std::vector<u64> coords)
    : field_(std::move(field)), c_(std::move(coords)) {}

bool ResidueElement::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
}

bool ResidueElement::is_one() const noexcept {
  if (c_.empty() || c_[0] != 1) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](u64 v) { return v == 0; });
}

bool ResidueElement::in_prime_field() const noexcept {
  return c_.empty() || std::all_of(c_.begin() + 1, c_.end(), [](u64 v) { return v == 0; });
}

u64 ResidueElement::prime_value() const {
  if (!in_prime_field()) throw std::domain_error("prime_value: element is not in F_p");
  return c_.empty() ? 0 : c_[0];
}

u64 ResidueElement::index() const {
  const u64 p = field_->characteristic();
  u64 r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = r * p + c_[i];
  return r;
}

ResidueElement ResidueElement::operator-() const {
  const u64 p = field_->characteristic();
  ResidueElement r = *this;
  for (auto& v : r.c_) v = v ? p - v : 0;
  return r;
}

ResidueElement& ResidueElement::operator+=(const ResidueElement& o) {
  const u64 p = field_->characteristic();
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = add_mod(c_[i], o.c_[i], p);
  return *this;
}

ResidueElement& ResidueElement::operator-=(const ResidueElement& o) {
  const u64 p = field_->characteristic();
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = sub_mod(c_[i], o.c_[i], p);
  return *this;
}

ResidueElement& ResidueElement::operator*=(const ResidueElement& o) {
  const u64 p = field_->characteristic();
  const auto& h = field_->modulus();
  const std::size_t n = c_.size();
  std::vector<u64> prod(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + c_[i] * o.c_[j]) % p;
  }
  // h is monic of degree n; fold high terms down.
  for (std::size_t d = prod.size(); d-- > n;) {
    const u64 f = prod[d];
    if (f == 0) continue;
    prod[d] = 0;
    for (std::size_t i = 0; i < n; ++i)
      prod[d - n + i] = sub_mod(prod[d - n + i], (f * h[i]) % p, p);
  }
  // Degree 1 uses h = y: everything folds into the constant term already.
  prod.resize(n);
  c_ = std::move(prod);
  return *this;
}

ResidueElement ResidueElement::scaled(u64 k) const {
  const u64 p = field_->characteristic();
  ResidueElement r = *this;
  for (auto& v : r.c_) v = mul_mod(v, k % p, p);
  return r;
}

ResidueElement ResidueElement::pow(u64 e) const {
  ResidueElement r = field_->one();
  ResidueElement b = *this;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

ResidueElement ResidueElement::inverse() const {
  if (is_zero()) throw std::domain_error("ResidueElement::inverse: zero has no inverse");
  return pow(field_->order() - 2);
}

ResidueElement ResidueElement::frobenius() const { return pow(field_->characteristic()); }

u64 ResidueElement::trace() const {
  ResidueElement acc = *this;
  ResidueElement cur = *this;
  for (unsigned i = 1; i < field_->degree(); ++i) {
    cur = cur.frobenius();
    acc += cur;
  }
  return acc.prime_value();
}

std::string ResidueElement::to_string() const {
  if (in_prime_field()) return std::to_string(c_.empty() ? 0 : c_[0]);
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
  os << ']';
  return os.str();
}

}  // namespace exsplit
