#include "exsplit/cyclo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "exsplit/errors.hpp"
#include "exsplit/fp_linalg.hpp"

namespace exsplit {

namespace {

std::size_t width(const PrimeContext& ctx) { return ctx.rank() * ctx.n_work(); }

std::span<const u64> coeff_span(const std::vector<u64>& c, std::size_t i, std::size_t n) {
  return std::span<const u64>(c).subspan(i * n, n);
}

// (a - a_0 mod p) / π for raw coefficients whose constant coefficient is
// divisible by p. Uses p/π = -(e_1 + e_2 x + ... + e_{p-1} x^{p-2}).
std::vector<u64> divide_by_pi(const PrimeContext& ctx, const std::vector<u64>& c) {
  const std::size_t n = ctx.n_work(), r = ctx.rank();
  const u64 p = ctx.p(), pK = ctx.coeff_modulus();
  const auto& E = ctx.eisenstein();
  std::vector<u64> out(c.size(), 0);
  for (std::size_t i = 1; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) out[(i - 1) * n + j] = c[i * n + j];
  for (std::size_t j = 0; j < n; ++j) {
    const u64 c0 = c[j];
    if (c0 % p != 0) throw std::logic_error("divide_by_pi: constant coefficient is not divisible by p");
    const u64 q = c0 / p;  // known mod p^{K-1}
    if (q == 0) continue;
    for (std::size_t i = 0; i < r; ++i)
      out[i * n + j] = sub_mod(out[i * n + j], mul_mod(q, E[i + 1], pK), pK);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- digits ---

std::string PiDigitExpansion::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << digits[i].to_string();
    if (i == 1) os << "·π";
    if (i > 1) os << "·π^" << i;
  }
  if (first) os << "0";
  return os.str();
}

// ------------------------------------------------------------ CycloElement ---

CycloElement CycloElement::zero(const ContextPtr& ctx) {
  return CycloElement(ctx, std::vector<u64>(width(*ctx), 0), ctx->precision());
}

CycloElement CycloElement::one(const ContextPtr& ctx) { return from_int(ctx, 1); }

CycloElement CycloElement::from_int(const ContextPtr& ctx, i64 v) {
  CycloElement r = zero(ctx);
  r.c_[0] = reduce_signed(v, ctx->coeff_modulus());
  return r;
}

CycloElement CycloElement::from_witt(const WittCoefficient& w) {
  CycloElement r = zero(w.context());
  std::copy(w.coords().begin(), w.coords().end(), r.c_.begin());
  return r;
}

CycloElement CycloElement::pi(const ContextPtr& ctx) { return one(ctx).times_pi(); }

CycloElement CycloElement::zeta(const ContextPtr& ctx) { return one(ctx) - pi(ctx); }

CycloElement CycloElement::from_digits(const ContextPtr& ctx, const std::vector<ResidueElement>& digits) {
  if (digits.size() > ctx->precision())
    throw PreconditionError("more digits than the context precision");
  CycloElement acc = zero(ctx);
  for (std::size_t i = digits.size(); i-- > 0;) {
    acc = acc.times_pi();
    acc += from_witt(teichmuller(ctx, digits[i]));
  }
  return acc;
}

CycloElement CycloElement::from_raw(const ContextPtr& ctx, std::vector<u64> raw, unsigned precision) {
  if (raw.size() != width(*ctx)) throw std::invalid_argument("from_raw: wrong coefficient count");
  for (auto& v : raw) v %= ctx->coeff_modulus();
  return CycloElement(ctx, std::move(raw), std::min(precision, ctx->precision()));
}

WittCoefficient CycloElement::coefficient(std::size_t i) const {
  const std::size_t n = ctx_->n_work();
  auto s = coeff_span(c_, i, n);
  return WittCoefficient(ctx_, std::vector<u64>(s.begin(), s.end()));
}

CycloElement CycloElement::truncated(unsigned m) const {
  CycloElement r = *this;
  r.prec_ = std::min(prec_, m);
  return r;
}

unsigned CycloElement::valuation() const {
  const std::size_t n = ctx_->n_work(), r = ctx_->rank();
  const u64 p = ctx_->p();
  const unsigned K = ctx_->coeff_exponent();
  unsigned best = prec_;
  for (std::size_t i = 0; i < r; ++i) {
    unsigned vi = K;
    for (std::size_t j = 0; j < n; ++j)
      if (c_[i * n + j] != 0) vi = std::min(vi, vp(c_[i * n + j], p));
    const unsigned val = vi * static_cast<unsigned>(p - 1) + static_cast<unsigned>(i);
    best = std::min(best, val);
  }
  return best;
}

bool CycloElement::is_unit() const { return !ctx_->w_reduce(coeff_span(c_, 0, ctx_->n_work())).is_zero(); }

bool CycloElement::is_one_unit() const { return ctx_->w_reduce(coeff_span(c_, 0, ctx_->n_work())).is_one(); }

bool CycloElement::congruent(const CycloElement& o, unsigned m) const {
  require_same(o);
  CycloElement d = *this - o;
  d.prec_ = m;
  return d.valuation() >= m;
}

void CycloElement::require_same(const CycloElement& o) const {
  if (!ctx_ || !o.ctx_ || !ctx_->same_as(*o.ctx_))
    throw std::invalid_argument("CycloElement: operands belong to different contexts");
}

CycloElement CycloElement::operator-() const {
  CycloElement r = *this;
  const u64 pK = ctx_->coeff_modulus();
  for (auto& v : r.c_) v = sub_mod(0, v, pK);
  return r;
}

CycloElement& CycloElement::operator+=(const CycloElement& o) {
  require_same(o);
  const u64 pK = ctx_->coeff_modulus();
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = add_mod(c_[i], o.c_[i], pK);
  prec_ = std::min(prec_, o.prec_);
  return *this;
}

CycloElement& CycloElement::operator-=(const CycloElement& o) {
  require_same(o);
  const u64 pK = ctx_->coeff_modulus();
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = sub_mod(c_[i], o.c_[i], pK);
  prec_ = std::min(prec_, o.prec_);
  return *this;
}

CycloElement& CycloElement::operator*=(const CycloElement& o) {
  require_same(o);
  const std::size_t n = ctx_->n_work(), r = ctx_->rank();
  const u64 pK = ctx_->coeff_modulus();
  const auto& E = ctx_->eisenstein();
  std::vector<u64> prod((2 * r - 1) * n, 0), tmp(n);
  for (std::size_t i = 0; i < r; ++i) {
    auto a = coeff_span(c_, i, n);
    if (std::all_of(a.begin(), a.end(), [](u64 v) { return v == 0; })) continue;
    for (std::size_t j = 0; j < r; ++j) {
      ctx_->w_mul(a, coeff_span(o.c_, j, n), tmp);
      for (std::size_t k = 0; k < n; ++k) prod[(i + j) * n + k] = add_mod(prod[(i + j) * n + k], tmp[k], pK);
    }
  }
  // x^{p-1} = -(e_0 + e_1 x + ... + e_{p-2} x^{p-2}).
  for (std::size_t d = 2 * r - 1; d-- > r;) {
    for (std::size_t k = 0; k < n; ++k) {
      const u64 f = prod[d * n + k];
      if (f == 0) continue;
      prod[d * n + k] = 0;
      for (std::size_t jj = 0; jj < r; ++jj) {
        u64& slot = prod[(d - r + jj) * n + k];
        slot = sub_mod(slot, mul_mod(f, E[jj], pK), pK);
      }
    }
  }
  prod.resize(r * n);
  c_ = std::move(prod);
  prec_ = std::min(prec_, o.prec_);
  return *this;
}

CycloElement CycloElement::times_pi() const {
  const std::size_t n = ctx_->n_work(), r = ctx_->rank();
  const u64 pK = ctx_->coeff_modulus();
  const auto& E = ctx_->eisenstein();
  std::vector<u64> out(c_.size(), 0);
  for (std::size_t i = 0; i + 1 < r; ++i)
    for (std::size_t k = 0; k < n; ++k) out[(i + 1) * n + k] = c_[i * n + k];
  for (std::size_t k = 0; k < n; ++k) {
    const u64 f = c_[(r - 1) * n + k];
    if (f == 0) continue;
    for (std::size_t jj = 0; jj < r; ++jj) out[jj * n + k] = sub_mod(out[jj * n + k], mul_mod(f, E[jj], pK), pK);
  }
  return CycloElement(ctx_, std::move(out), prec_);
}

CycloElement CycloElement::inverse() const {
  if (!is_unit()) throw PreconditionError("division by a non-unit");
  CycloElement x = from_witt(coefficient(0).inverse());
  x.prec_ = prec_;
  const CycloElement two = from_int(ctx_, 2);
  const unsigned full = ctx_->coeff_exponent() * static_cast<unsigned>(ctx_->p() - 1);
  // Newton: the error valuation doubles; stop when exact mod p^K.
  for (unsigned it = 0; it < 64; ++it) {
    CycloElement bx = *this * x;
    CycloElement err = one(ctx_) - bx;
    err.prec_ = full;
    if (err.valuation() >= full) return x;
    x = x * (two - bx);
  }
  throw std::logic_error("CycloElement::inverse did not converge");
}

CycloElement operator/(const CycloElement& a, const CycloElement& b) {
  a.require_same(b);
  return a * b.inverse();
}

CycloElement CycloElement::pow(i64 e) const {
  if (e < 0) return inverse().pow(-e);
  CycloElement r = one(ctx_);
  r.prec_ = prec_;
  CycloElement b = *this;
  u64 ue = static_cast<u64>(e);
  while (ue) {
    if (ue & 1) r *= b;
    b *= b;
    ue >>= 1;
  }
  return r;
}

bool CycloElement::operator==(const CycloElement& o) const {
  return congruent(o, std::min(prec_, o.prec_));
}

CycloElement ring_arith(const CycloElement& a, const CycloElement& b, RingOp op) {
  switch (op) {
    case RingOp::add:
      return a + b;
    case RingOp::mul:
      return a * b;
    case RingOp::div:
      return a / b;
  }
  throw std::invalid_argument("ring_arith: unknown op");
}

// ------------------------------------------------------------ operations ---

PiDigitExpansion digit_expansion(const CycloElement& a) {
  const auto& ctx = a.context();
  const std::size_t n = ctx->n_work();
  PiDigitExpansion out{ctx, {}};
  std::vector<u64> cur = a.raw();
  for (unsigned pos = 0; pos < a.precision(); ++pos) {
    ResidueElement d = ctx->w_reduce(std::span<const u64>(cur).subspan(0, n));
    auto t = ctx->w_teichmuller(d);
    for (std::size_t k = 0; k < n; ++k) cur[k] = sub_mod(cur[k], t[k], ctx->coeff_modulus());
    out.digits.push_back(std::move(d));
    if (pos + 1 < a.precision()) cur = divide_by_pi(*ctx, cur);
  }
  return out;
}

ResidueElement digit(const CycloElement& a, std::size_t position) {
  if (position >= a.precision()) throw PreconditionError("digit position beyond element precision");
  return digit_expansion(a.truncated(static_cast<unsigned>(position + 1))).digits[position];
}

CycloElement frobenius(const CycloElement& a) {
  const auto& ctx = a.context();
  const std::size_t n = ctx->n_work();
  std::vector<u64> out(a.raw().size());
  for (std::size_t i = 0; i < ctx->rank(); ++i)
    ctx->w_frobenius(coeff_span(a.raw(), i, n), std::span<u64>(out).subspan(i * n, n));
  return CycloElement::from_raw(ctx, std::move(out), a.precision());
}

CycloElement frobenius_pow(const CycloElement& a, unsigned j) {
  CycloElement r = a;
  for (unsigned k = 0; k < j % a.context()->n_work(); ++k) r = frobenius(r);
  return r;
}

CycloElement sigma(const CycloElement& a, u64 u) {
  const auto& ctx = a.context();
  const u64 p = ctx->p();
  if (u % p == 0) throw PreconditionError("sigma: u must be a unit mod p");
  const CycloElement s = CycloElement::one(ctx) - CycloElement::zeta(ctx).pow(static_cast<i64>(u % p));
  CycloElement acc = CycloElement::zero(ctx);
  for (std::size_t i = ctx->rank(); i-- > 0;) {
    acc = acc * s;
    acc += CycloElement::from_witt(a.coefficient(i));
  }
  return acc.truncated(a.precision());
}

CycloElement log_one_unit(const CycloElement& a) {
  if (!a.is_one_unit()) throw PreconditionError("log_one_unit: argument is not a 1-unit");
  const auto& ctx = a.context();
  const u64 p = ctx->p(), pK = ctx->coeff_modulus();
  const unsigned K = ctx->coeff_exponent();
  const unsigned target = a.precision();
  const CycloElement z = a - CycloElement::one(ctx);
  const unsigned v = z.valuation();
  CycloElement result = CycloElement::zero(ctx);
  if (v >= target) return result.truncated(target);

  unsigned m_out = target;
  CycloElement zk = CycloElement::one(ctx);
  for (u64 k = 1;; ++k) {
    zk = zk * z;
    const unsigned vk = vp(k, p);
    const long lower = static_cast<long>(k * v) - static_cast<long>(vk * (p - 1));
    if (lower < static_cast<long>(target)) {
      m_out = std::min(m_out, (K - vk) * static_cast<unsigned>(p - 1));
      const u64 pv = ipow(p, vk);
      const u64 unit_inv = inv_mod((k / pv) % pK, pK);
      std::vector<u64> raw = zk.raw();
      for (auto& c : raw) {
        if (c % pv != 0) throw std::logic_error("log_one_unit: term not divisible by p^v");
        c = mul_mod(c / pv, unit_inv, pK);
      }
      CycloElement term = CycloElement::from_raw(ctx, std::move(raw), target);
      if (k % 2 == 1)
        result += term;
      else
        result -= term;
    } else if (k >= p) {
      // k v - (p-1) log_p k increases for k >= p and bounds every later term.
      const double bound = static_cast<double>(k * v) -
                           static_cast<double>(p - 1) * std::log(static_cast<double>(k)) / std::log(static_cast<double>(p));
      if (bound >= static_cast<double>(target)) break;
    }
  }
  return result.truncated(m_out);
}

ResidueElement dlog_mod_pi(const CycloElement& a) {
  if (!a.is_unit()) throw PreconditionError("dlog_mod_pi: argument is not a unit");
  const auto& ctx = a.context();
  const std::size_t n = ctx->n_work(), r = ctx->rank();
  const u64 pK = ctx->coeff_modulus();
  std::vector<u64> d(a.raw().size(), 0);
  for (std::size_t i = 1; i < r; ++i)
    for (std::size_t k = 0; k < n; ++k) d[(i - 1) * n + k] = mul_mod(a.raw()[i * n + k], i, pK);
  const CycloElement q = CycloElement::from_raw(ctx, std::move(d), a.precision()) / a;
  return ctx->w_reduce(coeff_span(q.raw(), 0, n));
}

CycloElement pow_padic_u(const CycloElement& a, u64 e) {
  if (!a.is_one_unit()) throw PreconditionError("pow_padic: base is not a 1-unit");
  return a.pow(static_cast<i64>(e % a.context()->coeff_modulus()));
}

CycloElement pow_padic(const CycloElement& a, i64 e) {
  return pow_padic_u(a, reduce_signed(e, a.context()->coeff_modulus()));
}

// ------------------------------------------------------------- subfields ---

SubfieldEmbedding::SubfieldEmbedding(std::shared_ptr<const FiniteField> big, unsigned n)
    : big_(std::move(big)) {
  const unsigned N = big_->degree();
  const u64 p = big_->characteristic();
  if (n == 0 || N % n != 0) throw PreconditionError("subfield degree must divide the residue degree");
  small_ = FiniteField::make(p, n);
  if (n == N) {
    root_ = big_->generator();
  } else if (n == 1) {
    root_ = big_->zero();
  } else {
    // Subfield = kernel of x -> x^{p^n} - x, an F_p-subspace of dimension n.
    fp_linalg::Matrix A(N, N);
    for (unsigned i = 0; i < N; ++i) {
      std::vector<u64> e(N, 0);
      e[i] = 1;
      ResidueElement b = big_->from_coords(e);
      ResidueElement img = b;
      for (unsigned k = 0; k < n; ++k) img = img.frobenius();
      img -= b;
      for (unsigned j = 0; j < N; ++j) A.at(j, i) = img.coord(j);
    }
    auto basis = fp_linalg::kernel(A, p);
    if (basis.size() != n) throw std::logic_error("subfield kernel has the wrong dimension");
    const u64 count = ipow(p, n);
    if (count > 10'000'000) throw PreconditionError("subfield too large to search for a root");
    const auto& h = small_->modulus();
    bool found = false;
    for (u64 idx = 0; idx < count; ++idx) {
      std::vector<u64> v(N, 0);
      u64 t = idx;
      for (unsigned b = 0; b < n; ++b) {
        const u64 coef = t % p;
        t /= p;
        for (unsigned j = 0; j < N; ++j) v[j] = (v[j] + coef * basis[b][j]) % p;
      }
      ResidueElement x = big_->from_coords(v);
      ResidueElement acc = big_->zero();
      for (std::size_t i = h.size(); i-- > 0;) acc = acc * x + big_->from_int(static_cast<i64>(h[i]));
      if (acc.is_zero() && (!found || x.index() < root_.index())) {
        root_ = x;
        found = true;
      }
    }
    if (!found) throw std::logic_error("no root of the subfield polynomial found");
  }
  ResidueElement pw = big_->one();
  for (unsigned k = 0; k < n; ++k) {
    powers_.push_back(pw);
    pw *= root_;
  }
}

ResidueElement SubfieldEmbedding::embed(const ResidueElement& x) const {
  ResidueElement acc = big_->zero();
  for (std::size_t k = 0; k < powers_.size(); ++k) acc += powers_[k].scaled(x.coord(k));
  return acc;
}

ResidueElement SubfieldEmbedding::restrict(const ResidueElement& x) const {
  const unsigned N = big_->degree(), n = small_->degree();
  fp_linalg::Matrix A(N, n);
  for (unsigned k = 0; k < n; ++k)
    for (unsigned j = 0; j < N; ++j) A.at(j, k) = powers_[k].coord(j);
  std::vector<u64> b(N);
  for (unsigned j = 0; j < N; ++j) b[j] = x.coord(j);
  auto sol = fp_linalg::solve(std::move(A), std::move(b), big_->characteristic());
  if (!sol) throw PreconditionError("residue element does not lie in the subfield");
  return small_->from_coords(*sol);
}

bool SubfieldEmbedding::contains(const ResidueElement& x) const {
  ResidueElement y = x;
  for (unsigned k = 0; k < small_->degree(); ++k) y = y.frobenius();
  return y == x;
}

CycloElement transport(const CycloElement& a, const ContextPtr& ctx) {
  const auto& src = a.context();
  if (src->p() != ctx->p()) throw PreconditionError("transport: contexts have different primes");
  const unsigned ns = src->n_work(), nt = ctx->n_work();
  auto digits = digit_expansion(a.truncated(std::min(a.precision(), ctx->precision()))).digits;
  if (nt == ns) {
    for (auto& d : digits) d = ctx->residue_field()->from_coords(d.coords());
  } else if (ns % nt == 0) {
    SubfieldEmbedding emb(src->residue_field(), nt);
    for (auto& d : digits) d = emb.restrict(d);
  } else if (nt % ns == 0) {
    SubfieldEmbedding emb(ctx->residue_field(), ns);
    for (auto& d : digits) d = emb.embed(d);
  } else {
    throw PreconditionError("transport: residue degrees are not nested");
  }
  const unsigned prec = std::min(a.precision(), ctx->precision());
  return CycloElement::from_digits(ctx, digits).truncated(prec);
}

CycloElement descend_subfield(const CycloElement& a, unsigned n) {
  const auto& ctx = a.context();
  if (n == 0 || ctx->n_work() % n != 0) throw PreconditionError("descend_subfield: n must divide n_work");
  const auto digits = digit_expansion(a).digits;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    ResidueElement d = digits[i];
    for (unsigned k = 0; k < n; ++k) d = d.frobenius();
    if (!(d == digits[i]))
      throw PreconditionError("descend_subfield: digit " + std::to_string(i) +
                              " is not fixed by the degree-" + std::to_string(n) + " Frobenius");
  }
  return transport(a, PrimeContext::make(ctx->p(), n, ctx->precision()));
}

}  // namespace exsplit
