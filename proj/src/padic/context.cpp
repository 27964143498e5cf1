#include "exsplit/context.hpp"

#include <sstream>
#include <stdexcept>

#include "exsplit/errors.hpp"

namespace exsplit {

namespace {

unsigned ceil_log2(unsigned v) {
  unsigned r = 0;
  while ((1u << r) < v) ++r;
  return r;
}

// Horner evaluation of the integer polynomial poly at a point of W_K.
std::vector<u64> w_eval(const PrimeContext& ctx, const std::vector<u64>& poly,
                        std::span<const u64> at) {
  const std::size_t n = ctx.n_work();
  std::vector<u64> acc(n, 0), tmp(n);
  for (std::size_t i = poly.size(); i-- > 0;) {
    ctx.w_mul(acc, at, tmp);
    acc = tmp;
    acc[0] = add_mod(acc[0], poly[i], ctx.coeff_modulus());
  }
  return acc;
}

}  // namespace

std::shared_ptr<const PrimeContext> PrimeContext::make(u64 p, unsigned n_work, unsigned precision) {
  if (p == 2) throw PreconditionError("p must be an odd prime (p = 2 is excluded)");
  if (p < 3 || !is_prime(p)) throw PreconditionError("p must be an odd prime");
  if (p > 1000) throw PreconditionError("p is too large for word-sized coefficient arithmetic");
  if (n_work == 0) throw PreconditionError("n_work must be >= 1");
  const unsigned M = precision == 0 ? static_cast<unsigned>(p + 2) : precision;
  if (M < p + 1) throw PreconditionError("precision M must be >= p+1");

  std::shared_ptr<PrimeContext> ctx(new PrimeContext());
  ctx->p_ = p;
  ctx->n_ = n_work;
  ctx->M_ = M;
  ctx->K_ = static_cast<unsigned>((M + (p - 1) - 1) / (p - 1)) + 1;
  u64 pK = 1;
  for (unsigned i = 0; i < ctx->K_; ++i) {
    if (pK > (u64{1} << 62) / p) throw PreconditionError("precision too large: p^K exceeds 62 bits");
    pK *= p;
  }
  ctx->pK_ = pK;
  ctx->field_ = FiniteField::make(p, n_work);
  ctx->H_ = ctx->field_->modulus();  // entries in [0,p) are already valid lifts

  // E(x) = sum_{j=0}^{p-1} C(p, j+1) (-1)^j x^j, binomials mod p^K.
  std::vector<u64> binom(p + 1, 0);
  binom[0] = 1;
  for (u64 i = 1; i <= p; ++i)
    for (u64 j = i; j > 0; --j) binom[j] = add_mod(binom[j], binom[j - 1], pK);
  ctx->E_.assign(p, 0);
  for (u64 j = 0; j < p; ++j) ctx->E_[j] = (j % 2 == 0) ? binom[j + 1] : sub_mod(0, binom[j + 1], pK);
  if (ctx->E_[0] != p % pK || ctx->E_[p - 1] != 1)
    throw std::logic_error("Eisenstein relation has unexpected shape");
  for (u64 j = 0; j + 1 < p; ++j)
    if (ctx->E_[j] % p != 0) throw std::logic_error("Eisenstein relation: coefficient not divisible by p");

  // Frobenius of W_K: y -> θ, the root of H congruent to y^p, by Newton.
  const std::size_t n = n_work;
  ctx->frob_.assign(n * n, 0);
  if (n == 1) {
    ctx->frob_[0] = 1;
  } else {
    fp_poly::Poly yp = fp_poly::powmod({0, 1}, p, ctx->H_, p);
    std::vector<u64> theta(n, 0);
    for (std::size_t i = 0; i < yp.size(); ++i) theta[i] = yp[i];
    std::vector<u64> dH(ctx->H_.size() - 1);
    for (std::size_t i = 1; i < ctx->H_.size(); ++i) dH[i - 1] = mul_mod(ctx->H_[i], i, pK);
    std::vector<u64> tmp(n);
    const unsigned iters = ceil_log2(ctx->K_) + 1;
    for (unsigned it = 0; it < iters; ++it) {
      auto hv = w_eval(*ctx, ctx->H_, theta);
      auto dv = ctx->w_inverse(w_eval(*ctx, dH, theta));
      ctx->w_mul(hv, dv, tmp);
      for (std::size_t i = 0; i < n; ++i) theta[i] = sub_mod(theta[i], tmp[i], pK);
    }
    auto check = w_eval(*ctx, ctx->H_, theta);
    for (u64 v : check)
      if (v != 0) throw std::logic_error("Frobenius root did not converge");
    std::vector<u64> pw(n, 0);
    pw[0] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) ctx->frob_[j * n + i] = pw[j];
      ctx->w_mul(pw, theta, tmp);
      pw = tmp;
    }
  }
  // φ has order n, so φ^{-1} = φ^{n-1}: column i is φ^{n-1}(y^i).
  ctx->frob_inv_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<u64> col(n, 0), nxt(n);
    col[i] = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      ctx->w_frobenius(col, nxt);
      col = nxt;
    }
    for (std::size_t j = 0; j < n; ++j) ctx->frob_inv_[j * n + i] = col[j];
  }
  return ctx;
}

std::string PrimeContext::describe() const {
  std::ostringstream os;
  os << "p=" << p_ << " n_work=" << n_ << " M=" << M_ << " K=" << K_;
  return os.str();
}

void PrimeContext::w_mul(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const {
  const std::size_t n = n_;
  if (n == 1) {
    out[0] = mul_mod(a[0], b[0], pK_);
    return;
  }
  std::vector<unsigned __int128> prod(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j)
      prod[i + j] = (prod[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % pK_;
  }
  std::vector<u64> r(prod.size());
  for (std::size_t i = 0; i < prod.size(); ++i) r[i] = static_cast<u64>(prod[i]);
  for (std::size_t d = r.size(); d-- > n;) {
    const u64 f = r[d];
    if (f == 0) continue;
    r[d] = 0;
    for (std::size_t i = 0; i < n; ++i) r[d - n + i] = sub_mod(r[d - n + i], mul_mod(f, H_[i], pK_), pK_);
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = r[i];
}

void PrimeContext::w_frobenius(std::span<const u64> a, std::span<u64> out) const {
  const std::size_t n = n_;
  std::vector<u64> r(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) r[j] = add_mod(r[j], mul_mod(frob_[j * n + i], a[i], pK_), pK_);
  for (std::size_t j = 0; j < n; ++j) out[j] = r[j];
}

void PrimeContext::w_frobenius_inverse(std::span<const u64> a, std::span<u64> out) const {
  const std::size_t n = n_;
  std::vector<u64> r(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) r[j] = add_mod(r[j], mul_mod(frob_inv_[j * n + i], a[i], pK_), pK_);
  for (std::size_t j = 0; j < n; ++j) out[j] = r[j];
}

std::vector<u64> PrimeContext::w_inverse(std::span<const u64> a) const {
  ResidueElement r = w_reduce(a);
  if (r.is_zero()) throw PreconditionError("coefficient is not a unit");
  std::vector<u64> x = r.inverse().coords();
  std::vector<u64> ax(n_), corr(n_);
  // Newton: x <- x (2 - a x); p-adic precision doubles each step.
  for (unsigned it = 0; it <= ceil_log2(K_) + 1; ++it) {
    w_mul(a, x, ax);
    for (std::size_t i = 0; i < n_; ++i) ax[i] = sub_mod(i == 0 ? 2 % pK_ : 0, ax[i], pK_);
    w_mul(x, ax, corr);
    x = corr;
  }
  return x;
}

std::vector<u64> PrimeContext::w_pow(std::span<const u64> a, u64 e) const {
  std::vector<u64> r(n_, 0), b(a.begin(), a.end()), tmp(n_);
  r[0] = 1 % pK_;
  while (e) {
    if (e & 1) {
      w_mul(r, b, tmp);
      r = tmp;
    }
    w_mul(b, b, tmp);
    b = tmp;
    e >>= 1;
  }
  return r;
}

std::vector<u64> PrimeContext::w_teichmuller(const ResidueElement& r) const {
  // The lift T of r is the fixed point of x -> φ^{-1}(x^p); each step gains
  // one p-adic digit, so K steps from any coordinate lift are exact mod p^K.
  std::vector<u64> x(r.coords().begin(), r.coords().end());
  std::vector<u64> tmp(n_);
  for (unsigned it = 0; it < K_; ++it) {
    auto xp = w_pow(x, p_);
    w_frobenius_inverse(xp, tmp);
    x = tmp;
  }
  return x;
}

ResidueElement PrimeContext::w_reduce(std::span<const u64> a) const {
  std::vector<u64> c(n_);
  for (std::size_t i = 0; i < n_; ++i) c[i] = a[i] % p_;
  return ResidueElement(field_, std::move(c));
}

WittCoefficient::WittCoefficient(ContextPtr ctx, std::vector<u64> coords)
    : ctx_(std::move(ctx)), c_(std::move(coords)) {
  if (c_.size() != ctx_->n_work()) throw std::invalid_argument("WittCoefficient: wrong coordinate count");
  for (auto& v : c_) v %= ctx_->coeff_modulus();
}

WittCoefficient WittCoefficient::from_int(ContextPtr ctx, i64 v) {
  std::vector<u64> c(ctx->n_work(), 0);
  c[0] = reduce_signed(v, ctx->coeff_modulus());
  return WittCoefficient(std::move(ctx), std::move(c));
}

WittCoefficient WittCoefficient::lift(ContextPtr ctx, const ResidueElement& r) {
  return WittCoefficient(std::move(ctx), r.coords());
}

WittCoefficient WittCoefficient::operator-() const {
  WittCoefficient r = *this;
  for (auto& v : r.c_) v = sub_mod(0, v, ctx_->coeff_modulus());
  return r;
}

WittCoefficient operator+(const WittCoefficient& a, const WittCoefficient& b) {
  WittCoefficient r = a;
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = add_mod(r.c_[i], b.c_[i], a.ctx_->coeff_modulus());
  return r;
}

WittCoefficient operator-(const WittCoefficient& a, const WittCoefficient& b) { return a + (-b); }

WittCoefficient operator*(const WittCoefficient& a, const WittCoefficient& b) {
  WittCoefficient r = a;
  a.ctx_->w_mul(a.c_, b.c_, r.c_);
  return r;
}

WittCoefficient WittCoefficient::inverse() const { return WittCoefficient(ctx_, ctx_->w_inverse(c_)); }

WittCoefficient WittCoefficient::pow(u64 e) const { return WittCoefficient(ctx_, ctx_->w_pow(c_, e)); }

WittCoefficient WittCoefficient::frobenius() const {
  WittCoefficient r = *this;
  ctx_->w_frobenius(c_, r.c_);
  return r;
}

WittCoefficient teichmuller(const ContextPtr& ctx, const ResidueElement& r) {
  return WittCoefficient(ctx, ctx->w_teichmuller(r));
}

}  // namespace exsplit
