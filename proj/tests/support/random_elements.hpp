#pragma once

// Seeded generators for property tests.

#include <random>
#include <vector>

#include "exsplit/cyclo.hpp"

namespace exsplit::testing {

using Rng = std::mt19937_64;

inline ResidueElement random_residue(const std::shared_ptr<const FiniteField>& F, Rng& rng) {
  std::uniform_int_distribution<u64> dist(0, F->characteristic() - 1);
  std::vector<u64> c(F->degree());
  for (auto& v : c) v = dist(rng);
  return F->from_coords(c);
}

inline ResidueElement random_nonzero_residue(const std::shared_ptr<const FiniteField>& F, Rng& rng) {
  while (true) {
    auto r = random_residue(F, rng);
    if (!r.is_zero()) return r;
  }
}

/// Uniform raw coefficients mod p^K.
inline CycloElement random_element(const ContextPtr& ctx, Rng& rng) {
  std::uniform_int_distribution<u64> dist(0, ctx->coeff_modulus() - 1);
  std::vector<u64> raw(ctx->rank() * ctx->n_work());
  for (auto& v : raw) v = dist(rng);
  return CycloElement::from_raw(ctx, std::move(raw), ctx->precision());
}

inline CycloElement random_unit(const ContextPtr& ctx, Rng& rng) {
  while (true) {
    auto a = random_element(ctx, rng);
    if (a.is_unit()) return a;
  }
}

/// 1 + π·(random element).
inline CycloElement random_one_unit(const ContextPtr& ctx, Rng& rng) {
  return CycloElement::one(ctx) + random_element(ctx, rng).times_pi();
}

}  // namespace exsplit::testing
