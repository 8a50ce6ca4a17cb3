#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "lamos/biguint.hpp"

namespace lamos {

/// Precomputed reduction context for one modulus. The modulus must be
/// normalized (top bit of the n-bit window set); the two-subtraction
/// refinement bound depends on it.
struct BarrettContext {
  std::size_t n = 0;     // operand bit width
  BigUint modulus;       // M, 2^(n-1) <= M < 2^n
  BigUint m_prime;       // floor(2^(2n) / M)
};

/// Full intermediate record of one modular multiplication.
struct ModMulTrace {
  BigUint c;             // A * B
  BigUint u;             // floor(C / 2^(n-1)) * M'
  BigUint e;             // floor(u / 2^(n+1)), estimated quotient
  BigUint p;             // E * M
  BigUint t;             // C - P, in [0, 3M)
  BigUint r;             // final result, in [0, M)
  int refine_count = 0;  // final subtractions, 0..2
};

inline BarrettContext precompute_context(const BigUint& modulus, std::size_t n) {
  if (n < 2) {
    throw std::domain_error("barrett: bit width must be at least 2");
  }
  if (modulus.bit_length() != n) {
    throw std::domain_error("barrett: modulus must have top bit set (2^(n-1) <= M < 2^n)");
  }
  BarrettContext ctx;
  ctx.n = n;
  ctx.modulus = modulus;
  ctx.m_prime = div_floor(BigUint::pow2(2 * n, modulus.limb_bits()), modulus).quotient;
  return ctx;
}

/// Quotient estimate E = floor(floor(C / 2^(n-1)) * M' / 2^(n+1)).
/// For C < M^2 the true quotient q = floor(C / M) satisfies q - 2 <= E <= q.
inline BigUint estimate_quotient(const BarrettContext& ctx, const BigUint& c) {
  const BigUint u = mul_schoolbook(shr(c, ctx.n - 1), ctx.m_prime);
  return shr(u, ctx.n + 1);
}

/// Reduces T in [0, 3M) to [0, M) by at most two subtractions of M.
inline std::pair<BigUint, int> refine(BigUint t, const BigUint& modulus) {
  int count = 0;
  while (cmp(t, modulus) != std::strong_ordering::less) {
    if (count == 2) {
      throw std::logic_error("barrett: refinement input >= 3M (quotient estimate broken)");
    }
    t = sub(t, modulus);
    ++count;
  }
  return {std::move(t), count};
}

inline ModMulTrace barrett_modmul(const BarrettContext& ctx, const BigUint& a,
                                  const BigUint& b) {
  if (cmp(a, ctx.modulus) != std::strong_ordering::less ||
      cmp(b, ctx.modulus) != std::strong_ordering::less) {
    throw std::out_of_range("barrett: operands must be below the modulus");
  }
  ModMulTrace trace;
  trace.c = mul_schoolbook(a, b);
  trace.u = mul_schoolbook(shr(trace.c, ctx.n - 1), ctx.m_prime);
  trace.e = shr(trace.u, ctx.n + 1);
  trace.p = mul_schoolbook(trace.e, ctx.modulus);
  trace.t = sub(trace.c, trace.p);
  auto [r, count] = refine(trace.t, ctx.modulus);
  trace.r = std::move(r);
  trace.refine_count = count;
  return trace;
}

}  // namespace lamos
