#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lamos/biguint.hpp"

namespace lamos {

/// Uniform value with exactly `bits` random bits (top bit not forced).
inline BigUint random_bits(std::mt19937_64& rng, std::size_t bits, unsigned limb_bits) {
  BigUint acc(limb_bits);
  std::vector<std::uint32_t> limbs;
  const std::uint64_t mask = limb_bits >= 32 ? 0xFFFFFFFFull : (1ull << limb_bits) - 1;
  std::size_t produced = 0;
  while (produced < bits) {
    std::uint32_t limb = static_cast<std::uint32_t>(rng() & mask);
    if (bits - produced < limb_bits) {
      limb &= (std::uint32_t{1} << (bits - produced)) - 1;
    }
    limbs.push_back(limb);
    produced += limb_bits;
  }
  return BigUint::from_limbs(std::move(limbs), limb_bits);
}

/// Uniform value in [0, bound) by rejection.
inline BigUint random_below(std::mt19937_64& rng, const BigUint& bound) {
  const std::size_t bits = bound.bit_length();
  for (;;) {
    BigUint candidate = random_bits(rng, bits, bound.limb_bits());
    if (cmp(candidate, bound) == std::strong_ordering::less) return candidate;
  }
}

/// Random normalized n-bit modulus (top bit set).
inline BigUint random_modulus(std::mt19937_64& rng, std::size_t n, unsigned limb_bits) {
  return add(random_bits(rng, n - 1, limb_bits), BigUint::pow2(n - 1, limb_bits));
}

}  // namespace lamos
