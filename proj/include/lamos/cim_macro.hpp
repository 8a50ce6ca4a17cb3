#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lamos/biguint.hpp"

namespace lamos {

/// Geometry of one SRAM CiM MAC macro. Defaults model a 64x256 8T array
/// running 32 parallel 8-bit multiply-accumulates per cycle.
struct MacroConfig {
  unsigned rows = 64;        // storage rows
  unsigned cols = 256;       // bits per row
  unsigned limb_bits = 8;    // w
  unsigned lanes = 32;       // parallel MAC lanes, cols / limb_bits

  // 2w + ceil(log2(lanes)); 21 bits for the default 32-lane 8-bit macro.
  unsigned mac_out_bits() const {
    return 2 * limb_bits + static_cast<unsigned>(std::bit_width(lanes - 1u));
  }

  std::uint64_t limb_mask() const { return (std::uint64_t{1} << limb_bits) - 1; }

  void validate() const {
    if (limb_bits == 0 || limb_bits > 16) {
      throw std::invalid_argument("macro: limb width must be in [1, 16]");
    }
    if (lanes == 0 || static_cast<std::uint64_t>(lanes) * limb_bits != cols) {
      throw std::invalid_argument("macro: lanes * limb_bits must equal cols");
    }
    if (rows == 0) {
      throw std::invalid_argument("macro: rows must be positive");
    }
  }
};

/// Resident operand limbs laid out as lane slices: slice s, lane j holds
/// limb (lanes*s + j), zero-padded in the last slice.
struct MacroState {
  std::vector<std::vector<std::uint32_t>> slices;

  std::uint32_t stored(std::size_t slice, std::size_t lane) const {
    return slices[slice][lane];
  }
};

/// Stores operand b (padded to t_b limbs) across ceil(t_b / lanes) slices.
inline MacroState store_operand(const MacroConfig& cfg, const BigUint& b, std::size_t t_b) {
  cfg.validate();
  if (t_b == 0) {
    throw std::invalid_argument("macro: resident operand needs at least one limb");
  }
  if (b.limb_bits() != cfg.limb_bits) {
    throw std::invalid_argument("macro: operand limb width differs from macro config");
  }
  const std::vector<std::uint32_t> limbs = b.padded_limbs(t_b);
  const std::size_t slice_count = (t_b + cfg.lanes - 1) / cfg.lanes;
  MacroState state;
  state.slices.assign(slice_count, std::vector<std::uint32_t>(cfg.lanes, 0));
  for (std::size_t i = 0; i < t_b; ++i) {
    state.slices[i / cfg.lanes][i % cfg.lanes] = limbs[i];
  }
  return state;
}

/// One MAC cycle: sum of inputs[j] * stored[slice][j] over all lanes.
/// The result is bounded by lanes * (2^w - 1)^2 < 2^mac_out_bits.
inline std::uint64_t mac_cycle(const MacroConfig& cfg, const MacroState& state,
                               std::size_t slice, std::span<const std::uint32_t> inputs) {
  if (slice >= state.slices.size()) {
    throw std::logic_error("macro: slice index out of range");
  }
  if (inputs.size() != cfg.lanes) {
    throw std::logic_error("macro: input vector must cover all lanes");
  }
  const std::uint64_t mask = cfg.limb_mask();
  const std::vector<std::uint32_t>& row = state.slices[slice];
  std::uint64_t acc = 0;
  for (std::size_t j = 0; j < cfg.lanes; ++j) {
    if (inputs[j] > mask) {
      throw std::logic_error("macro: oversized input limb");
    }
    acc += std::uint64_t{inputs[j]} * row[j];
  }
  if (acc >> cfg.mac_out_bits() != 0) {
    throw std::logic_error("macro: MAC result exceeds output width");
  }
  return acc;
}

/// Lazy input-stream generator for streaming operand a against a resident
/// operand of t_b limbs. Row r, global lane l carries a[r - l] inside the
/// diagonal band 0 <= r - l <= t_a - 1 (and l < t_b), zero elsewhere, so row
/// r paired with every slice computes column sum  col_r = sum_{i+j=r} a_i*b_j.
class InputStream {
 public:
  InputStream(const MacroConfig& cfg, const BigUint& a, std::size_t t_a, std::size_t t_b)
      : cfg_(cfg), limbs_(a.padded_limbs(t_a)), t_a_(t_a), t_b_(t_b) {
    cfg.validate();
    if (t_a == 0 || t_b == 0) {
      throw std::invalid_argument("stream: operands need at least one limb");
    }
    if (a.limb_bits() != cfg.limb_bits) {
      throw std::invalid_argument("stream: operand limb width differs from macro config");
    }
  }

  std::size_t row_count() const { return t_a_ + t_b_ - 1; }
  std::size_t slice_count() const { return (t_b_ + cfg_.lanes - 1) / cfg_.lanes; }
  std::size_t t_a() const { return t_a_; }
  std::size_t t_b() const { return t_b_; }

  std::uint32_t lane_value(std::size_t row, std::size_t global_lane) const {
    if (global_lane >= t_b_ || global_lane > row) return 0;
    const std::size_t i = row - global_lane;
    return i < t_a_ ? limbs_[i] : 0;
  }

  /// Fills the lane vector for (row, slice) into out (cfg.lanes wide).
  void fill_row(std::size_t row, std::size_t slice, std::span<std::uint32_t> out) const {
    const std::size_t base = slice * cfg_.lanes;
    for (std::size_t j = 0; j < cfg_.lanes; ++j) {
      out[j] = lane_value(row, base + j);
    }
  }

 private:
  MacroConfig cfg_;
  std::vector<std::uint32_t> limbs_;
  std::size_t t_a_;
  std::size_t t_b_;
};

/// Optional per-MAC trace hook: (cycle, macro id, slice, input digest, result).
using MacTraceHook = std::function<void(std::uint64_t cycle, unsigned macro, std::size_t slice,
                                        std::uint64_t input_digest, std::uint64_t result)>;

}  // namespace lamos
