#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "lamos/cim_macro.hpp"

namespace lamos {

/// Split-carry accumulation of per-column MAC results. Each step takes one
/// column sum, emits the low w bits as a finalized product limb, and carries
/// floor((col + carry) / 2^w) into the next column.
///
/// A column produced by a single MAC keeps the carry below
/// lanes * (2^w - 1)  (8160 for the default macro), which is what certifies
/// the 14-bit temporary register of the peripheral circuit. When operands
/// exceed the lane count a column is the sum of `column_slices` MAC results
/// and the bound scales accordingly; the register width is derived from
/// config, never hard-coded.
struct AccState {
  std::uint64_t carry = 0;
  std::vector<std::uint32_t> emitted;
  std::size_t position = 0;
};

inline std::uint64_t carry_bound(const MacroConfig& cfg, std::size_t column_slices = 1) {
  return std::uint64_t{cfg.lanes} * cfg.limb_mask() * column_slices;
}

/// Consumes the column sum at the current position; returns the emitted limb.
inline std::uint32_t accumulate_column(AccState& state, std::uint64_t col_sum,
                                       const MacroConfig& cfg,
                                       std::size_t column_slices = 1) {
  if (col_sum >= (std::uint64_t{column_slices} << cfg.mac_out_bits())) {
    throw std::logic_error("accumulator: column sum exceeds its width bound");
  }
  const std::uint64_t s = col_sum + state.carry;
  const std::uint32_t limb = static_cast<std::uint32_t>(s & cfg.limb_mask());
  state.carry = s >> cfg.limb_bits;
  if (state.carry > carry_bound(cfg, column_slices)) {
    throw std::logic_error("accumulator: carry bound violated");
  }
  state.emitted.push_back(limb);
  ++state.position;
  return limb;
}

/// Adder-tree aggregation of m consecutive column sums (weights differing by
/// 2^w) into one wide value  sum_k col_sums[k] * 2^(w*k).
inline unsigned __int128 aggregate_macros(std::span<const std::uint64_t> col_sums,
                                          const MacroConfig& cfg,
                                          std::size_t column_slices = 1) {
  if (col_sums.empty()) {
    throw std::invalid_argument("accumulator: nothing to aggregate");
  }
  if (cfg.mac_out_bits() + cfg.limb_bits * (col_sums.size() - 1) > 120) {
    throw std::invalid_argument("accumulator: aggregation width exceeds 128 bits");
  }
  unsigned __int128 wide = 0;
  for (std::size_t k = col_sums.size(); k-- > 0;) {
    if (col_sums[k] >= (std::uint64_t{column_slices} << cfg.mac_out_bits())) {
      throw std::logic_error("accumulator: column sum exceeds its width bound");
    }
    wide = (wide << cfg.limb_bits) + col_sums[k];
  }
  return wide;
}

/// Wide variant of accumulate_column: consumes an aggregated value covering
/// `group` consecutive columns, emitting `group` limbs at once. Produces the
/// same limb sequence as column-by-column accumulation.
inline void accumulate_aggregated(AccState& state, unsigned __int128 wide,
                                  std::size_t group, const MacroConfig& cfg,
                                  std::size_t column_slices = 1) {
  unsigned __int128 s = wide + state.carry;
  for (std::size_t k = 0; k < group; ++k) {
    state.emitted.push_back(static_cast<std::uint32_t>(s & cfg.limb_mask()));
    s >>= cfg.limb_bits;
    ++state.position;
  }
  state.carry = static_cast<std::uint64_t>(s);
  if (state.carry > carry_bound(cfg, column_slices)) {
    throw std::logic_error("accumulator: carry bound violated");
  }
}

/// Drains the residual carry once all columns are consumed and pads the
/// emitted sequence to exactly total_limbs; the result is the exact product.
inline std::vector<std::uint32_t> flush(AccState& state, std::size_t total_limbs,
                                        const MacroConfig& cfg) {
  std::uint64_t carry = state.carry;
  state.carry = 0;
  while (carry != 0) {
    state.emitted.push_back(static_cast<std::uint32_t>(carry & cfg.limb_mask()));
    carry >>= cfg.limb_bits;
    ++state.position;
  }
  if (state.emitted.size() > total_limbs) {
    throw std::logic_error("accumulator: emitted more limbs than the product width");
  }
  state.emitted.resize(total_limbs, 0);
  return state.emitted;
}

}  // namespace lamos
