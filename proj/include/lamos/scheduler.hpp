#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lamos/cim_macro.hpp"

namespace lamos {

enum class GroupingMode { kOff, kOn, kAuto };
enum class TimingMode { kPaperCalibrated, kStrict };

/// Architecture-level configuration: macro pool, grouping tile geometry,
/// non-multiplication overhead and clock.
struct ArchConfig {
  unsigned macro_count = 2;
  MacroConfig macro{};
  GroupingMode grouping = GroupingMode::kAuto;
  unsigned tile_rows = 32;
  unsigned tile_lanes = 16;          // limbs per tile, 128 bits at w=8
  unsigned overhead_cycles = 8;      // calibrated shift/subtract/refine cost
  double clock_mhz = 400.0;
  TimingMode timing = TimingMode::kPaperCalibrated;

  void validate() const {
    macro.validate();
    if (macro_count == 0) throw std::invalid_argument("arch: need at least one macro");
    if (tile_rows == 0 || tile_lanes == 0) {
      throw std::invalid_argument("arch: tile dimensions must be positive");
    }
    if (clock_mhz <= 0) throw std::invalid_argument("arch: clock must be positive");
    if ((std::uint64_t{macro.lanes} * macro_count) % tile_lanes != 0) {
      throw std::invalid_argument("arch: tile_lanes must divide lanes * macro_count");
    }
  }
};

struct Tile {
  std::size_t row0 = 0;
  std::size_t lane0 = 0;
  std::size_t rows = 0;   // clipped to the grid
  std::size_t lanes = 0;
};

/// The (row, lane) workload grid of one multiplication: rows are stream
/// cycles (columns of the product), lanes are resident-operand limb indices.
/// A cell (r, j) is in the band iff 0 <= r - j <= t_a - 1.
struct TileGrid {
  std::size_t t_a = 0;
  std::size_t t_b = 0;
  std::size_t grid_rows = 0;   // t_a + t_b - 1
  std::size_t grid_lanes = 0;  // t_b
  unsigned tile_rows = 0;
  unsigned tile_lanes = 0;
  std::size_t total_tiles = 0;
  std::size_t zero_tiles = 0;
  std::vector<Tile> nonzero;

  bool in_band(std::size_t row, std::size_t lane) const {
    return lane <= row && row - lane <= t_a - 1;
  }

  double workload_reduction() const {
    return total_tiles == 0 ? 0.0
                            : static_cast<double>(zero_tiles) / static_cast<double>(total_tiles);
  }
};

/// Partitions a rectangular stream grid into tiles and classifies each tile
/// as zero (no band cell) analytically from its corner (r - j) interval.
inline TileGrid build_tile_grid_rect(std::size_t t_a, std::size_t t_b, unsigned tile_rows,
                                     unsigned tile_lanes) {
  if (t_a == 0 || t_b == 0) throw std::invalid_argument("grid: operands need limbs");
  if (tile_rows == 0 || tile_lanes == 0) {
    throw std::invalid_argument("grid: tile dimensions must be positive");
  }
  TileGrid grid;
  grid.t_a = t_a;
  grid.t_b = t_b;
  grid.grid_rows = t_a + t_b - 1;
  grid.grid_lanes = t_b;
  grid.tile_rows = tile_rows;
  grid.tile_lanes = tile_lanes;
  const std::size_t row_blocks = (grid.grid_rows + tile_rows - 1) / tile_rows;
  const std::size_t lane_blocks = (grid.grid_lanes + tile_lanes - 1) / tile_lanes;
  grid.total_tiles = row_blocks * lane_blocks;
  for (std::size_t rb = 0; rb < row_blocks; ++rb) {
    for (std::size_t lb = 0; lb < lane_blocks; ++lb) {
      Tile tile;
      tile.row0 = rb * tile_rows;
      tile.lane0 = lb * tile_lanes;
      tile.rows = std::min<std::size_t>(tile_rows, grid.grid_rows - tile.row0);
      tile.lanes = std::min<std::size_t>(tile_lanes, grid.grid_lanes - tile.lane0);
      const std::size_t r_hi = tile.row0 + tile.rows - 1;
      const std::size_t j_hi = tile.lane0 + tile.lanes - 1;
      // Zero iff max(r - j) < 0 or min(r - j) > t_a - 1 over the tile.
      const bool zero = r_hi < tile.lane0 || (tile.row0 > j_hi && tile.row0 - j_hi > t_a - 1);
      if (zero) {
        ++grid.zero_tiles;
      } else {
        grid.nonzero.push_back(tile);
      }
    }
  }
  return grid;
}

/// Square t x t multiplication grid.
inline TileGrid build_tile_grid(std::size_t t, unsigned tile_rows, unsigned tile_lanes) {
  return build_tile_grid_rect(t, t, tile_rows, tile_lanes);
}

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

/// Naive mapping: every stream row needs ceil(t_b / lanes) slice MACs and the
/// m macros process columns in parallel.
inline std::uint64_t cycles_mult_naive_rect(std::size_t t_a, std::size_t t_b,
                                            const ArchConfig& cfg) {
  const std::uint64_t rows = t_a + t_b - 1;
  const std::uint64_t slices = ceil_div(t_b, cfg.macro.lanes);
  return ceil_div(rows * slices, cfg.macro_count);
}

inline std::uint64_t cycles_mult_naive(std::size_t t, const ArchConfig& cfg) {
  if (t == 0) throw std::invalid_argument("cycles: limb count must be positive");
  return cycles_mult_naive_rect(t, t, cfg);
}

/// Grouped mapping: only nonzero tiles survive and the macro pool sustains
/// lanes * m limb-MACs per cycle over the surviving work.
inline std::uint64_t cycles_mult_grouped_rect(std::size_t t_a, std::size_t t_b,
                                              const ArchConfig& cfg) {
  const TileGrid grid = build_tile_grid_rect(t_a, t_b, cfg.tile_rows, cfg.tile_lanes);
  const std::uint64_t work =
      static_cast<std::uint64_t>(grid.nonzero.size()) * cfg.tile_rows * cfg.tile_lanes;
  return ceil_div(work, std::uint64_t{cfg.macro.lanes} * cfg.macro_count);
}

inline std::uint64_t cycles_mult_grouped(std::size_t t, const ArchConfig& cfg) {
  if (t == 0) throw std::invalid_argument("cycles: limb count must be positive");
  return cycles_mult_grouped_rect(t, t, cfg);
}

/// Grouping is applied only when it does not exceed the naive mapping.
inline bool grouping_effective_rect(std::size_t t_a, std::size_t t_b, const ArchConfig& cfg) {
  if (cfg.grouping == GroupingMode::kOff) return false;
  return cycles_mult_grouped_rect(t_a, t_b, cfg) <= cycles_mult_naive_rect(t_a, t_b, cfg);
}

inline std::uint64_t cycles_mult_rect(std::size_t t_a, std::size_t t_b, const ArchConfig& cfg) {
  return grouping_effective_rect(t_a, t_b, cfg) ? cycles_mult_grouped_rect(t_a, t_b, cfg)
                                                : cycles_mult_naive_rect(t_a, t_b, cfg);
}

struct CycleBreakdown {
  std::uint64_t mult1 = 0;
  std::uint64_t mult2 = 0;
  std::uint64_t mult3 = 0;
  std::uint64_t overhead = 0;
  bool grouped = false;

  std::uint64_t total() const { return mult1 + mult2 + mult3 + overhead; }
};

/// Paper-calibrated modular-multiplication cost: three t x t limb products
/// plus the fixed non-multiplication overhead.
inline CycleBreakdown cycles_modmul(std::size_t n, const ArchConfig& cfg) {
  cfg.validate();
  if (n == 0 || n % cfg.macro.limb_bits != 0) {
    throw std::invalid_argument("cycles: n must be a positive multiple of the limb width");
  }
  const std::size_t t = n / cfg.macro.limb_bits;
  CycleBreakdown breakdown;
  breakdown.grouped = grouping_effective_rect(t, t, cfg);
  const std::uint64_t per_mult = breakdown.grouped ? cycles_mult_grouped(t, cfg)
                                                   : cycles_mult_naive(t, cfg);
  breakdown.mult1 = breakdown.mult2 = breakdown.mult3 = per_mult;
  breakdown.overhead = cfg.overhead_cycles;
  return breakdown;
}

/// One scheduled MAC: at `cycle`, slot `macro` consumes stream row `row`
/// over resident lanes [lane_lo, lane_hi). In grouped mode a physical macro
/// hosts lanes / tile_lanes slots, so slot ids range over that widened pool.
struct Assignment {
  std::uint64_t cycle = 0;
  unsigned macro = 0;
  std::size_t row = 0;
  std::size_t lane_lo = 0;
  std::size_t lane_hi = 0;
};

struct Schedule {
  std::vector<Assignment> assignments;
  std::uint64_t total_cycles = 0;
  bool grouped = false;
};

/// Builds the exact-coverage schedule for one t_a x t_b multiplication.
/// Naive mode walks (row, slice) units column-major, round-robin over macros.
/// Grouped mode walks nonzero tiles row-by-row; clipped tiles still consume
/// their full tile_rows slot budget so the total matches the cycle formula.
inline Schedule build_schedule(std::size_t t_a, std::size_t t_b, const ArchConfig& cfg) {
  cfg.validate();
  if (t_a == 0 || t_b == 0) throw std::invalid_argument("schedule: operands need limbs");
  Schedule schedule;
  schedule.grouped = grouping_effective_rect(t_a, t_b, cfg);
  if (!schedule.grouped) {
    const std::size_t rows = t_a + t_b - 1;
    const std::size_t slices = ceil_div(t_b, cfg.macro.lanes);
    schedule.assignments.reserve(rows * slices);
    std::uint64_t unit = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t s = 0; s < slices; ++s, ++unit) {
        Assignment a;
        a.cycle = unit / cfg.macro_count;
        a.macro = static_cast<unsigned>(unit % cfg.macro_count);
        a.row = r;
        a.lane_lo = s * cfg.macro.lanes;
        a.lane_hi = std::min<std::size_t>(a.lane_lo + cfg.macro.lanes, t_b);
        schedule.assignments.push_back(a);
      }
    }
    schedule.total_cycles = ceil_div(unit, cfg.macro_count);
    return schedule;
  }

  const TileGrid grid = build_tile_grid_rect(t_a, t_b, cfg.tile_rows, cfg.tile_lanes);
  const std::uint64_t slots_per_cycle =
      std::uint64_t{cfg.macro.lanes} * cfg.macro_count / cfg.tile_lanes;
  std::uint64_t unit = 0;
  for (const Tile& tile : grid.nonzero) {
    for (std::size_t dr = 0; dr < cfg.tile_rows; ++dr, ++unit) {
      if (dr >= tile.rows) continue;  // padded slot of a clipped tile
      Assignment a;
      a.cycle = unit / slots_per_cycle;
      a.macro = static_cast<unsigned>(unit % slots_per_cycle);
      a.row = tile.row0 + dr;
      a.lane_lo = tile.lane0;
      a.lane_hi = tile.lane0 + tile.lanes;
      schedule.assignments.push_back(a);
    }
  }
  schedule.total_cycles = ceil_div(unit, slots_per_cycle);
  return schedule;
}

inline double latency_ns(std::uint64_t cycles, double clock_mhz) {
  if (clock_mhz <= 0) throw std::invalid_argument("latency: clock must be positive");
  return static_cast<double>(cycles) * 1000.0 / clock_mhz;
}

/// Debug dump: one `cycle,macro,row,lane_lo,lane_hi` line per assignment.
inline void dump_schedule(const Schedule& schedule, std::ostream& os) {
  for (const Assignment& a : schedule.assignments) {
    os << a.cycle << ',' << a.macro << ',' << a.row << ',' << a.lane_lo << ',' << a.lane_hi
       << '\n';
  }
}

}  // namespace lamos
