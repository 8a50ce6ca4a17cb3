#pragma once

#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "lamos/accumulator.hpp"
#include "lamos/barrett.hpp"
#include "lamos/biguint.hpp"
#include "lamos/cim_macro.hpp"
#include "lamos/scheduler.hpp"

namespace lamos {

/// Per-phase cycle accounting for one modular multiplication.
struct CycleReport {
  std::uint64_t mult1 = 0;
  std::uint64_t mult2 = 0;
  std::uint64_t mult3 = 0;
  std::uint64_t overhead = 0;
  std::uint64_t total = 0;
  double latency_nanos = 0.0;
  bool grouped = false;
  TimingMode timing = TimingMode::kPaperCalibrated;
};

/// Value-level trace of one simulated modular multiplication: the functional
/// intermediates plus the buffer snapshots and MAC event counts of the three
/// multiplication phases.
struct SimTrace {
  ModMulTrace values;
  BigUint c_buffer;                      // distributor output of phase 1
  BigUint u_buffer;                      // distributor output of phase 2
  std::vector<BigUint> input_buffer;     // streamed operand per phase (A, C>>(n-1), E)
  std::uint64_t mac_events[3] = {0, 0, 0};
  std::uint64_t max_carry = 0;
};

struct SimResult {
  BigUint r;
  SimTrace trace;
  CycleReport report;
};

/// floor(x / 2^k) — the shift-array / buffer-routing step.
inline BigUint extract_shifted(const BigUint& x, std::size_t k) { return shr(x, k); }

/// T = C - P followed by refinement into [0, M).
inline std::tuple<BigUint, BigUint, int> subtract_and_refine(const BigUint& c,
                                                             const BigUint& p,
                                                             const BigUint& modulus) {
  if (cmp(c, p) == std::strong_ordering::less) {
    throw std::logic_error("datapath: C < P (quotient estimate exceeded the true quotient)");
  }
  BigUint t = sub(c, p);
  auto [r, count] = refine(t, modulus);
  return {std::move(t), std::move(r), count};
}

struct MultExecution {
  BigUint product;
  std::uint64_t mac_events = 0;
  std::uint64_t schedule_cycles = 0;
  bool grouped = false;
  std::uint64_t max_carry = 0;
};

/// Runs one t_a x t_b multiplication through the macro model: executes the
/// schedule assignment by assignment, buffers per-column partial sums, then
/// finalizes columns in order through the split-carry accumulator.
inline MultExecution execute_mult(const BigUint& stream_op, std::size_t t_a,
                                  const BigUint& resident_op, std::size_t t_b,
                                  const ArchConfig& cfg) {
  cfg.validate();
  const MacroState state = store_operand(cfg.macro, resident_op, t_b);
  const InputStream stream(cfg.macro, stream_op, t_a, t_b);
  const Schedule schedule = build_schedule(t_a, t_b, cfg);

  MultExecution exec;
  exec.grouped = schedule.grouped;
  exec.schedule_cycles = schedule.total_cycles;

  std::vector<std::uint64_t> col_sums(stream.row_count(), 0);
  std::vector<std::uint32_t> lane_buf(cfg.macro.lanes);
  for (const Assignment& a : schedule.assignments) {
    // An assignment window may span more than one resident slice when the
    // tile width exceeds the lane count; split it per slice.
    std::size_t lo = a.lane_lo;
    while (lo < a.lane_hi) {
      const std::size_t slice = lo / cfg.macro.lanes;
      const std::size_t slice_base = slice * cfg.macro.lanes;
      const std::size_t hi = std::min<std::size_t>(a.lane_hi, slice_base + cfg.macro.lanes);
      for (std::size_t j = 0; j < cfg.macro.lanes; ++j) {
        const std::size_t g = slice_base + j;
        lane_buf[j] = (g >= lo && g < hi) ? stream.lane_value(a.row, g) : 0;
      }
      col_sums[a.row] += mac_cycle(cfg.macro, state, slice, lane_buf);
      ++exec.mac_events;
      lo = hi;
    }
  }

  AccState acc;
  const std::size_t slices = stream.slice_count();
  for (std::uint64_t col : col_sums) {
    accumulate_column(acc, col, cfg.macro, slices);
    exec.max_carry = std::max(exec.max_carry, acc.carry);
  }
  const std::vector<std::uint32_t> limbs = flush(acc, t_a + t_b, cfg.macro);
  exec.product = BigUint::from_limbs(limbs, cfg.macro.limb_bits);
  return exec;
}

/// Transaction-level simulation of one full Barrett modular multiplication
/// through the three-phase datapath. Functionally bit-exact with the Barrett
/// engine; cycle accounting follows the configured timing mode.
inline SimResult simulate_modmul(const BarrettContext& ctx, const BigUint& a,
                                 const BigUint& b, const ArchConfig& cfg) {
  cfg.validate();
  const unsigned w = cfg.macro.limb_bits;
  if (a.limb_bits() != w || b.limb_bits() != w || ctx.modulus.limb_bits() != w) {
    throw std::invalid_argument("datapath: operand limb width differs from macro config");
  }
  if (ctx.n % w != 0) {
    throw std::invalid_argument("datapath: n must be a multiple of the limb width");
  }
  if (cmp(a, ctx.modulus) != std::strong_ordering::less ||
      cmp(b, ctx.modulus) != std::strong_ordering::less) {
    throw std::out_of_range("datapath: operands must be below the modulus");
  }

  const std::size_t n = ctx.n;
  const std::size_t t = n / w;
  const std::size_t t_shifted = (n + 1 + w - 1) / w;  // floor(C / 2^(n-1)) limbs
  const std::size_t t_mprime = (n + 2 + w - 1) / w;   // M' can occupy n+2 bits

  SimResult result;
  SimTrace& trace = result.trace;

  // Phase 1: A streams against resident B, the distributor fills the C buffer.
  const MultExecution m1 = execute_mult(a, t, b, t, cfg);
  trace.values.c = m1.product;
  trace.c_buffer = m1.product;
  trace.input_buffer.push_back(a);

  // Phase 2: the shifted C streams against resident M'.
  const BigUint c_shifted = extract_shifted(trace.values.c, n - 1);
  const MultExecution m2 = execute_mult(c_shifted, t_shifted, ctx.m_prime, t_mprime, cfg);
  trace.values.u = m2.product;
  trace.u_buffer = m2.product;
  trace.input_buffer.push_back(c_shifted);

  // Phase 3: E streams against resident M; P goes straight to the subtractor.
  trace.values.e = extract_shifted(trace.values.u, n + 1);
  const MultExecution m3 = execute_mult(trace.values.e, t, ctx.modulus, t, cfg);
  trace.values.p = m3.product;
  trace.input_buffer.push_back(trace.values.e);

  auto [t_val, r_val, count] = subtract_and_refine(trace.values.c, trace.values.p, ctx.modulus);
  trace.values.t = std::move(t_val);
  trace.values.r = r_val;
  trace.values.refine_count = count;

  trace.mac_events[0] = m1.mac_events;
  trace.mac_events[1] = m2.mac_events;
  trace.mac_events[2] = m3.mac_events;
  trace.max_carry = std::max({m1.max_carry, m2.max_carry, m3.max_carry});

  CycleReport& report = result.report;
  report.timing = cfg.timing;
  if (cfg.timing == TimingMode::kPaperCalibrated) {
    const CycleBreakdown breakdown = cycles_modmul(n, cfg);
    report.mult1 = breakdown.mult1;
    report.mult2 = breakdown.mult2;
    report.mult3 = breakdown.mult3;
    report.overhead = breakdown.overhead;
    report.grouped = breakdown.grouped;
  } else {
    report.mult1 = m1.schedule_cycles;
    report.mult2 = m2.schedule_cycles;
    report.mult3 = m3.schedule_cycles;
    report.overhead = cfg.overhead_cycles;
    report.grouped = m1.grouped;
  }
  report.total = report.mult1 + report.mult2 + report.mult3 + report.overhead;
  report.latency_nanos = latency_ns(report.total, cfg.clock_mhz);

  result.r = std::move(r_val);
  return result;
}

}  // namespace lamos
