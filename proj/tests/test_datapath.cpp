#include <doctest.h>

#include <cstdint>
#include <random>

#include "lamos/datapath.hpp"
#include "lamos/random.hpp"

using lamos::ArchConfig;
using lamos::BarrettContext;
using lamos::BigUint;
using lamos::GroupingMode;
using lamos::TimingMode;

namespace {

ArchConfig config(unsigned macros, GroupingMode mode = GroupingMode::kAuto,
                  TimingMode timing = TimingMode::kPaperCalibrated) {
  ArchConfig cfg;
  cfg.macro_count = macros;
  cfg.grouping = mode;
  cfg.timing = timing;
  return cfg;
}

void check_against_engine(std::size_t n, unsigned macros, GroupingMode mode,
                          std::mt19937_64& rng) {
  const BigUint m = lamos::random_modulus(rng, n, 8);
  const BarrettContext ctx = lamos::precompute_context(m, n);
  const BigUint a = lamos::random_below(rng, m);
  const BigUint b = lamos::random_below(rng, m);

  const auto expected = lamos::barrett_modmul(ctx, a, b);
  const auto sim = lamos::simulate_modmul(ctx, a, b, config(macros, mode));

  REQUIRE(sim.trace.values.c == expected.c);
  REQUIRE(sim.trace.values.u == expected.u);
  REQUIRE(sim.trace.values.e == expected.e);
  REQUIRE(sim.trace.values.p == expected.p);
  REQUIRE(sim.trace.values.t == expected.t);
  REQUIRE(sim.r == expected.r);
  REQUIRE(sim.trace.values.refine_count == expected.refine_count);
  REQUIRE(sim.r == div_floor(mul_schoolbook(a, b), m).remainder);
  REQUIRE(sim.trace.c_buffer == expected.c);
  REQUIRE(sim.trace.u_buffer == expected.u);
}

}  // namespace

TEST_SUITE_BEGIN("datapath");

TEST_CASE("extract_shifted") {
  const BigUint x = BigUint::from_u64(11223);
  CHECK(lamos::extract_shifted(x, 0) == x);
  CHECK(lamos::extract_shifted(x, 9).to_u64() == 21);

  std::mt19937_64 rng(12);
  for (int i = 0; i < 10000; ++i) {
    const BigUint v = lamos::random_bits(rng, 1 + rng() % 300, 8);
    const std::size_t k = rng() % 320;
    CHECK(lamos::extract_shifted(v, k) == shr(v, k));
  }
}

TEST_CASE("subtract_and_refine") {
  const BigUint m = BigUint::from_u64(251);
  {
    const auto [t, r, count] = lamos::subtract_and_refine(m, m, m);
    CHECK(t.is_zero());
    CHECK(r.is_zero());
    CHECK(count == 0);
  }
  {
    // Worked n=8 example: C = 5535, P = 21 * 251 = 5271.
    const auto [t, r, count] =
        lamos::subtract_and_refine(BigUint::from_u64(5535), BigUint::from_u64(5271), m);
    CHECK(t.to_u64() == 264);
    CHECK(r.to_u64() == 13);
    CHECK(count == 1);
  }
  CHECK_THROWS_AS(lamos::subtract_and_refine(BigUint::from_u64(1), BigUint::from_u64(2), m),
                  std::logic_error);
}

TEST_CASE("execute_mult equals the oracle across grouping modes") {
  std::mt19937_64 rng(21);
  for (std::size_t t : {2u, 32u, 33u, 64u, 128u}) {
    for (GroupingMode mode : {GroupingMode::kOff, GroupingMode::kOn}) {
      for (int rep = 0; rep < 10; ++rep) {
        const BigUint a = lamos::random_bits(rng, t * 8, 8);
        const BigUint b = lamos::random_bits(rng, t * 8, 8);
        const auto exec = lamos::execute_mult(a, t, b, t, config(2, mode));
        REQUIRE(exec.product == mul_schoolbook(a, b));
      }
    }
  }
}

TEST_CASE("exhaustive w=4 products, t <= 2") {
  ArchConfig cfg = config(2);
  cfg.macro.limb_bits = 4;
  cfg.macro.lanes = 64;
  for (std::uint64_t a = 0; a < 256; ++a) {
    for (std::uint64_t b = 0; b < 256; ++b) {
      const auto exec = lamos::execute_mult(BigUint::from_u64(a, 4), 2,
                                            BigUint::from_u64(b, 4), 2, cfg);
      REQUIRE(exec.product.to_u64() == a * b);
    }
  }
}

TEST_CASE("simulation matches engine and oracle on every intermediate") {
  std::mt19937_64 rng(2025);
  for (std::size_t n : {256u, 512u}) {
    for (GroupingMode mode : {GroupingMode::kOff, GroupingMode::kOn}) {
      for (int rep = 0; rep < 20; ++rep) check_against_engine(n, 2, mode, rng);
    }
  }
  for (int rep = 0; rep < 5; ++rep) check_against_engine(1024, 4, GroupingMode::kAuto, rng);
}

TEST_CASE("zero operand keeps the dataflow shape") {
  std::mt19937_64 rng(8);
  const BigUint m = lamos::random_modulus(rng, 256, 8);
  const BarrettContext ctx = lamos::precompute_context(m, 256);
  const auto sim = lamos::simulate_modmul(ctx, BigUint(8), lamos::random_below(rng, m),
                                          config(2));
  CHECK(sim.r.is_zero());
  CHECK(sim.trace.values.c.is_zero());
  CHECK(sim.report.total == 104);  // cycle count is input-independent
  CHECK(sim.trace.max_carry == 0);
}

TEST_CASE("paper-mode cycle reports reproduce published totals") {
  std::mt19937_64 rng(4);
  const BigUint m256 = lamos::random_modulus(rng, 256, 8);
  const BarrettContext ctx256 = lamos::precompute_context(m256, 256);
  const BigUint a = lamos::random_below(rng, m256);
  const BigUint b = lamos::random_below(rng, m256);

  const auto m2 = lamos::simulate_modmul(ctx256, a, b, config(2));
  CHECK(m2.report.total == 104);
  CHECK(m2.report.latency_nanos == doctest::Approx(260.0));

  const auto m8 = lamos::simulate_modmul(ctx256, a, b, config(8));
  CHECK(m8.report.total == 32);

  const BigUint m1024 = lamos::random_modulus(rng, 1024, 8);
  const BarrettContext ctx1024 = lamos::precompute_context(m1024, 1024);
  const auto g = lamos::simulate_modmul(ctx1024, lamos::random_below(rng, m1024),
                                        lamos::random_below(rng, m1024), config(4));
  CHECK(g.report.mult1 == 160);
  CHECK(g.report.grouped);
}

TEST_CASE("strict timing charges actual stream lengths") {
  std::mt19937_64 rng(6);
  const BigUint m = lamos::random_modulus(rng, 256, 8);
  const BarrettContext ctx = lamos::precompute_context(m, 256);
  const BigUint a = lamos::random_below(rng, m);
  const BigUint b = lamos::random_below(rng, m);

  const auto paper = lamos::simulate_modmul(ctx, a, b, config(2));
  const auto strict =
      lamos::simulate_modmul(ctx, a, b, config(2, GroupingMode::kAuto, TimingMode::kStrict));
  CHECK(strict.r == paper.r);
  CHECK(strict.report.mult1 == paper.report.mult1);  // phase 1 is a true t x t product
  CHECK(strict.report.mult2 > paper.report.mult2);   // (n+1)-bit operands cost extra slices
  CHECK(strict.report.total > paper.report.total);
}

TEST_CASE("naive and grouped traces are identical, only the report differs") {
  std::mt19937_64 rng(14);
  const BigUint m = lamos::random_modulus(rng, 1024, 8);
  const BarrettContext ctx = lamos::precompute_context(m, 1024);
  const BigUint a = lamos::random_below(rng, m);
  const BigUint b = lamos::random_below(rng, m);

  const auto naive = lamos::simulate_modmul(ctx, a, b, config(2, GroupingMode::kOff));
  const auto grouped = lamos::simulate_modmul(ctx, a, b, config(2, GroupingMode::kOn));
  CHECK(naive.trace.values.u == grouped.trace.values.u);
  CHECK(naive.trace.values.p == grouped.trace.values.p);
  CHECK(naive.r == grouped.r);
  CHECK(naive.report.total == 1538);
  CHECK(grouped.report.total == 968);
}

TEST_SUITE_END();
