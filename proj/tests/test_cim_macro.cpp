#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "lamos/cim_macro.hpp"
#include "lamos/random.hpp"

using lamos::BigUint;
using lamos::InputStream;
using lamos::MacroConfig;
using lamos::MacroState;

namespace {

// Recomputes the product from per-column MAC results over the generated
// stream and compares with the schoolbook oracle.
void check_column_correctness(std::size_t t, unsigned seed) {
  const MacroConfig cfg;
  std::mt19937_64 rng(seed);
  const BigUint a = lamos::random_bits(rng, t * 8, 8);
  const BigUint b = lamos::random_bits(rng, t * 8, 8);
  const MacroState state = store_operand(cfg, b, t);
  const InputStream stream(cfg, a, t, t);

  // Sum col_r * 2^(8r) via limb-carry propagation.
  BigUint total(8);
  std::vector<std::uint32_t> lanes(cfg.lanes);
  for (std::size_t r = 0; r < stream.row_count(); ++r) {
    std::uint64_t col = 0;
    for (std::size_t s = 0; s < stream.slice_count(); ++s) {
      stream.fill_row(r, s, lanes);
      col += mac_cycle(cfg, state, s, lanes);
    }
    total = add(total, shl(BigUint::from_u64(col, 8), 8 * r));
  }
  REQUIRE(total == mul_schoolbook(a, b));
}

}  // namespace

TEST_SUITE_BEGIN("cim_macro");

TEST_CASE("config invariants") {
  MacroConfig cfg;
  cfg.validate();
  CHECK(cfg.lanes == 32);
  CHECK(cfg.mac_out_bits() == 21);

  MacroConfig w4 = cfg;
  w4.limb_bits = 4;
  w4.lanes = 64;
  w4.validate();
  CHECK(w4.mac_out_bits() == 14);

  MacroConfig bad = cfg;
  bad.lanes = 31;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("store_operand slicing and padding") {
  const MacroConfig cfg;
  std::mt19937_64 rng(1);
  CHECK(store_operand(cfg, lamos::random_bits(rng, 256, 8), 32).slices.size() == 1);
  CHECK(store_operand(cfg, lamos::random_bits(rng, 1024, 8), 128).slices.size() == 4);

  const MacroState tiny = store_operand(cfg, BigUint::from_u64(7), 1);
  REQUIRE(tiny.slices.size() == 1);
  CHECK(tiny.stored(0, 0) == 7);
  for (std::size_t j = 1; j < cfg.lanes; ++j) CHECK(tiny.stored(0, j) == 0);
}

TEST_CASE("mac_cycle") {
  const MacroConfig cfg;
  std::vector<std::uint32_t> maxed(cfg.lanes, 255);
  const MacroState state = store_operand(cfg, BigUint::from_limbs(maxed, 8), 32);

  std::vector<std::uint32_t> zeros(cfg.lanes, 0);
  CHECK(mac_cycle(cfg, state, 0, zeros) == 0);

  std::vector<std::uint32_t> inputs(cfg.lanes, 255);
  CHECK(mac_cycle(cfg, state, 0, inputs) == 2080800);  // 32 * 255^2 < 2^21

  std::vector<std::uint32_t> hot(cfg.lanes, 0);
  hot[5] = 3;
  CHECK(mac_cycle(cfg, state, 0, hot) == 3 * 255);

  std::vector<std::uint32_t> oversized(cfg.lanes, 0);
  oversized[0] = 256;
  CHECK_THROWS_AS(mac_cycle(cfg, state, 0, oversized), std::logic_error);
  CHECK_THROWS_AS(mac_cycle(cfg, state, 1, zeros), std::logic_error);
}

TEST_CASE("input stream matches hand expansion for t=2") {
  const MacroConfig cfg;
  const BigUint a = BigUint::from_limbs({0x11, 0x22}, 8);
  const InputStream stream(cfg, a, 2, 2);
  REQUIRE(stream.row_count() == 3);
  REQUIRE(stream.slice_count() == 1);

  std::vector<std::uint32_t> row(cfg.lanes);
  stream.fill_row(0, 0, row);
  CHECK(row[0] == 0x11);
  CHECK(row[1] == 0);
  stream.fill_row(1, 0, row);
  CHECK(row[0] == 0x22);
  CHECK(row[1] == 0x11);
  stream.fill_row(2, 0, row);
  CHECK(row[0] == 0);
  CHECK(row[1] == 0x22);
  CHECK(row[2] == 0);
}

TEST_CASE("stream shape matches the reported cycle counts") {
  const MacroConfig cfg;
  std::mt19937_64 rng(9);
  const InputStream s32(cfg, lamos::random_bits(rng, 256, 8), 32, 32);
  CHECK(s32.row_count() == 63);
  CHECK(s32.slice_count() == 1);
  const InputStream s128(cfg, lamos::random_bits(rng, 1024, 8), 128, 128);
  CHECK(s128.row_count() == 255);
  CHECK(s128.slice_count() == 4);
}

TEST_CASE("column correctness at several limb counts") {
  unsigned seed = 1000;
  for (std::size_t t : {2u, 32u, 33u, 128u}) {
    for (int rep = 0; rep < 5; ++rep) check_column_correctness(t, seed++);
  }
}

TEST_CASE("band exactness: each (i, j) pair consumed exactly once") {
  const MacroConfig cfg;
  const std::size_t t_a = 37, t_b = 41;
  std::mt19937_64 rng(5);
  const BigUint a = lamos::random_bits(rng, t_a * 8, 8);
  const InputStream stream(cfg, a, t_a, t_b);

  std::vector<int> hits(t_a * t_b, 0);
  for (std::size_t r = 0; r < stream.row_count(); ++r) {
    for (std::size_t l = 0; l < stream.slice_count() * cfg.lanes; ++l) {
      const bool in_band = l < t_b && l <= r && r - l <= t_a - 1;
      if (!in_band) {
        CHECK(stream.lane_value(r, l) == 0);
      } else {
        ++hits[(r - l) * t_b + l];  // pairing (i = r - l, j = l)
      }
    }
  }
  for (int h : hits) CHECK(h == 1);
}

TEST_SUITE_END();
