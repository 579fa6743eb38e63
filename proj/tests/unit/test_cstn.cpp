// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "extru/cstn.hpp"
#include "extru/network_json.hpp"

using namespace extru;

TEST_CASE("selector counts") {
  CHECK(Topology::log_extra(64, 4).selector_count() == 960);
  CHECK(Topology::log_extra(64).selector_count() == 960);
  for (std::size_t n = 4; n <= 512; n *= 2) {
    const std::size_t log2n = static_cast<std::size_t>(std::countr_zero(n));
    CHECK(Topology::omega(n).selector_count() == n / 2 * log2n * 3);
  }
  const auto t = Topology::log_extra(16, 2);
  CHECK(t.stages() == 6);
  CHECK(t.switch_count() == 48);
  CHECK(Topology::selector_index(1, 2, Selector::Toggle1, 16) == (8 + 2) * 3 + 2);
}

TEST_CASE("invalid topologies are rejected") {
  CHECK_THROWS_AS(Topology::omega(2), std::invalid_argument);
  CHECK_THROWS_AS(Topology::omega(12), std::invalid_argument);
  CHECK_THROWS_AS(Topology::build(8, NetworkKind::Omega, 1), std::invalid_argument);
  CHECK_THROWS_AS(Topology::build(8, NetworkKind::LogExtra, 0), std::invalid_argument);
  CHECK_THROWS_AS(Topology::log_extra(4), std::invalid_argument);
}

TEST_CASE("wrong-length inputs are rejected") {
  const auto t = Topology::omega(8);
  std::mt19937_64 rng(1);
  const Trn k = random_trn(t, rng);
  CHECK_THROWS_AS(apply_forward(t, k, Block(16)), std::invalid_argument);
  CHECK_THROWS_AS(apply_forward(t, Trn(5), Block(8)), std::invalid_argument);
}

TEST_CASE("n = 4 exhaustive round trip and mirror") {
  const auto t = Topology::omega(4);
  const auto mirror = t.mirror();
  REQUIRE(t.selector_count() == 12);
  for (std::uint64_t k = 0; k < (1u << 12); ++k) {
    const Trn trn(BitVector::from_u64(k, 12));
    const Trn back = reverse_trn(t, trn);
    for (std::uint64_t x = 0; x < 16; ++x) {
      const Block in(BitVector::from_u64(x, 4));
      const Block y = apply_forward(t, trn, in);
      REQUIRE(apply_inverse(t, trn, y) == in);
      REQUIRE(apply_forward(mirror, back, y) == in);
    }
  }
}

TEST_CASE("random round trip and mirror") {
  std::mt19937_64 rng(7);
  for (const auto& t : {Topology::omega(8), Topology::omega(16), Topology::log_extra(16), Topology::log_extra(64),
                        Topology::omega(128)}) {
    CAPTURE(t.describe());
    const auto mirror = t.mirror();
    CHECK(mirror.mirrored());
    CHECK(mirror.mirror() == t);
    for (int i = 0; i < 300; ++i) {
      const Trn trn = random_trn(t, rng);
      const Block x = random_block(t.n(), rng);
      const Block y = apply_forward(t, trn, x);
      REQUIRE(apply_inverse(t, trn, y) == x);
      REQUIRE(apply_forward(mirror, reverse_trn(t, trn), y) == x);
    }
  }
}

TEST_CASE("forward map is affine and bijective") {
  std::mt19937_64 rng(11);
  const auto t = Topology::omega(8);
  for (int i = 0; i < 100; ++i) {
    const Trn trn = random_trn(t, rng);
    const AffineModel model = extract_affine(t, trn);
    CHECK(model.rank() == 8);
    for (std::uint64_t x = 0; x < 256; ++x) {
      const Block in(BitVector::from_u64(x, 8));
      REQUIRE(model.apply(in) == apply_forward(t, trn, in));
    }
  }
}

TEST_CASE("columns of the affine map are unit vectors following the routing") {
  std::mt19937_64 rng(3);
  const auto t = Topology::log_extra(32);
  const Trn trn = random_trn(t, rng);
  const auto where = routing_permutation(t, trn);
  const AffineModel model = extract_affine(t, trn);
  std::vector<std::uint32_t> sorted(where.begin(), where.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::uint32_t i = 0; i < 32; ++i) {
    CHECK(sorted[i] == i);
    CHECK(model.columns[i] == BitVector::unit(where[i], 32));
  }
}

TEST_CASE("toggles only: all swap bits clear gives the wiring permutation") {
  const auto t = Topology::omega(8);
  const auto where = routing_permutation(t, Trn(t.selector_count()));
  // Three shuffles on 3-bit indices compose to the identity.
  for (std::uint32_t i = 0; i < 8; ++i) CHECK(where[i] == i);
}

TEST_CASE("permutation coverage") {
  CHECK(permutation_coverage(Topology::omega(4), CoverageMode::Exhaustive, 1u << 20) < 24);
  const std::size_t omega8 = permutation_coverage(Topology::omega(8), CoverageMode::Exhaustive, 1u << 20);
  CHECK(omega8 == 4096);
  CHECK(omega8 < 40320);
  const std::size_t log8 = permutation_coverage(Topology::log_extra(8, 1), CoverageMode::Exhaustive, 1u << 20);
  CHECK(log8 > omega8);
  CHECK(log8 <= 40320);
  CHECK_THROWS_AS(permutation_coverage(Topology::omega(16), CoverageMode::Exhaustive, 1u << 20), std::length_error);
  CHECK(permutation_coverage(Topology::omega(16), CoverageMode::Sampled, 500, 1) <= 500);
}

TEST_CASE("network JSON round trip") {
  std::mt19937_64 rng(5);
  const auto t = Topology::log_extra(64, 4);
  const Trn trn = random_trn(t, rng);
  const auto d = parse_network_json(to_json(t, &trn));
  CHECK(d.topology == t);
  REQUIRE(d.trn);
  CHECK(*d.trn == trn);
  CHECK_FALSE(parse_network_json(to_json(Topology::omega(8))).trn);
  CHECK_THROWS(parse_network_json(R"({"n":8,"kind":"omega","m":0,"stages":4})"));
  CHECK_THROWS(parse_network_json(R"({"n":8,"kind":"omega","m":0,"trn":"00"})"));
  CHECK_THROWS(parse_network_json("not json"));
}
