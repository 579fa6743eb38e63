// SPDX-License-Identifier: Apache-2.0
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "extru/bits.hpp"
#include "extru/cstn.hpp"

using extru::BitVector;

TEST_CASE("hex and byte forms round-trip") {
  const auto v = BitVector::from_hex("0123456789abcdef", 64);
  CHECK(v.to_hex() == "0123456789abcdef");
  CHECK(v.to_u64() == 0x0123456789abcdefull);
  CHECK(v.to_bytes().front() == 0xef);
  CHECK(BitVector::from_bytes(v.to_bytes(), 64) == v);
  CHECK(v.popcount() == 32);
}

TEST_CASE("odd widths keep the tail clear") {
  const auto v = BitVector::from_u64(~0ull, 12);
  CHECK(v.popcount() == 12);
  CHECK(v.byte_size() == 2);
  const std::uint8_t spill[] = {0xff, 0x1f};
  CHECK_THROWS_AS(BitVector::from_bytes(spill, 12), std::invalid_argument);
  const std::uint8_t short_input[] = {0xff};
  CHECK_THROWS_AS(BitVector::from_bytes(short_input, 12), std::invalid_argument);
}

TEST_CASE("xor, set and flip") {
  BitVector a(70);
  a.set(69);
  a.flip(3);
  CHECK(a.test(69));
  CHECK(a.test(3));
  a.set(3, false);
  CHECK_FALSE(a.test(3));
  CHECK((a ^ a).none());
  CHECK_THROWS_AS(a ^= BitVector(64), std::invalid_argument);
}

TEST_CASE("malformed hex is rejected") {
  CHECK_THROWS_AS(extru::hex_decode("abc"), std::invalid_argument);
  CHECK_THROWS_AS(extru::hex_decode("zz"), std::invalid_argument);
  CHECK(extru::hex_decode("0xA0").front() == 0xa0);
}

TEST_CASE("gf2 rank") {
  std::vector<BitVector> basis;
  for (std::size_t i = 0; i < 8; ++i) basis.push_back(BitVector::unit(i, 8));
  CHECK(extru::gf2_rank(basis) == 8);
  basis.push_back(basis[0] ^ basis[5]);
  CHECK(extru::gf2_rank(basis) == 8);
  std::vector<BitVector> dependent{basis[1], basis[2], basis[1] ^ basis[2]};
  CHECK(extru::gf2_rank(dependent) == 2);
  CHECK(extru::gf2_rank({}) == 0);
}
