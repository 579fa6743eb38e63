// SPDX-License-Identifier: Apache-2.0
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "extru/cstn.hpp"
#include "extru/sbox.hpp"
#include "fixtures.hpp"

using namespace extru;

TEST_CASE("Khazad table is an involution with the reference checksum") {
  const auto& s = SboxTable::khazad();
  for (unsigned x = 0; x < 256; ++x) REQUIRE(s(s(static_cast<std::uint8_t>(x))) == x);
  CHECK(s.checksum() == kKhazadSboxChecksum);
}

TEST_CASE("Khazad table matches the reference fixture") {
  std::istringstream in(test::read_fixture("khazad_sbox.hex"));
  const auto& s = SboxTable::khazad();
  unsigned value = 0;
  std::size_t i = 0;
  while (in >> std::hex >> value) {
    REQUIRE(i < 256);
    CHECK(s(static_cast<std::uint8_t>(i)) == value);
    ++i;
  }
  CHECK(i == 256);
}

TEST_CASE("from_table rejects non-involutions") {
  std::array<std::uint8_t, 256> t{};
  for (unsigned x = 0; x < 256; ++x) t[x] = static_cast<std::uint8_t>(x);
  CHECK_NOTHROW(SboxTable::from_table(t));
  t[0] = 1;
  CHECK_THROWS_AS(SboxTable::from_table(t), std::invalid_argument);
  for (unsigned x = 0; x < 256; ++x) t[x] = static_cast<std::uint8_t>(x + 1);
  CHECK_THROWS_AS(SboxTable::from_table(t), std::invalid_argument);
}

TEST_CASE("substitute works bytewise and is self-inverse") {
  std::mt19937_64 rng(2);
  const auto& s = SboxTable::khazad();
  const Block b = random_block(64, rng);
  const Block y = substitute(s, b);
  const auto in = b.to_bytes();
  const auto out = y.to_bytes();
  for (std::size_t i = 0; i < 8; ++i) CHECK(out[i] == s(in[i]));
  CHECK(substitute(s, y) == b);
  CHECK_THROWS_AS(substitute(s, Block(12)), std::invalid_argument);
}

TEST_CASE("the S-box breaks the affine structure of the network") {
  std::mt19937_64 rng(42);
  const auto t = Topology::omega(8);
  const auto& s = SboxTable::khazad();
  int broken = 0;
  for (int i = 0; i < 100; ++i) {
    const Trn trn = random_trn(t, rng);
    auto f = [&](std::uint64_t x) { return substitute(s, apply_forward(t, trn, Block(BitVector::from_u64(x, 8)))); };
    const BitVector offset = f(0);
    bool affine = true;
    for (std::uint64_t x = 1; x < 256 && affine; ++x) {
      BitVector expect = offset;
      for (std::size_t j = 0; j < 8; ++j) {
        if ((x >> j) & 1u) expect ^= f(std::uint64_t{1} << j) ^ offset;
      }
      affine = expect == f(x);
    }
    broken += affine ? 0 : 1;
  }
  CHECK(broken >= 99);
}
