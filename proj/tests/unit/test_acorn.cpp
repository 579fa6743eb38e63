// SPDX-License-Identifier: Apache-2.0
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "extru/acorn.hpp"
#include "extru/bits.hpp"
#include "fixtures.hpp"
#include "json.hpp"

using namespace extru;

namespace {

std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng());
  return v;
}

acorn::AeadKey random_key(std::mt19937_64& rng) {
  acorn::AeadKey k;
  for (auto& b : k.bytes) b = static_cast<std::uint8_t>(rng());
  return k;
}

acorn::Npub random_npub(std::mt19937_64& rng) {
  acorn::Npub n;
  for (auto& b : n.bytes) b = static_cast<std::uint8_t>(rng());
  return n;
}

}  // namespace

TEST_CASE("reference vectors") {
  std::istringstream lines(test::read_fixture("acorn_vectors.jsonl"));
  std::string line;
  int count = 0;
  bool empty_case = false;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const auto v = nlohmann::json::parse(line);
    const auto key = acorn::AeadKey::from_hex(v["key"].get<std::string>());
    const auto npub = acorn::Npub::from_hex(v["npub"].get<std::string>());
    const auto ad = hex_decode(v["ad"].get<std::string>());
    const auto pt = hex_decode(v["pt"].get<std::string>());
    const auto sealed = acorn::seal(key, npub, ad, pt);
    CAPTURE(line);
    CHECK(hex_encode(sealed.ciphertext) == v["ct"].get<std::string>());
    CHECK(hex_encode(sealed.tag) == v["tag"].get<std::string>());
    const auto opened = acorn::open(key, npub, ad, sealed);
    REQUIRE(opened);
    CHECK(*opened == pt);
    empty_case = empty_case || (ad.empty() && pt.empty());
    ++count;
  }
  CHECK(count >= 8);
  CHECK(empty_case);
}

TEST_CASE("seal/open round trips") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto key = random_key(rng);
    const auto npub = random_npub(rng);
    const auto ad = random_bytes(rng, rng() % 40);
    const auto pt = random_bytes(rng, rng() % 200);
    const auto sealed = acorn::seal(key, npub, ad, pt);
    REQUIRE(sealed.ciphertext.size() == pt.size());
    const auto opened = acorn::open(key, npub, ad, sealed);
    REQUIRE(opened);
    REQUIRE(*opened == pt);
  }
}

TEST_CASE("single-bit tampering fails authentication") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto key = random_key(rng);
    const auto npub = random_npub(rng);
    auto ad = random_bytes(rng, 1 + rng() % 8);
    const auto pt = random_bytes(rng, 1 + rng() % 64);
    auto sealed = acorn::seal(key, npub, ad, pt);
    const std::size_t total_bits = 8 * (ad.size() + sealed.ciphertext.size() + sealed.tag.size());
    std::size_t bit = rng() % total_bits;
    auto flip = [&](std::uint8_t& byte) { byte ^= static_cast<std::uint8_t>(1u << (bit % 8)); };
    if (bit < 8 * ad.size()) {
      flip(ad[bit / 8]);
    } else if ((bit -= 8 * ad.size()) < 8 * sealed.ciphertext.size()) {
      flip(sealed.ciphertext[bit / 8]);
    } else {
      bit -= 8 * sealed.ciphertext.size();
      flip(sealed.tag[bit / 8]);
    }
    CHECK_FALSE(acorn::open(key, npub, ad, sealed));
  }
}

TEST_CASE("wrong key or nonce fails authentication") {
  std::mt19937_64 rng(3);
  const auto key = random_key(rng);
  const auto npub = random_npub(rng);
  const auto pt = random_bytes(rng, 32);
  const auto sealed = acorn::seal(key, npub, {}, pt);
  auto other_key = key;
  other_key.bytes[15] ^= 0x80;
  auto other_npub = npub;
  other_npub.bytes[0] ^= 1;
  CHECK_FALSE(acorn::open(other_key, npub, {}, sealed));
  CHECK_FALSE(acorn::open(key, other_npub, {}, sealed));
  auto truncated = sealed;
  truncated.ciphertext.pop_back();
  CHECK_FALSE(acorn::open(key, npub, {}, truncated));
}

TEST_CASE("nonce changes the keystream") {
  std::mt19937_64 rng(4);
  const auto key = random_key(rng);
  const std::vector<std::uint8_t> pt(32, 0);
  auto n1 = random_npub(rng);
  auto n2 = n1;
  n2.bytes[7] ^= 4;
  CHECK(acorn::seal(key, n1, {}, pt).ciphertext != acorn::seal(key, n2, {}, pt).ciphertext);
}

TEST_CASE("hex parsing of key material") {
  CHECK_THROWS_AS(acorn::AeadKey::from_hex("00"), std::invalid_argument);
  CHECK(acorn::AeadKey::from_hex("000102030405060708090a0b0c0d0e0f").bytes[15] == 0x0f);
}
