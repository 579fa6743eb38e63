// SPDX-License-Identifier: Apache-2.0
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "extru/bits.hpp"
#include "extru/rng.hpp"
#include "fixtures.hpp"
#include "json.hpp"

using namespace extru;
using namespace extru::rng;

TEST_CASE("Trivium vectors") {
  const auto vectors = nlohmann::json::parse(test::read_fixture("trivium_vectors.json"));
  int published = 0;
  for (const auto& v : vectors) {
    const auto key = hex_decode(v["key"].get<std::string>());
    const auto iv = hex_decode(v["iv"].get<std::string>());
    const auto expect = hex_decode(v["stream"].get<std::string>());
    const auto offset = v["offset"].get<std::size_t>();
    Trivium t(key, iv);
    auto stream = t.keystream(offset + expect.size());
    stream.erase(stream.begin(), stream.begin() + static_cast<std::ptrdiff_t>(offset));
    CAPTURE(v["key"].get<std::string>());
    CHECK(stream == expect);
    published += v.value("published", false) ? 1 : 0;
  }
  CHECK(published >= 2);
}

TEST_CASE("Trivium is deterministic and chunking does not matter") {
  const std::vector<std::uint8_t> key{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const std::vector<std::uint8_t> iv{10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
  Trivium a(key, iv);
  Trivium b(key, iv);
  const auto whole = a.keystream(1000);
  std::vector<std::uint8_t> pieces;
  for (std::size_t n : {1u, 7u, 64u, 500u, 428u}) {
    const auto part = b.keystream(n);
    pieces.insert(pieces.end(), part.begin(), part.end());
  }
  CHECK(whole == pieces);
  Trivium unloaded;
  CHECK_THROWS_AS(unloaded.keystream(1), std::logic_error);
  CHECK_THROWS_AS(Trivium(std::vector<std::uint8_t>(9), iv), std::invalid_argument);
}

TEST_CASE("health test cutoffs") {
  CHECK(rct_cutoff(1.0) == 21);
  CHECK(rct_cutoff(0.5) == 41);
  // Values from the independent binomial-tail oracle.
  CHECK(apt_cutoff(1.0) == 590);
  CHECK(apt_cutoff(0.5) == 793);
  CHECK(apt_cutoff(0.8) == 664);
  CHECK(apt_cutoff(0.25) == 915);
  CHECK_THROWS_AS(rct_cutoff(0.0), std::invalid_argument);
  CHECK_THROWS_AS(apt_cutoff(1.5), std::invalid_argument);
}

TEST_CASE("stuck-at source alarms at sample 21") {
  for (bool value : {false, true}) {
    StuckAtSource src(value);
    std::vector<std::uint8_t> bytes(8);
    src.fill(bytes);
    HealthMonitor m;
    CHECK(m.feed(bytes) == Verdict::Alarm);
    REQUIRE(m.first_alarm_sample());
    CHECK(*m.first_alarm_sample() == 21);
    CHECK(m.rct_alarms() == 1);
  }
}

TEST_CASE("biased source trips the proportion test but not the run test") {
  // 1110 repeated: 75% ones, runs of three.
  DeterministicSource src(std::vector<std::uint8_t>{0x77});
  std::vector<std::uint8_t> bytes(4096 / 8);
  src.fill(bytes);
  HealthMonitor m;
  CHECK(m.feed(bytes) == Verdict::Alarm);
  CHECK(m.rct_alarms() == 0);
  CHECK(m.apt_alarms() >= 1);
  CHECK(m.alarmed());
  m.reset();
  CHECK_FALSE(m.alarmed());
}

TEST_CASE("fair stream raises at most two alarms in a million samples") {
  SeededSource src(2024);
  std::vector<std::uint8_t> bytes(1000000 / 8);
  src.fill(bytes);
  RepetitionCountTest rct;
  AdaptiveProportionTest apt;
  for (std::size_t i = 0; i < bytes.size() * 8; ++i) {
    const bool bit = (bytes[i / 8] >> (i % 8)) & 1u;
    rct.step(bit);
    apt.step(bit);
  }
  CHECK(rct.trips() + apt.trips() <= 2);
}

TEST_CASE("PRNG substreams") {
  Seed seed{};
  for (std::size_t i = 0; i < seed.size(); ++i) seed[i] = static_cast<std::uint8_t>(i * 17);
  auto a = Prng::from_seed(seed);
  auto b = Prng::from_seed(seed);
  const auto trn_a = a.draw(Label::Trn, 120);
  CHECK(trn_a == b.draw(Label::Trn, 120));
  CHECK(a.draw(Label::Npub, 16) != a.draw(Label::Trn, 16));
  Prng unseeded;
  CHECK_FALSE(unseeded.seeded());
  CHECK_THROWS_AS(unseeded.draw(Label::Trn, 1), std::logic_error);
}

TEST_CASE("reseed runs the health tests") {
  Prng p;
  SeededSource good(9);
  p.reseed(good);
  CHECK(p.seeded());
  CHECK_THROWS_AS(p.reseed(good), std::logic_error);

  Prng q;
  StuckAtSource stuck(true);
  CHECK_THROWS_AS(q.reseed(stuck), HealthAlarm);
  CHECK_FALSE(q.seeded());

  // Fault appears after the startup test, while the seed is being drawn.
  Prng r;
  FaultInjectionSource late(std::make_unique<SeededSource>(3), 1024 + 40, false);
  CHECK_THROWS_AS(r.reseed(late), HealthAlarm);
}
