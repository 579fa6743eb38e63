// SPDX-License-Identifier: Apache-2.0
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "extru/protocol.hpp"
#include "extru/rng.hpp"

using namespace extru;
using namespace extru::protocol;

namespace {

SessionConfig config(Role role, std::size_t T = 32) {
  SessionConfig c;
  c.T = T;
  c.key = acorn::AeadKey::from_hex("00112233445566778899aabbccddeeff");
  c.role = role;
  return c;
}

rng::Prng seeded_prng(std::uint8_t tag) {
  rng::Seed s{};
  s.fill(tag);
  return rng::Prng::from_seed(s);
}

struct Link {
  Transmitter tx;
  Receiver rx;
  explicit Link(std::size_t T = 32, std::uint8_t seed = 1)
      : tx(config(Role::Initiator, T), seeded_prng(seed)), rx(config(Role::Responder, T)) {}
};

std::vector<Frame> send_blocks(Transmitter& tx, const std::vector<Block>& blocks) {
  std::vector<Frame> frames;
  for (const auto& b : blocks) {
    for (auto& f : tx.tx_block(b)) frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<Block> random_blocks(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Block> v;
  for (std::size_t i = 0; i < count; ++i) v.push_back(random_block(64, rng));
  return v;
}

}  // namespace

TEST_CASE("config validation") {
  auto c = config(Role::Initiator);
  CHECK_NOTHROW(c.validate());
  c.T = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.T = 64;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.T = 33;  // reference bound for LOG(64,4,1) is 33
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.T = 10;
  c.safe_bound = 10;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.safe_bound = 11;
  CHECK_NOTHROW(c.validate());
  c = config(Role::Initiator);
  c.n = 4;
  c.kind = NetworkKind::Omega;
  c.m = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_THROWS_AS(Transmitter(c, seeded_prng(1)), std::invalid_argument);
}

TEST_CASE("frame layout") {
  const auto topo = Topology::log_extra(64, 4);
  CHECK(trn_bytes(topo) == 120);
  CHECK(s_payload_size(topo) == 16 + 120 + 16);
  CHECK(i_payload_size(topo) == 8);
  Frame f{FrameType::S, 5, std::vector<std::uint8_t>(152, 0xab)};
  CHECK(f.header() == 0x85);
  const auto wire = f.serialize();
  CHECK(wire.size() == 153);
  const Frame back = parse_frame(wire, topo);
  CHECK(back.type == FrameType::S);
  CHECK(back.counter == 5);
  CHECK(back.payload == f.payload);
  auto short_wire = wire;
  short_wire.pop_back();
  CHECK_THROWS_AS(parse_frame(short_wire, topo), ProtocolError);
  CHECK_THROWS_AS(parse_frame({}, topo), ProtocolError);
}

TEST_CASE("loopback delivers blocks and re-keys every T blocks") {
  Link link(32);
  const auto blocks = random_blocks(100, 1);
  const auto frames = send_blocks(link.tx, blocks);
  CHECK(frames.front().type == FrameType::S);
  CHECK(link.tx.rekeys() == 4);  // ceil(100 / 32)
  std::vector<Block> out;
  for (const auto& f : frames) {
    if (auto b = link.rx.rx_frame(f)) out.push_back(*b);
  }
  CHECK(out == blocks);
  CHECK(link.rx.rekeys() == 4);
  CHECK(link.rx.blocks_received() == 100);
  CHECK(link.rx.trn() == link.tx.trn());
  std::size_t run = 0;
  for (const auto& f : frames) {
    run = f.type == FrameType::S ? 0 : run + 1;
    CHECK(run <= 32);
  }
}

TEST_CASE("feedback changes the configuration every block") {
  Link link(8);
  const Block zero(64);
  const auto frames = send_blocks(link.tx, {zero, zero, zero});
  REQUIRE(frames.size() == 4);
  CHECK(frames[1].payload != frames[2].payload);
  CHECK(frames[2].payload != frames[3].payload);
  Trn t(8);
  const Block ct(BitVector::from_u64(0x81, 8));
  feedback(t, ct);
  CHECK(t.to_u64() == 0x81);
}

TEST_CASE("I-frame before the first S-frame is rejected") {
  Link link;
  const auto frames = send_blocks(link.tx, random_blocks(2, 2));
  Frame i = frames[1];
  i.counter = 0;
  CHECK_THROWS_AS(link.rx.rx_frame(i), ProtocolError);
  CHECK(link.rx.failed());
}

TEST_CASE("tampered S-frame aborts the session") {
  for (std::size_t byte : {0u, 20u, 151u}) {
    Link link;
    auto frames = send_blocks(link.tx, random_blocks(3, 3));
    frames[0].payload[byte] ^= 0x10;
    CHECK_THROWS_AS(link.rx.rx_frame(frames[0]), AuthError);
    CHECK(link.rx.failed());
    CHECK_THROWS_AS(link.rx.rx_frame(frames[1]), ProtocolError);
  }
}

TEST_CASE("wrong key fails authentication") {
  Link link;
  auto other = config(Role::Responder);
  other.key.bytes[0] ^= 1;
  Receiver rx(other);
  const auto frames = send_blocks(link.tx, random_blocks(1, 4));
  CHECK_THROWS_AS(rx.rx_frame(frames[0]), AuthError);
}

TEST_CASE("own-role S-frames are rejected") {
  Link link;
  Receiver same_role(config(Role::Initiator));
  const auto frames = send_blocks(link.tx, random_blocks(1, 5));
  try {
    same_role.rx_frame(frames[0]);
    FAIL("accepted an S-frame with the receiver's own role");
  } catch (const ProtocolError& e) {
    CHECK(e.kind() == ErrorKind::NonceReuse);
  }
}

TEST_CASE("dropped or reordered frames are detected") {
  Link link;
  const auto frames = send_blocks(link.tx, random_blocks(5, 6));
  link.rx.rx_frame(frames[0]);
  link.rx.rx_frame(frames[1]);
  try {
    link.rx.rx_frame(frames[3]);
    FAIL("accepted a gap in the frame counter");
  } catch (const ProtocolError& e) {
    CHECK(e.kind() == ErrorKind::CounterDiscontinuity);
  }
}

TEST_CASE("S-frame replayed after counter wrap-around is rejected") {
  Link link(16);
  const auto frames = send_blocks(link.tx, random_blocks(200, 7));
  REQUIRE(frames.size() > 130);
  for (std::size_t i = 0; i < 128; ++i) link.rx.rx_frame(frames[i]);
  // Counter matches again; the nonce must not.
  REQUIRE(frames[0].counter == 0);
  try {
    link.rx.rx_frame(frames[0]);
    FAIL("accepted a replayed S-frame");
  } catch (const ProtocolError& e) {
    CHECK(e.kind() == ErrorKind::NonceReuse);
  }
}

TEST_CASE("receiver enforces its own T") {
  Transmitter tx(config(Role::Initiator, 8), seeded_prng(3));
  Receiver rx(config(Role::Responder, 4));
  const auto frames = send_blocks(tx, random_blocks(8, 8));
  for (std::size_t i = 0; i < 5; ++i) rx.rx_frame(frames[i]);
  try {
    rx.rx_frame(frames[5]);
    FAIL("accepted more than T I-frames");
  } catch (const ProtocolError& e) {
    CHECK(e.kind() == ErrorKind::UnexpectedIFrame);
  }
}

TEST_CASE("explicit re-key and transcript scan") {
  Link link(4);
  std::vector<std::uint8_t> wire;
  auto emit = [&](const Frame& f) {
    const auto bytes = f.serialize();
    wire.insert(wire.end(), bytes.begin(), bytes.end());
  };
  for (const auto& f : send_blocks(link.tx, random_blocks(6, 9))) emit(f);
  emit(link.tx.tx_rekey());
  for (const auto& f : send_blocks(link.tx, random_blocks(3, 10))) emit(f);
  const auto stats = scan_transcript(wire, link.tx.topology());
  CHECK(stats.starts_with_s);
  CHECK(stats.counters_continuous);
  CHECK(stats.s_frames == 3);
  CHECK(stats.i_frames == 9);
  CHECK(stats.max_i_run == 4);
  wire.pop_back();
  CHECK_THROWS_AS(scan_transcript(wire, link.tx.topology()), ProtocolError);
}

TEST_CASE("the same seed gives the same session, different seeds do not") {
  Link a(32, 1);
  Link b(32, 1);
  Link c(32, 2);
  const auto blocks = random_blocks(4, 11);
  const auto fa = send_blocks(a.tx, blocks);
  const auto fb = send_blocks(b.tx, blocks);
  const auto fc = send_blocks(c.tx, blocks);
  CHECK(fa[0].payload == fb[0].payload);
  CHECK(fa[0].payload != fc[0].payload);
}

TEST_CASE("transmitter from a failing entropy source") {
  rng::StuckAtSource stuck(false);
  CHECK_THROWS_AS(Transmitter(config(Role::Initiator), stuck), rng::HealthAlarm);
}
