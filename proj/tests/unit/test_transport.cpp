// SPDX-License-Identifier: Apache-2.0
#include <random>
#include <stdexcept>
#include <thread>

#include "doctest.h"
#include "extru/transport.hpp"

using namespace extru;
using namespace extru::transport;

namespace {

protocol::SessionConfig config(protocol::Role role) {
  protocol::SessionConfig c;
  c.key = acorn::AeadKey::from_hex("0f0e0d0c0b0a09080706050403020100");
  c.role = role;
  return c;
}

rng::Prng prng() {
  rng::Seed s{};
  s[0] = 1;
  return rng::Prng::from_seed(s);
}

std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng());
  return v;
}

Source from_vector(const std::vector<std::uint8_t>& data) {
  auto pos = std::make_shared<std::size_t>(0);
  return [&data, pos](std::span<std::uint8_t> out) {
    const std::size_t n = std::min(out.size(), data.size() - *pos);
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(*pos), n, out.begin());
    *pos += n;
    return n;
  };
}

std::vector<std::uint8_t> transfer(ByteStream& a, ByteStream& b, const std::vector<std::uint8_t>& data,
                                   SendStats* sent = nullptr, RecvStats* received = nullptr) {
  protocol::Transmitter tx(config(protocol::Role::Initiator), prng());
  protocol::Receiver rx(config(protocol::Role::Responder));
  std::vector<std::uint8_t> out;
  std::thread sender([&] {
    const auto s = send_stream(a, tx, from_vector(data));
    if (sent) *sent = s;
  });
  const auto r = recv_stream(b, rx, [&](std::span<const std::uint8_t> bytes) { out.insert(out.end(), bytes.begin(), bytes.end()); });
  sender.join();
  if (received) *received = r;
  return out;
}

}  // namespace

TEST_CASE("memory pipe carries arbitrary lengths") {
  for (std::size_t len : {0u, 1u, 7u, 8u, 9u, 255u, 256u, 257u, 5000u}) {
    CAPTURE(len);
    auto [a, b] = memory_pipe();
    const auto data = random_bytes(len, len);
    SendStats sent;
    RecvStats received;
    CHECK(transfer(*a, *b, data, &sent, &received) == data);
    const std::uint64_t blocks = len / 8 + 1;  // padding always adds a block or completes one
    CHECK(sent.blocks == blocks);
    CHECK(sent.rekeys == (blocks + 31) / 32);
    CHECK(received.bytes == len);
    CHECK(received.rekeys == sent.rekeys);
  }
}

TEST_CASE("TCP loopback") {
  TcpListener listener("127.0.0.1", 0);
  REQUIRE(listener.port() != 0);
  const auto data = random_bytes(64 * 1024 + 3, 99);
  std::unique_ptr<TcpStream> server;
  std::thread accept([&] { server = listener.accept(); });
  auto client = TcpStream::connect("127.0.0.1", listener.port());
  accept.join();
  CHECK(transfer(*client, *server, data) == data);
}

TEST_CASE("recording the wire") {
  auto [a, b] = memory_pipe();
  RecordingStream rec(*a);
  const auto data = random_bytes(1000, 5);
  CHECK(transfer(rec, *b, data) == data);
  const auto stats = protocol::scan_transcript(rec.written(), Topology::log_extra(64, 4));
  CHECK(stats.starts_with_s);
  CHECK(stats.max_i_run <= 32);
  CHECK(stats.i_frames == 1000 / 8 + 1);
}

TEST_CASE("truncated stream is reported") {
  auto [a, b] = memory_pipe();
  protocol::Transmitter tx(config(protocol::Role::Initiator), prng());
  const auto frames = tx.tx_block(Block(64));
  auto wire = frames[0].serialize();
  wire.resize(wire.size() - 10);
  a->write(wire);
  a->close_write();
  protocol::Receiver rx(config(protocol::Role::Responder));
  CHECK_THROWS_AS(recv_stream(*b, rx, [](std::span<const std::uint8_t>) {}), protocol::ProtocolError);
}

TEST_CASE("padding") {
  std::vector<std::uint8_t> v{1, 2, 0x80, 0, 0};
  strip_padding(v);
  CHECK(v == std::vector<std::uint8_t>{1, 2});
  std::vector<std::uint8_t> bad{1, 2, 0, 0};
  CHECK_THROWS_AS(strip_padding(bad), protocol::ProtocolError);
  std::vector<std::uint8_t> empty;
  CHECK_THROWS_AS(strip_padding(empty), protocol::ProtocolError);
}

TEST_CASE("endpoint parsing") {
  CHECK(parse_endpoint("127.0.0.1:9000") == std::pair<std::string, std::uint16_t>{"127.0.0.1", 9000});
  CHECK(parse_endpoint(":80").first == "127.0.0.1");
  CHECK_THROWS(parse_endpoint("localhost"));
  CHECK_THROWS(parse_endpoint("host:99999"));
  CHECK_THROWS(parse_endpoint("host:abc"));
}

TEST_CASE("connect to a closed port fails") {
  std::uint16_t port = 0;
  {
    TcpListener l("127.0.0.1", 0);
    port = l.port();
  }
  CHECK_THROWS(TcpStream::connect("127.0.0.1", port));
}
