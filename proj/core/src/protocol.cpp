// SPDX-License-Identifier: Apache-2.0
#include "extru/protocol.hpp"

#include <algorithm>
#include <cstring>

#include "extru/satattack.hpp"

namespace extru::protocol {

namespace {

const SboxTable& sbox() {
  static const SboxTable table = SboxTable::khazad();
  return table;
}

acorn::Npub make_npub(Role role, const std::array<std::uint8_t, kNpubSaltBytes>& salt, std::uint64_t counter) {
  acorn::Npub npub;
  npub.bytes[0] = static_cast<std::uint8_t>(role);
  std::memcpy(npub.bytes.data() + 1, salt.data(), salt.size());
  for (std::size_t i = 0; i < 8; ++i) {
    npub.bytes[acorn::kNpubBytes - 1 - i] = static_cast<std::uint8_t>(counter >> (8 * i));
  }
  return npub;
}

std::uint64_t npub_counter_of(const acorn::Npub& npub) {
  std::uint64_t c = 0;
  for (std::size_t i = 1 + kNpubSaltBytes; i < acorn::kNpubBytes; ++i) c = (c << 8) | npub.bytes[i];
  return c;
}

}  // namespace

void SessionConfig::validate() const {
  Topology topo = [&] {
    try {
      return topology();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("session config: ") + e.what());
    }
  }();
  if (n % 8 != 0) throw std::invalid_argument("session config: n must be a multiple of 8");
  if (T < 1) throw std::invalid_argument("session config: T must be at least 1");
  if (T >= n) {
    throw std::invalid_argument("session config: T = " + std::to_string(T) + " must stay below n = " +
                                std::to_string(n) + " so the affine system stays underdetermined");
  }
  const auto bound = safe_bound ? safe_bound : satattack::reference_safe_bound(topo);
  if (bound && T >= *bound) {
    throw std::invalid_argument("session config: T = " + std::to_string(T) + " must stay below the safe bound N = " +
                                std::to_string(*bound) + " for " + topo.describe());
  }
}

std::vector<std::uint8_t> Frame::serialize() const {
  std::vector<std::uint8_t> out;
  out.reserve(1 + payload.size());
  out.push_back(header());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

std::size_t trn_bytes(const Topology& topo) { return (topo.selector_count() + 7) / 8; }
std::size_t s_payload_size(const Topology& topo) { return acorn::kNpubBytes + trn_bytes(topo) + acorn::kTagBytes; }
std::size_t i_payload_size(const Topology& topo) { return topo.n() / 8; }
std::size_t payload_size(const Topology& topo, std::uint8_t header) {
  return (header & 0x80u) != 0 ? s_payload_size(topo) : i_payload_size(topo);
}

Frame parse_frame(std::span<const std::uint8_t> bytes, const Topology& topo) {
  if (bytes.empty()) throw ProtocolError(ErrorKind::Truncated, "empty frame");
  const std::size_t expected = payload_size(topo, bytes[0]);
  if (bytes.size() != 1 + expected) {
    throw ProtocolError(ErrorKind::Malformed, "frame length " + std::to_string(bytes.size()) + ", expected " +
                                                  std::to_string(1 + expected));
  }
  Frame f;
  f.type = (bytes[0] & 0x80u) != 0 ? FrameType::S : FrameType::I;
  f.counter = bytes[0] & 0x7fu;
  f.payload.assign(bytes.begin() + 1, bytes.end());
  return f;
}

std::string error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::UnexpectedIFrame: return "unexpected-i-frame";
    case ErrorKind::CounterDiscontinuity: return "counter-discontinuity";
    case ErrorKind::NonceReuse: return "nonce-reuse";
    case ErrorKind::Malformed: return "malformed";
    case ErrorKind::Auth: return "auth";
    case ErrorKind::Truncated: return "truncated";
  }
  return "unknown";
}

void feedback(Trn& trn, const Block& ciphertext) {
  const std::size_t n = ciphertext.size();
  const std::size_t total = trn.size();
  if (n == 0) return;
  if (n % 64 == 0) {
    auto dst = trn.words();
    const auto src = ciphertext.words();
    const std::size_t full = total / 64;
    for (std::size_t w = 0; w < full; ++w) dst[w] ^= src[w % src.size()];
    for (std::size_t i = full * 64; i < total; ++i) {
      if (ciphertext.test(i % n)) trn.flip(i);
    }
    return;
  }
  for (std::size_t i = 0; i < total; ++i) {
    if (ciphertext.test(i % n)) trn.flip(i);
  }
}

Transmitter::Transmitter(SessionConfig config, rng::Prng prng)
    : config_(std::move(config)), topo_(config_.topology()), prng_(std::move(prng)) {
  config_.validate();
  if (!prng_.seeded()) throw std::logic_error("transmitter: prng must be seeded before the session starts");
  prng_.draw(rng::Label::Npub, salt_);
}

Transmitter::Transmitter(SessionConfig config, rng::EntropySource& source)
    : Transmitter(std::move(config), [&] {
        rng::Prng p;
        p.reseed(source);
        return p;
      }()) {}

std::uint8_t Transmitter::next_counter() noexcept {
  const std::uint8_t c = frame_counter_;
  frame_counter_ = static_cast<std::uint8_t>((frame_counter_ + 1) & 0x7fu);
  return c;
}

Frame Transmitter::tx_rekey() {
  auto fresh = prng_.draw(rng::Label::Trn, trn_bytes(topo_));
  if (topo_.selector_count() % 8 != 0) fresh.back() &= static_cast<std::uint8_t>((1u << (topo_.selector_count() % 8)) - 1);
  Trn next(BitVector::from_bytes(fresh, topo_.selector_count()));

  Frame f;
  f.type = FrameType::S;
  f.counter = next_counter();
  const acorn::Npub npub = make_npub(config_.role, salt_, npub_counter_++);
  const std::uint8_t ad = f.header();
  const auto sealed = acorn::seal(config_.key, npub, std::span(&ad, 1), fresh);
  f.payload.reserve(s_payload_size(topo_));
  f.payload.insert(f.payload.end(), npub.bytes.begin(), npub.bytes.end());
  f.payload.insert(f.payload.end(), sealed.ciphertext.begin(), sealed.ciphertext.end());
  f.payload.insert(f.payload.end(), sealed.tag.begin(), sealed.tag.end());

  trn_ = std::move(next);
  blocks_since_rekey_ = 0;
  phase_ = Phase::Active;
  ++rekeys_;
  return f;
}

Frame Transmitter::emit_i(const Block& plaintext) {
  if (phase_ != Phase::Active || blocks_since_rekey_ >= config_.T) {
    throw std::logic_error("transmitter: I-frame would exceed the re-key interval");
  }
  const Block ct = substitute(sbox(), apply_forward(topo_, trn_, plaintext));
  feedback(trn_, ct);
  ++blocks_since_rekey_;
  ++blocks_sent_;
  Frame f;
  f.type = FrameType::I;
  f.counter = next_counter();
  f.payload = ct.to_bytes();
  return f;
}

std::vector<Frame> Transmitter::tx_block(const Block& plaintext) {
  if (plaintext.size() != topo_.n()) {
    throw std::invalid_argument("transmitter: block has " + std::to_string(plaintext.size()) + " bits, expected " +
                                std::to_string(topo_.n()));
  }
  std::vector<Frame> out;
  if (phase_ != Phase::Active || blocks_since_rekey_ >= config_.T) out.push_back(tx_rekey());
  out.push_back(emit_i(plaintext));
  return out;
}

Receiver::Receiver(SessionConfig config) : config_(std::move(config)), topo_(config_.topology()) { config_.validate(); }

void Receiver::fail(ErrorKind kind, const std::string& what) {
  failed_ = true;
  if (kind == ErrorKind::Auth) throw AuthError(what);
  throw ProtocolError(kind, what);
}

std::optional<Block> Receiver::rx_frame(const Frame& frame) {
  if (failed_) throw ProtocolError(ErrorKind::Config, "receiver: session already aborted");
  if (frame.counter != expected_counter_) {
    fail(ErrorKind::CounterDiscontinuity, "frame counter " + std::to_string(frame.counter) + ", expected " +
                                              std::to_string(expected_counter_));
  }
  const std::size_t expected = frame.type == FrameType::S ? s_payload_size(topo_) : i_payload_size(topo_);
  if (frame.payload.size() != expected) {
    fail(ErrorKind::Malformed, "payload length " + std::to_string(frame.payload.size()) + ", expected " +
                                   std::to_string(expected));
  }
  std::optional<Block> out;
  if (frame.type == FrameType::S) {
    accept_s(frame);
  } else {
    out = accept_i(frame);
  }
  expected_counter_ = static_cast<std::uint8_t>((expected_counter_ + 1) & 0x7fu);
  return out;
}

void Receiver::accept_s(const Frame& frame) {
  acorn::Npub npub;
  std::copy_n(frame.payload.begin(), acorn::kNpubBytes, npub.bytes.begin());
  acorn::SealedPayload sealed;
  const std::size_t ct_len = trn_bytes(topo_);
  sealed.ciphertext.assign(frame.payload.begin() + acorn::kNpubBytes,
                           frame.payload.begin() + static_cast<std::ptrdiff_t>(acorn::kNpubBytes + ct_len));
  std::copy_n(frame.payload.begin() + static_cast<std::ptrdiff_t>(acorn::kNpubBytes + ct_len), acorn::kTagBytes,
              sealed.tag.begin());
  const std::uint8_t ad = frame.header();
  auto opened = acorn::open(config_.key, npub, std::span(&ad, 1), sealed);
  if (!opened) fail(ErrorKind::Auth, "S-frame " + std::to_string(frame.counter) + " failed authentication");

  // Authenticated, so the npub fields are trustworthy from here on.
  if (npub.bytes[0] != static_cast<std::uint8_t>(peer_of(config_.role))) {
    fail(ErrorKind::NonceReuse, "S-frame npub carries this endpoint's own role");
  }
  std::array<std::uint8_t, kNpubSaltBytes> salt{};
  std::copy_n(npub.bytes.begin() + 1, kNpubSaltBytes, salt.begin());
  const std::uint64_t counter = npub_counter_of(npub);
  if (salt_) {
    if (salt != *salt_) fail(ErrorKind::NonceReuse, "S-frame npub salt changed mid-session");
    if (counter <= last_npub_counter_) fail(ErrorKind::NonceReuse, "S-frame npub did not increase");
  }
  try {
    trn_ = Trn(BitVector::from_bytes(*opened, topo_.selector_count()));
  } catch (const std::invalid_argument& e) {
    fail(ErrorKind::Malformed, std::string("S-frame trn: ") + e.what());
  }
  salt_ = salt;
  last_npub_counter_ = counter;
  blocks_since_rekey_ = 0;
  phase_ = Phase::Active;
  ++rekeys_;
}

Block Receiver::accept_i(const Frame& frame) {
  if (phase_ != Phase::Active) fail(ErrorKind::UnexpectedIFrame, "I-frame before the first S-frame");
  if (blocks_since_rekey_ >= config_.T) {
    fail(ErrorKind::UnexpectedIFrame, "more than T = " + std::to_string(config_.T) + " I-frames under one TRN");
  }
  const Block ct(BitVector::from_bytes(frame.payload, topo_.n()));
  Block pt = apply_inverse(topo_, trn_, substitute(sbox(), ct));
  feedback(trn_, ct);
  ++blocks_since_rekey_;
  ++blocks_received_;
  return pt;
}

TranscriptStats scan_transcript(std::span<const std::uint8_t> wire, const Topology& topo) {
  TranscriptStats st;
  std::size_t run = 0;
  std::size_t pos = 0;
  std::optional<std::uint8_t> last;
  while (pos < wire.size()) {
    const std::uint8_t header = wire[pos];
    const std::size_t len = 1 + payload_size(topo, header);
    if (pos + len > wire.size()) {
      throw ProtocolError(ErrorKind::Truncated, "transcript ends inside a frame at offset " + std::to_string(pos));
    }
    const std::uint8_t counter = header & 0x7fu;
    if (last && counter != ((*last + 1) & 0x7fu)) st.counters_continuous = false;
    if (!last && counter != 0) st.counters_continuous = false;
    last = counter;
    if ((header & 0x80u) != 0) {
      if (st.s_frames == 0 && st.i_frames == 0) st.starts_with_s = true;
      ++st.s_frames;
      run = 0;
    } else {
      ++st.i_frames;
      st.max_i_run = std::max(st.max_i_run, ++run);
    }
    pos += len;
  }
  return st;
}

}  // namespace extru::protocol
