// SPDX-License-Identifier: Apache-2.0
//
// Session state machines for the re-keyed channel.
//
// Wire unit: one header byte (bit 7 set for S-frames, bits 6..0 a rolling
// frame counter) followed by a fixed-length payload.
//   S: npub(16) || AEAD ciphertext of the TRN bytes || tag(16)
//   I: n/8 bytes of substitute(apply_forward(trn, block))
// After every I-frame both ends XOR the ciphertext bits, repeated
// cyclically, onto the whole configuration.
#pragma once

#include <cstddef>
#include <cstdint>
#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "extru/acorn.hpp"
#include "extru/cstn.hpp"
#include "extru/rng.hpp"
#include "extru/sbox.hpp"

namespace extru::protocol {

enum class Role : std::uint8_t { Initiator = 0, Responder = 1 };

inline Role peer_of(Role r) { return r == Role::Initiator ? Role::Responder : Role::Initiator; }

struct SessionConfig {
  std::size_t n = 64;
  NetworkKind kind = NetworkKind::LogExtra;
  std::size_t m = 4;
  /// Blocks per TRN.
  std::size_t T = 32;
  acorn::AeadKey key{};
  Role role = Role::Initiator;
  /// Attack-derived bound N; when unset the reference table is consulted.
  std::optional<std::size_t> safe_bound;

  Topology topology() const { return Topology::build(n, kind, m); }
  /// Throws std::invalid_argument unless 1 <= T < n and T < N.
  void validate() const;
};

enum class FrameType : std::uint8_t { I = 0, S = 1 };

struct Frame {
  FrameType type = FrameType::I;
  std::uint8_t counter = 0;  // 0..127
  std::vector<std::uint8_t> payload;

  std::uint8_t header() const noexcept {
    return static_cast<std::uint8_t>((type == FrameType::S ? 0x80u : 0u) | (counter & 0x7fu));
  }
  std::vector<std::uint8_t> serialize() const;
};

std::size_t trn_bytes(const Topology& topo);
std::size_t s_payload_size(const Topology& topo);
std::size_t i_payload_size(const Topology& topo);
std::size_t payload_size(const Topology& topo, std::uint8_t header);

/// Parses exactly one frame occupying all of `bytes`.
Frame parse_frame(std::span<const std::uint8_t> bytes, const Topology& topo);

enum class ErrorKind {
  Config,
  UnexpectedIFrame,
  CounterDiscontinuity,
  NonceReuse,
  Malformed,
  Auth,
  Truncated,
};

std::string error_kind_name(ErrorKind kind);

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// S-frame failed authentication; the session must be torn down.
class AuthError : public ProtocolError {
 public:
  explicit AuthError(const std::string& what) : ProtocolError(ErrorKind::Auth, what) {}
};

enum class Phase { AwaitingFirstTrn, Active };

/// trn ^= ciphertext bits repeated cyclically over the selector vector.
void feedback(Trn& trn, const Block& ciphertext);

/// npub layout: role(1) || session salt(7) || counter(8, big-endian).
inline constexpr std::size_t kNpubSaltBytes = 7;

class Transmitter {
 public:
  /// `prng` must already be seeded; it is never reseeded by the session.
  Transmitter(SessionConfig config, rng::Prng prng);
  /// Seeds a fresh PRNG from `source`; rng::HealthAlarm propagates.
  Transmitter(SessionConfig config, rng::EntropySource& source);

  /// Draws and seals a fresh TRN, installs it and resets the block count.
  Frame tx_rekey();
  /// Encrypts one block. Emits an S-frame first when no TRN is installed
  /// yet or T blocks have been sent under the current one.
  std::vector<Frame> tx_block(const Block& plaintext);

  const Trn& trn() const noexcept { return trn_; }
  const Topology& topology() const noexcept { return topo_; }
  const SessionConfig& config() const noexcept { return config_; }
  Phase phase() const noexcept { return phase_; }
  std::size_t blocks_since_rekey() const noexcept { return blocks_since_rekey_; }
  std::uint64_t rekeys() const noexcept { return rekeys_; }
  std::uint64_t blocks_sent() const noexcept { return blocks_sent_; }
  std::uint64_t npub_counter() const noexcept { return npub_counter_; }

 private:
  Frame emit_i(const Block& plaintext);
  std::uint8_t next_counter() noexcept;

  SessionConfig config_;
  Topology topo_;
  rng::Prng prng_;
  std::array<std::uint8_t, kNpubSaltBytes> salt_{};
  Trn trn_;
  Phase phase_ = Phase::AwaitingFirstTrn;
  std::size_t blocks_since_rekey_ = 0;
  std::uint64_t rekeys_ = 0;
  std::uint64_t blocks_sent_ = 0;
  std::uint64_t npub_counter_ = 0;
  std::uint8_t frame_counter_ = 0;
};

class Receiver {
 public:
  explicit Receiver(SessionConfig config);

  /// Plaintext for an I-frame, std::nullopt for an accepted S-frame.
  /// Throws AuthError or ProtocolError; after any throw the session is
  /// dead and further frames are rejected.
  std::optional<Block> rx_frame(const Frame& frame);

  const Trn& trn() const noexcept { return trn_; }
  const Topology& topology() const noexcept { return topo_; }
  Phase phase() const noexcept { return phase_; }
  std::uint64_t rekeys() const noexcept { return rekeys_; }
  std::uint64_t blocks_received() const noexcept { return blocks_received_; }
  std::size_t blocks_since_rekey() const noexcept { return blocks_since_rekey_; }
  bool failed() const noexcept { return failed_; }

 private:
  void accept_s(const Frame& frame);
  Block accept_i(const Frame& frame);
  [[noreturn]] void fail(ErrorKind kind, const std::string& what);

  SessionConfig config_;
  Topology topo_;
  Trn trn_;
  Phase phase_ = Phase::AwaitingFirstTrn;
  std::optional<std::array<std::uint8_t, kNpubSaltBytes>> salt_;
  std::uint64_t last_npub_counter_ = 0;
  std::size_t blocks_since_rekey_ = 0;
  std::uint64_t rekeys_ = 0;
  std::uint64_t blocks_received_ = 0;
  std::uint8_t expected_counter_ = 0;
  bool failed_ = false;
};

struct TranscriptStats {
  std::size_t s_frames = 0;
  std::size_t i_frames = 0;
  /// Longest run of I-frames not separated by an S-frame.
  std::size_t max_i_run = 0;
  bool starts_with_s = false;
  bool counters_continuous = true;
};

/// Walks a raw wire capture frame by frame. Throws ProtocolError if the
/// capture does not end on a frame boundary.
TranscriptStats scan_transcript(std::span<const std::uint8_t> wire, const Topology& topo);

}  // namespace extru::protocol
