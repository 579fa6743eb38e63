// SPDX-License-Identifier: Apache-2.0
//
// ACORN-128 (v3) authenticated encryption. Bytes are loaded into the
// bit-serial state least-significant bit first.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace extru::acorn {

inline constexpr std::size_t kKeyBytes = 16;
inline constexpr std::size_t kNpubBytes = 16;
inline constexpr std::size_t kTagBytes = 16;

struct AeadKey {
  std::array<std::uint8_t, kKeyBytes> bytes{};

  /// Exactly 32 hex digits.
  static AeadKey from_hex(std::string_view hex);
  friend bool operator==(const AeadKey&, const AeadKey&) = default;
};

struct Npub {
  std::array<std::uint8_t, kNpubBytes> bytes{};

  static Npub from_hex(std::string_view hex);
  friend bool operator==(const Npub&, const Npub&) = default;
  friend auto operator<=>(const Npub&, const Npub&) = default;
};

using Tag = std::array<std::uint8_t, kTagBytes>;

struct SealedPayload {
  std::vector<std::uint8_t> ciphertext;
  Tag tag{};
};

SealedPayload seal(const AeadKey& key, const Npub& npub, std::span<const std::uint8_t> ad,
                   std::span<const std::uint8_t> plaintext);

/// Plaintext if the tag verifies, std::nullopt otherwise. The comparison
/// touches every tag byte regardless of where a mismatch occurs.
std::optional<std::vector<std::uint8_t>> open(const AeadKey& key, const Npub& npub,
                                              std::span<const std::uint8_t> ad,
                                              const SealedPayload& sealed);

}  // namespace extru::acorn
