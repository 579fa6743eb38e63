// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "extru/cstn.hpp"

namespace extru {

/// 8-bit involutional substitution table. Because table[table[x]] == x the
/// same lookup serves the transmit and receive directions.
class SboxTable {
 public:
  /// The Khazad S-box, checked against its embedded checksum at compile time.
  static const SboxTable& khazad();

  /// Throws std::invalid_argument unless the table is a bijective involution.
  static SboxTable from_table(const std::array<std::uint8_t, 256>& table);

  std::uint8_t operator()(std::uint8_t x) const noexcept { return table_[x]; }
  std::span<const std::uint8_t, 256> table() const noexcept { return table_; }

  /// FNV-1a 64 over the 256 entries.
  std::uint64_t checksum() const noexcept;
  /// 256 two-digit hex bytes separated by spaces, 16 per line.
  std::string to_hex() const;

 private:
  explicit SboxTable(const std::array<std::uint8_t, 256>& table) : table_(table) {}
  std::array<std::uint8_t, 256> table_;
};

inline constexpr std::uint64_t kKhazadSboxChecksum = 0xa6210805b6a233c9ull;

/// Byte-wise lookup; bit 8k..8k+7 of the block form byte k. Width must be a
/// multiple of 8.
Block substitute(const SboxTable& table, const Block& block);

}  // namespace extru
