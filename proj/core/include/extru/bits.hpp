// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace extru {

/// Fixed-length bit vector over GF(2).
///
/// Bit i lives in byte i/8 at position i%8 when converted to bytes. The hex
/// form is the byte string reversed, so the highest-index bit is printed
/// first.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size);

  static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t size);
  static BitVector from_hex(std::string_view hex, std::size_t size);
  static BitVector from_u64(std::uint64_t value, std::size_t size);
  static BitVector unit(std::size_t index, std::size_t size);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector lhs, const BitVector& rhs) { return lhs ^= rhs; }
  friend bool operator==(const BitVector& a, const BitVector& b) noexcept {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

  std::size_t popcount() const noexcept;
  bool none() const noexcept;
  /// Low 64 bits; the caller is responsible for size() <= 64 when it matters.
  std::uint64_t to_u64() const noexcept { return words_.empty() ? 0 : words_[0]; }

  std::vector<std::uint8_t> to_bytes() const;
  std::string to_hex() const;
  std::size_t byte_size() const noexcept { return (size_ + 7) / 8; }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

 private:
  void clear_tail() noexcept;

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

std::vector<std::uint8_t> hex_decode(std::string_view hex);
std::string hex_encode(std::span<const std::uint8_t> bytes);

}  // namespace extru
