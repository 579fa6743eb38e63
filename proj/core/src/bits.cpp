// SPDX-License-Identifier: Apache-2.0
#include "extru/bits.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace extru {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitVector::BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t size) {
  if (bytes.size() != (size + 7) / 8) {
    throw std::invalid_argument("bit vector: expected " + std::to_string((size + 7) / 8) +
                                " bytes, got " + std::to_string(bytes.size()));
  }
  BitVector v(size);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    v.words_[i / 8] |= std::uint64_t{bytes[i]} << (8 * (i % 8));
  }
  if (size % 8 != 0 && (bytes.back() >> (size % 8)) != 0) {
    throw std::invalid_argument("bit vector: bits set beyond declared length");
  }
  return v;
}

BitVector BitVector::from_hex(std::string_view hex, std::size_t size) {
  auto bytes = hex_decode(hex);
  std::reverse(bytes.begin(), bytes.end());
  return from_bytes(bytes, size);
}

BitVector BitVector::from_u64(std::uint64_t value, std::size_t size) {
  BitVector v(size);
  if (!v.words_.empty()) {
    v.words_[0] = value;
    v.clear_tail();
  }
  return v;
}

BitVector BitVector::unit(std::size_t index, std::size_t size) {
  BitVector v(size);
  v.set(index);
  return v;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.size_ != size_) {
    throw std::invalid_argument("bit vector: xor of mismatched lengths " + std::to_string(size_) +
                                " and " + std::to_string(other.size_));
  }
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::size_t BitVector::popcount() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitVector::none() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
  std::vector<std::uint8_t> out(byte_size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
  }
  return out;
}

std::string BitVector::to_hex() const {
  auto bytes = to_bytes();
  std::reverse(bytes.begin(), bytes.end());
  return hex_encode(bytes);
}

void BitVector::clear_tail() noexcept {
  if (size_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }
}

std::vector<std::uint8_t> hex_decode(std::string_view hex) {
  if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

std::string hex_encode(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

}  // namespace extru
