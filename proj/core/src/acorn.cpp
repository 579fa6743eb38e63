// SPDX-License-Identifier: Apache-2.0
#include "extru/acorn.hpp"

#include <cstring>
#include <stdexcept>

#include "extru/bits.hpp"

namespace extru::acorn {

namespace {

// 293-bit state kept in a sliding window so that a shift is a pointer bump.
class State {
 public:
  static constexpr std::size_t kBits = 293;

  std::uint8_t step(std::uint8_t m, std::uint8_t ca, std::uint8_t cb) { return update(m, ca, cb, false); }
  // Decrypting variant: m is the ciphertext bit, returns the plaintext bit.
  std::uint8_t step_decrypt(std::uint8_t c, std::uint8_t ca, std::uint8_t cb) {
    return update(c, ca, cb, true);
  }

 private:
  static constexpr std::size_t kWindow = kBits + 4096;

  std::uint8_t& s(std::size_t i) { return buf_[head_ + i]; }

  static std::uint8_t maj(std::uint8_t x, std::uint8_t y, std::uint8_t z) {
    return static_cast<std::uint8_t>((x & y) ^ (x & z) ^ (y & z));
  }
  static std::uint8_t ch(std::uint8_t x, std::uint8_t y, std::uint8_t z) {
    return static_cast<std::uint8_t>((x & y) ^ ((x ^ 1) & z));
  }

  std::uint8_t update(std::uint8_t m, std::uint8_t ca, std::uint8_t cb, bool decrypt) {
    s(289) ^= s(235) ^ s(230);
    s(230) ^= s(196) ^ s(193);
    s(193) ^= s(160) ^ s(154);
    s(154) ^= s(111) ^ s(107);
    s(107) ^= s(66) ^ s(61);
    s(61) ^= s(23) ^ s(0);
    const std::uint8_t ks = s(12) ^ s(154) ^ maj(s(235), s(61), s(193)) ^ ch(s(230), s(111), s(66));
    const std::uint8_t f = s(0) ^ s(107) ^ 1 ^ maj(s(244), s(23), s(160)) ^ (ca & s(196)) ^ (cb & ks);
    const std::uint8_t message = decrypt ? static_cast<std::uint8_t>(m ^ ks) : m;
    if (head_ + kBits == kWindow) {
      std::memmove(buf_.data(), buf_.data() + head_, kBits);
      head_ = 0;
    }
    ++head_;
    s(kBits - 1) = f ^ message;
    return decrypt ? message : ks;
  }

  std::array<std::uint8_t, kWindow> buf_{};
  std::size_t head_ = 0;
};

std::uint8_t bit_of(std::span<const std::uint8_t> bytes, std::size_t i) {
  return (bytes[i / 8] >> (i % 8)) & 1u;
}

void initialize(State& st, const AeadKey& key, const Npub& npub) {
  for (std::size_t i = 0; i < 128; ++i) st.step(bit_of(key.bytes, i), 1, 1);
  for (std::size_t i = 0; i < 128; ++i) st.step(bit_of(npub.bytes, i), 1, 1);
  st.step(bit_of(key.bytes, 0) ^ 1u, 1, 1);
  for (std::size_t i = 257; i < 1792; ++i) st.step(bit_of(key.bytes, i % 128), 1, 1);
}

void absorb_ad(State& st, std::span<const std::uint8_t> ad) {
  for (std::size_t i = 0; i < ad.size() * 8; ++i) st.step(bit_of(ad, i), 1, 1);
  st.step(1, 1, 1);
  for (std::size_t i = 1; i < 128; ++i) st.step(0, 1, 1);
  for (std::size_t i = 128; i < 256; ++i) st.step(0, 0, 1);
}

void pad_message(State& st) {
  st.step(1, 1, 0);
  for (std::size_t i = 1; i < 128; ++i) st.step(0, 1, 0);
  for (std::size_t i = 128; i < 256; ++i) st.step(0, 0, 0);
}

Tag finalize(State& st) {
  Tag tag{};
  for (std::size_t i = 0; i < 768 - 128; ++i) st.step(0, 1, 1);
  for (std::size_t i = 0; i < 128; ++i) {
    tag[i / 8] |= static_cast<std::uint8_t>(st.step(0, 1, 1) << (i % 8));
  }
  return tag;
}

template <std::size_t N>
std::array<std::uint8_t, N> parse_fixed_hex(std::string_view hex, const char* what) {
  const auto bytes = hex_decode(hex);
  if (bytes.size() != N) {
    throw std::invalid_argument(std::string(what) + " must be " + std::to_string(2 * N) + " hex digits");
  }
  std::array<std::uint8_t, N> out{};
  std::memcpy(out.data(), bytes.data(), N);
  return out;
}

}  // namespace

AeadKey AeadKey::from_hex(std::string_view hex) { return {parse_fixed_hex<kKeyBytes>(hex, "key")}; }

Npub Npub::from_hex(std::string_view hex) { return {parse_fixed_hex<kNpubBytes>(hex, "npub")}; }

SealedPayload seal(const AeadKey& key, const Npub& npub, std::span<const std::uint8_t> ad,
                   std::span<const std::uint8_t> plaintext) {
  State st;
  initialize(st, key, npub);
  absorb_ad(st, ad);
  SealedPayload out;
  out.ciphertext.assign(plaintext.size(), 0);
  for (std::size_t i = 0; i < plaintext.size() * 8; ++i) {
    const std::uint8_t m = bit_of(plaintext, i);
    const std::uint8_t ks = st.step(m, 1, 0);
    out.ciphertext[i / 8] |= static_cast<std::uint8_t>((ks ^ m) << (i % 8));
  }
  pad_message(st);
  out.tag = finalize(st);
  return out;
}

std::optional<std::vector<std::uint8_t>> open(const AeadKey& key, const Npub& npub,
                                              std::span<const std::uint8_t> ad,
                                              const SealedPayload& sealed) {
  State st;
  initialize(st, key, npub);
  absorb_ad(st, ad);
  std::vector<std::uint8_t> plaintext(sealed.ciphertext.size(), 0);
  for (std::size_t i = 0; i < plaintext.size() * 8; ++i) {
    const std::uint8_t m = st.step_decrypt(bit_of(sealed.ciphertext, i), 1, 0);
    plaintext[i / 8] |= static_cast<std::uint8_t>(m << (i % 8));
  }
  pad_message(st);
  const Tag expected = finalize(st);
  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < kTagBytes; ++i) diff |= static_cast<std::uint8_t>(expected[i] ^ sealed.tag[i]);
  if (diff != 0) return std::nullopt;
  return plaintext;
}

}  // namespace extru::acorn
