// SPDX-License-Identifier: Apache-2.0
#include "extru/selftest.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <random>
#include <stdexcept>

#include "extru/acorn.hpp"
#include "extru/costmodel.hpp"
#include "extru/cstn.hpp"
#include "extru/protocol.hpp"
#include "extru/rng.hpp"
#include "extru/satattack.hpp"
#include "extru/sbox.hpp"

namespace extru {

namespace {

// A check returns an empty string on success, otherwise the failure detail.
using Check = std::function<std::string(std::mt19937_64&)>;

std::string expect(bool ok, const std::string& detail) { return ok ? std::string() : detail; }

std::string check_selectors(std::mt19937_64&) {
  if (Topology::log_extra(64, 4).selector_count() != 960) return "LOG(64,4,1) selector count is not 960";
  for (std::size_t n = 4; n <= 512; n *= 2) {
    const std::size_t log2n = static_cast<std::size_t>(std::countr_zero(n));
    if (Topology::omega(n).selector_count() != 3 * (n / 2) * log2n) return "omega-" + std::to_string(n);
  }
  return {};
}

std::string check_roundtrip(std::mt19937_64& rng) {
  for (std::size_t n : {8u, 16u, 64u}) {
    const Topology t = Topology::log_extra(n);
    const Topology mirror = t.mirror();
    for (int i = 0; i < 200; ++i) {
      const Trn trn = random_trn(t, rng);
      const Block x = random_block(n, rng);
      const Block y = apply_forward(t, trn, x);
      if (apply_inverse(t, trn, y) != x) return "apply_inverse failed at n=" + std::to_string(n);
      if (apply_forward(mirror, reverse_trn(t, trn), y) != x) return "mirror network failed at n=" + std::to_string(n);
    }
  }
  return {};
}

std::string check_affine(std::mt19937_64& rng) {
  const Topology t = Topology::omega(8);
  for (int i = 0; i < 10; ++i) {
    const Trn trn = random_trn(t, rng);
    const AffineModel model = extract_affine(t, trn);
    if (model.rank() != 8) return "affine model is not invertible";
    for (std::uint64_t x = 0; x < 256; ++x) {
      const Block in(BitVector::from_u64(x, 8));
      if (model.apply(in) != apply_forward(t, trn, in)) return "affine model disagrees with the network";
    }
  }
  return {};
}

std::string check_sbox(std::mt19937_64&) {
  const SboxTable s = SboxTable::khazad();
  for (unsigned x = 0; x < 256; ++x) {
    if (s(s(static_cast<std::uint8_t>(x))) != x) return "S-box is not an involution";
  }
  return expect(s.checksum() == kKhazadSboxChecksum, "S-box checksum mismatch");
}

std::string check_acorn(std::mt19937_64& rng) {
  const auto sealed = acorn::seal({}, {}, {}, {});
  if (hex_encode(sealed.tag) != "835e5317896e86b2447143c74f6ffc1e") return "known-answer tag mismatch";
  acorn::AeadKey key;
  acorn::Npub npub;
  for (auto& b : key.bytes) b = static_cast<std::uint8_t>(rng());
  for (auto& b : npub.bytes) b = static_cast<std::uint8_t>(rng());
  std::vector<std::uint8_t> pt(120);
  for (auto& b : pt) b = static_cast<std::uint8_t>(rng());
  const std::uint8_t ad = 0x80;
  auto s = acorn::seal(key, npub, std::span(&ad, 1), pt);
  if (acorn::open(key, npub, std::span(&ad, 1), s) != pt) return "seal/open roundtrip failed";
  s.tag[rng() % acorn::kTagBytes] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
  return expect(!acorn::open(key, npub, std::span(&ad, 1), s), "tampered tag verified");
}

std::string check_trivium(std::mt19937_64&) {
  const auto key = hex_decode("80000000000000000000");
  const auto iv = hex_decode("00000000000000000000");
  rng::Trivium t(key, iv);
  return expect(hex_encode(t.keystream(16)) == "38eb86ff730d7a9caf8df13a4420540d", "eSTREAM vector mismatch");
}

std::string check_health(std::mt19937_64&) {
  if (rng::rct_cutoff(1.0) != 21 || rng::rct_cutoff(0.5) != 41) return "RCT cutoff";
  if (rng::apt_cutoff(1.0) != 590) return "APT cutoff";
  rng::HealthMonitor m;
  for (int i = 0; i < 64; ++i) m.step(false);
  if (m.first_alarm_sample() != std::optional<std::size_t>(21)) return "stuck-at source not caught at sample 21";
  rng::StuckAtSource stuck(false);
  rng::Prng p;
  try {
    p.reseed(stuck);
  } catch (const rng::HealthAlarm&) {
    return {};
  }
  return "reseed from a stuck source was accepted";
}

std::string check_protocol(std::mt19937_64& rng) {
  protocol::SessionConfig cfg;
  for (auto& b : cfg.key.bytes) b = static_cast<std::uint8_t>(rng());
  rng::SeededSource source(rng());
  protocol::Transmitter tx(cfg, source);
  protocol::SessionConfig rcfg = cfg;
  rcfg.role = protocol::Role::Responder;
  protocol::Receiver rx(rcfg);
  std::size_t since_s = 0;
  for (int i = 0; i < 200; ++i) {
    const Block x = random_block(cfg.n, rng);
    std::optional<Block> got;
    for (const auto& f : tx.tx_block(x)) {
      since_s = f.type == protocol::FrameType::S ? 0 : since_s + 1;
      if (since_s > cfg.T) return "more than T I-frames between S-frames";
      got = rx.rx_frame(protocol::parse_frame(f.serialize(), tx.topology()));
    }
    if (!got || *got != x) return "loopback delivered a different block";
    if (rx.trn() != tx.trn()) return "feedback desynchronised the endpoints";
  }
  return expect(tx.rekeys() == (200 + cfg.T - 1) / cfg.T, "unexpected re-key count");
}

std::string check_attack(std::mt19937_64& rng) {
  const Topology t = Topology::omega(4);
  const Trn hidden = random_trn(t, rng);
  satattack::AttackOptions opts;
  opts.timeout_seconds = 10;
  const auto trace = satattack::attack(t, satattack::make_oracle(t, hidden), opts);
  if (trace.verdict != satattack::Verdict::Equivalent) return "omega-4 attack did not recover an equivalent key";
  return expect(satattack::consistent(t, *trace.recovered, trace.dips), "recovered key contradicts a DIP");
}

std::string check_cost(std::mt19937_64&) {
  const auto& f = costmodel::builtin_fixtures();
  if (costmodel::cycles_cipher(f.ciphers.at("aes-gcm"), 128, true) != 19708) return "AES-GCM 128-byte cycles";
  return expect(costmodel::cycles_extru(f.ciphers.at("acorn"), Topology::log_extra(64, 4), 256, 32, false) == 2072,
                "ExTru-ACORN 256-byte cycles");
}

}  // namespace

bool SelftestReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SelftestCheck& c) { return c.passed; });
}

SelftestReport run_selftest(std::uint64_t seed) {
  static const std::vector<std::pair<std::string, Check>> kChecks{
      {"cstn.selector_count", check_selectors}, {"cstn.roundtrip", check_roundtrip},
      {"cstn.affine", check_affine},            {"sbox.khazad", check_sbox},
      {"acorn.aead", check_acorn},              {"rng.trivium", check_trivium},
      {"rng.health", check_health},             {"protocol.loopback", check_protocol},
      {"satattack.omega4", check_attack},       {"costmodel.fixtures", check_cost},
  };
  SelftestReport report;
  std::mt19937_64 rng(seed);
  for (const auto& [name, check] : kChecks) {
    const auto start = std::chrono::steady_clock::now();
    SelftestCheck c{name, false, {}, 0};
    try {
      c.detail = check(rng);
      c.passed = c.detail.empty();
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.checks.push_back(std::move(c));
  }
  return report;
}

}  // namespace extru
