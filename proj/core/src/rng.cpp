// SPDX-License-Identifier: Apache-2.0
#include "extru/rng.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace extru::rng {

namespace {

void require_entropy(double h) {
  if (!(h > 0.0 && h <= 1.0)) throw std::invalid_argument("entropy per bit must be in (0, 1]");
}

}  // namespace

void Trivium::load(std::span<const std::uint8_t> key, std::span<const std::uint8_t> iv) {
  if (key.size() != kTriviumKeyBytes || iv.size() != kTriviumIvBytes) {
    throw std::invalid_argument("trivium: key and iv must be 10 bytes each");
  }
  buf_.fill(0);
  head_ = 0;
  for (std::size_t i = 0; i < 80; ++i) {
    const std::size_t j = 79 - i;
    s(1 + i) = (key[j / 8] >> (j % 8)) & 1u;
    s(94 + i) = (iv[j / 8] >> (j % 8)) & 1u;
  }
  s(286) = s(287) = s(288) = 1;
  for (std::size_t r = 0; r < kTriviumWarmupRounds; ++r) round();
  warmed_ = true;
}

std::uint8_t Trivium::round() noexcept {
  std::uint8_t t1 = s(66) ^ s(93);
  std::uint8_t t2 = s(162) ^ s(177);
  std::uint8_t t3 = s(243) ^ s(288);
  const std::uint8_t z = t1 ^ t2 ^ t3;
  t1 ^= (s(91) & s(92)) ^ s(171);
  t2 ^= (s(175) & s(176)) ^ s(264);
  t3 ^= (s(286) & s(287)) ^ s(69);
  if (head_ + kBits == kWindow) {
    std::memmove(buf_.data(), buf_.data() + head_, kBits);
    head_ = 0;
  }
  ++head_;
  s(1) = t3;
  s(94) = t1;
  s(178) = t2;
  return z;
}

bool Trivium::next_bit() {
  if (!warmed_) throw std::logic_error("trivium: keystream requested before warm-up");
  return round() != 0;
}

void Trivium::keystream(std::span<std::uint8_t> out) {
  if (!warmed_) throw std::logic_error("trivium: keystream requested before warm-up");
  for (auto& byte : out) {
    std::uint8_t b = 0;
    for (int j = 0; j < 8; ++j) b |= static_cast<std::uint8_t>(round() << j);
    byte = b;
  }
}

std::vector<std::uint8_t> Trivium::keystream(std::size_t nbytes) {
  std::vector<std::uint8_t> out(nbytes);
  keystream(out);
  return out;
}

std::size_t rct_cutoff(double h) {
  require_entropy(h);
  return 1 + static_cast<std::size_t>(std::ceil(-kHealthAlphaLog2 / h));
}

std::size_t apt_cutoff(double h, std::size_t window) {
  require_entropy(h);
  if (window < 2) throw std::invalid_argument("apt window must hold at least two samples");
  const long double n = static_cast<long double>(window - 1);
  const long double p = std::pow(2.0L, -static_cast<long double>(h));
  const long double log_p = std::log(p);
  const long double log_q = std::log1p(-p);
  const long double log_alpha = static_cast<long double>(kHealthAlphaLog2) * std::log(2.0L);
  const long double lg_n = std::lgamma(n + 1);

  // Accumulate the upper tail from k = n downwards with log-sum-exp; the
  // first k whose tail reaches alpha fixes the cutoff at c = k + 2.
  long double log_tail = -INFINITY;
  for (std::size_t k = window - 1;; --k) {
    const auto kk = static_cast<long double>(k);
    const long double log_pmf = lg_n - std::lgamma(kk + 1) - std::lgamma(n - kk + 1) + kk * log_p + (n - kk) * log_q;
    const long double hi = std::max(log_tail, log_pmf);
    log_tail = hi + std::log(std::exp(log_tail - hi) + std::exp(log_pmf - hi));
    if (log_tail >= log_alpha) return k + 2;
    if (k == 0) break;
  }
  return 1;
}

Verdict RepetitionCountTest::step(bool sample) noexcept {
  if (run_ > 0 && sample == last_) {
    ++run_;
  } else {
    run_ = 1;
    last_ = sample;
  }
  if (run_ == cutoff_) ++trips_;
  return run_ >= cutoff_ ? Verdict::Alarm : Verdict::Ok;
}

Verdict AdaptiveProportionTest::step(bool sample) noexcept {
  if (seen_ == 0) {
    first_ = sample;
    count_ = 0;
  }
  if (sample == first_) {
    ++count_;
    if (count_ == cutoff_) ++trips_;
  }
  if (++seen_ == window_) seen_ = 0;
  return count_ >= cutoff_ ? Verdict::Alarm : Verdict::Ok;
}

Verdict HealthMonitor::step(bool sample) noexcept {
  ++samples_;
  const bool rct = rct_.step(sample) == Verdict::Alarm;
  const bool apt = apt_.step(sample) == Verdict::Alarm;
  if ((rct || apt) && !alarmed_) {
    alarmed_ = true;
    first_alarm_ = samples_;
  }
  return alarmed_ ? Verdict::Alarm : Verdict::Ok;
}

Verdict HealthMonitor::feed(std::span<const std::uint8_t> bytes) noexcept {
  for (auto byte : bytes) {
    for (int j = 0; j < 8; ++j) {
      if (step(((byte >> j) & 1u) != 0) == Verdict::Alarm) return Verdict::Alarm;
    }
  }
  return alarmed_ ? Verdict::Alarm : Verdict::Ok;
}

void HealthMonitor::reset() noexcept {
  rct_.reset();
  apt_.reset();
  alarmed_ = false;
  first_alarm_.reset();
}

void OsEntropySource::fill(std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < out.size();) {
    auto word = device_();
    for (std::size_t k = 0; k < sizeof(word) && i < out.size(); ++k, ++i, word >>= 8) {
      out[i] = static_cast<std::uint8_t>(word);
    }
  }
}

DeterministicSource::DeterministicSource(std::vector<std::uint8_t> bytes, double entropy_per_bit)
    : bytes_(std::move(bytes)), h_(entropy_per_bit) {
  if (bytes_.empty()) throw std::invalid_argument("deterministic source needs at least one byte");
  require_entropy(h_);
}

void DeterministicSource::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    b = bytes_[pos_];
    pos_ = (pos_ + 1) % bytes_.size();
  }
}

void SeededSource::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) b = static_cast<std::uint8_t>(rng_() >> 56);
}

void StuckAtSource::fill(std::span<std::uint8_t> out) {
  std::memset(out.data(), value_ ? 0xff : 0x00, out.size());
}

FaultInjectionSource::FaultInjectionSource(std::unique_ptr<EntropySource> inner, std::size_t healthy_bits,
                                           bool stuck_value)
    : inner_(std::move(inner)), remaining_(healthy_bits), stuck_(stuck_value) {
  if (!inner_) throw std::invalid_argument("fault injection needs an inner source");
}

void FaultInjectionSource::fill(std::span<std::uint8_t> out) {
  inner_->fill(out);
  for (auto& b : out) {
    for (int j = 0; j < 8; ++j) {
      if (remaining_ > 0) {
        --remaining_;
        continue;
      }
      const auto mask = static_cast<std::uint8_t>(1u << j);
      b = stuck_ ? static_cast<std::uint8_t>(b | mask) : static_cast<std::uint8_t>(b & ~mask);
    }
  }
}

Prng Prng::from_seed(const Seed& seed) {
  Prng p;
  p.install(seed);
  return p;
}

void Prng::reseed(EntropySource& source) {
  if (seeded_) throw std::logic_error("prng: already seeded for this activation");
  HealthMonitor monitor(source.entropy_per_bit());
  std::vector<std::uint8_t> startup(kAptWindow / 8);
  source.fill(startup);
  if (monitor.feed(startup) == Verdict::Alarm) {
    throw HealthAlarm("entropy source '" + source.name() + "' failed startup health test at sample " +
                      std::to_string(*monitor.first_alarm_sample()));
  }
  Seed seed{};
  source.fill(seed);
  if (monitor.feed(seed) == Verdict::Alarm) {
    throw HealthAlarm("entropy source '" + source.name() + "' failed health test during seed draw at sample " +
                      std::to_string(*monitor.first_alarm_sample()));
  }
  install(seed);
}

void Prng::install(const Seed& seed) {
  seed_ = seed;
  std::array<std::uint8_t, kTriviumIvBytes> iv{};
  for (std::size_t label = 0; label < streams_.size(); ++label) {
    std::memcpy(iv.data(), seed.data() + kTriviumKeyBytes, kSeedBytes - kTriviumKeyBytes);
    iv[kSeedBytes - kTriviumKeyBytes] = static_cast<std::uint8_t>(label);
    streams_[label].load(std::span(seed.data(), kTriviumKeyBytes), iv);
  }
  seeded_ = true;
}

void Prng::draw(Label label, std::span<std::uint8_t> out) {
  if (!seeded_) throw std::logic_error("prng: draw before seeding");
  streams_[static_cast<std::size_t>(label)].keystream(out);
}

std::vector<std::uint8_t> Prng::draw(Label label, std::size_t nbytes) {
  std::vector<std::uint8_t> out(nbytes);
  draw(label, out);
  return out;
}

}  // namespace extru::rng
