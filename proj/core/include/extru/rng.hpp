// SPDX-License-Identifier: Apache-2.0
//
// Trivium keystream generator, continuous health tests for binary entropy
// sources, and the seeded PRNG used by session endpoints.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace extru::rng {

inline constexpr std::size_t kTriviumKeyBytes = 10;
inline constexpr std::size_t kTriviumIvBytes = 10;
inline constexpr std::size_t kTriviumWarmupRounds = 4 * 288;

/// Trivium with eSTREAM loading: the 80-bit key/iv value (bit j = bit j%8 of
/// byte j/8) enters s1..s80 / s94..s173 most-significant bit first. Output
/// bits are packed least-significant bit first.
class Trivium {
 public:
  Trivium() = default;
  Trivium(std::span<const std::uint8_t> key, std::span<const std::uint8_t> iv) { load(key, iv); }

  /// Loads key and iv and runs the 1152 warm-up rounds.
  void load(std::span<const std::uint8_t> key, std::span<const std::uint8_t> iv);
  bool warmed() const noexcept { return warmed_; }

  /// Throws std::logic_error when not warmed.
  void keystream(std::span<std::uint8_t> out);
  std::vector<std::uint8_t> keystream(std::size_t nbytes);
  bool next_bit();

 private:
  static constexpr std::size_t kBits = 288;
  static constexpr std::size_t kWindow = kBits + 4096;

  std::uint8_t& s(std::size_t i) noexcept { return buf_[head_ + kBits - i]; }
  std::uint8_t round() noexcept;

  std::array<std::uint8_t, kWindow> buf_{};
  std::size_t head_ = 0;
  bool warmed_ = false;
};

/// Raised when a health test trips; the generator must stop emitting.
class HealthAlarm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kHealthAlphaLog2 = -20.0;
inline constexpr std::size_t kAptWindow = 1024;

/// 1 + ceil(20 / H). H in (0, 1].
std::size_t rct_cutoff(double entropy_per_bit);
/// Smallest c with P[Binomial(W-1, 2^-H) >= c-1] < 2^-20, by direct tail
/// summation in log space.
std::size_t apt_cutoff(double entropy_per_bit, std::size_t window = kAptWindow);

enum class Verdict { Ok, Alarm };

class RepetitionCountTest {
 public:
  explicit RepetitionCountTest(double entropy_per_bit = 1.0) : cutoff_(rct_cutoff(entropy_per_bit)) {}
  Verdict step(bool sample) noexcept;
  std::size_t cutoff() const noexcept { return cutoff_; }
  std::size_t run() const noexcept { return run_; }
  /// Number of times the run length reached the cutoff.
  std::size_t trips() const noexcept { return trips_; }
  void reset() noexcept { run_ = 0; }

 private:
  std::size_t cutoff_;
  std::size_t run_ = 0;
  std::size_t trips_ = 0;
  bool last_ = false;
};

class AdaptiveProportionTest {
 public:
  explicit AdaptiveProportionTest(double entropy_per_bit = 1.0, std::size_t window = kAptWindow)
      : window_(window), cutoff_(apt_cutoff(entropy_per_bit, window)) {}
  Verdict step(bool sample) noexcept;
  std::size_t cutoff() const noexcept { return cutoff_; }
  std::size_t window() const noexcept { return window_; }
  /// Number of windows in which the count reached the cutoff.
  std::size_t trips() const noexcept { return trips_; }
  void reset() noexcept { seen_ = 0; }

 private:
  std::size_t window_;
  std::size_t cutoff_;
  std::size_t seen_ = 0;
  std::size_t count_ = 0;
  std::size_t trips_ = 0;
  bool first_ = false;
};

/// Both tests over one bit stream. The alarm latches until reset(); each
/// distinct trip is counted once.
class HealthMonitor {
 public:
  explicit HealthMonitor(double entropy_per_bit = 1.0) : rct_(entropy_per_bit), apt_(entropy_per_bit) {}

  Verdict step(bool sample) noexcept;
  /// Feeds bytes least-significant bit first; stops at the first alarm.
  Verdict feed(std::span<const std::uint8_t> bytes) noexcept;

  bool alarmed() const noexcept { return alarmed_; }
  std::size_t samples() const noexcept { return samples_; }
  std::size_t rct_alarms() const noexcept { return rct_.trips(); }
  std::size_t apt_alarms() const noexcept { return apt_.trips(); }
  /// 1-based index of the sample that first tripped a test.
  std::optional<std::size_t> first_alarm_sample() const noexcept { return first_alarm_; }
  const RepetitionCountTest& rct() const noexcept { return rct_; }
  const AdaptiveProportionTest& apt() const noexcept { return apt_; }
  void reset() noexcept;

 private:
  RepetitionCountTest rct_;
  AdaptiveProportionTest apt_;
  bool alarmed_ = false;
  std::size_t samples_ = 0;
  std::optional<std::size_t> first_alarm_;
};

class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
  /// Assessed min-entropy per bit, in (0, 1].
  virtual double entropy_per_bit() const { return 1.0; }
  virtual std::string name() const = 0;
};

/// Operating-system randomness via std::random_device.
class OsEntropySource final : public EntropySource {
 public:
  void fill(std::span<std::uint8_t> out) override;
  std::string name() const override { return "os"; }

 private:
  std::random_device device_;
};

/// Replays a fixed byte string cyclically.
class DeterministicSource final : public EntropySource {
 public:
  explicit DeterministicSource(std::vector<std::uint8_t> bytes, double entropy_per_bit = 1.0);
  void fill(std::span<std::uint8_t> out) override;
  double entropy_per_bit() const override { return h_; }
  std::string name() const override { return "deterministic"; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  double h_;
};

/// Reproducible pseudo-entropy for tests and seeded tool runs.
class SeededSource final : public EntropySource {
 public:
  explicit SeededSource(std::uint64_t seed) : rng_(seed) {}
  void fill(std::span<std::uint8_t> out) override;
  std::string name() const override { return "seeded"; }

 private:
  std::mt19937_64 rng_;
};

class StuckAtSource final : public EntropySource {
 public:
  explicit StuckAtSource(bool value) : value_(value) {}
  void fill(std::span<std::uint8_t> out) override;
  std::string name() const override { return value_ ? "stuck-at-1" : "stuck-at-0"; }

 private:
  bool value_;
};

/// Passes `healthy_bits` bits of the inner source through, then sticks.
class FaultInjectionSource final : public EntropySource {
 public:
  FaultInjectionSource(std::unique_ptr<EntropySource> inner, std::size_t healthy_bits, bool stuck_value);
  void fill(std::span<std::uint8_t> out) override;
  double entropy_per_bit() const override { return inner_->entropy_per_bit(); }
  std::string name() const override { return "fault(" + inner_->name() + ")"; }

 private:
  std::unique_ptr<EntropySource> inner_;
  std::size_t remaining_;
  bool stuck_;
};

/// Substream labels. Each label gets its own Trivium instance whose iv tail
/// carries the label byte, so draws for one purpose never shift another.
enum class Label : std::uint8_t { Base = 0, Trn = 1, Npub = 2, Masking = 3 };

inline constexpr std::size_t kSeedBytes = 16;
using Seed = std::array<std::uint8_t, kSeedBytes>;

/// Trivium PRNG seeded once per activation.
///
/// A reseed first runs a 1024-sample startup health test on the source (the
/// samples are discarded), then draws the 128-bit seed through the same
/// monitor. Seed bits 0..79 form the key; bits 80..127 followed by 32 zero
/// bits form the iv, with the label byte placed in the first of those zero
/// bytes.
class Prng {
 public:
  Prng() = default;

  static Prng from_seed(const Seed& seed);

  /// Throws HealthAlarm on a failed health test and std::logic_error if the
  /// generator was already seeded.
  void reseed(EntropySource& source);
  bool seeded() const noexcept { return seeded_; }
  const Seed& seed() const noexcept { return seed_; }

  void draw(Label label, std::span<std::uint8_t> out);
  std::vector<std::uint8_t> draw(Label label, std::size_t nbytes);

 private:
  void install(const Seed& seed);

  Seed seed_{};
  bool seeded_ = false;
  std::array<Trivium, 4> streams_{};
};

}  // namespace extru::rng
