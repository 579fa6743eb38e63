// SPDX-License-Identifier: Apache-2.0
//
// Configurable switching & toggling networks (CSTN).
//
// A network has `stages` columns of n/2 two-by-two switches. Every switch has
// three selectors [swap, toggle0, toggle1]: swap crosses the two inputs, then
// toggle0/toggle1 are XORed onto the upper/lower output. Between columns the
// links are rewired by a fixed permutation (perfect shuffle for the networks
// built here). Selectors are laid out stage-major, switch index ascending.
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "extru/bits.hpp"

namespace extru {

/// n-bit data word entering or leaving a network.
class Block : public BitVector {
 public:
  using BitVector::BitVector;
  Block() = default;
  explicit Block(BitVector bits) : BitVector(std::move(bits)) {}
};

/// Network configuration: one bit per selector.
class Trn : public BitVector {
 public:
  using BitVector::BitVector;
  Trn() = default;
  explicit Trn(BitVector bits) : BitVector(std::move(bits)) {}
};

enum class NetworkKind { Omega, LogExtra };

enum class Selector : std::size_t { Swap = 0, Toggle0 = 1, Toggle1 = 2 };

inline constexpr std::size_t kSelectorsPerSwitch = 3;

class Topology {
 public:
  /// Validating constructor. Omega requires m == 0, LogExtra requires m >= 1.
  static Topology build(std::size_t n, NetworkKind kind, std::size_t m);
  static Topology omega(std::size_t n) { return build(n, NetworkKind::Omega, 0); }
  /// LOG_{n,m,1}; m defaults to log2(n) - 2.
  static Topology log_extra(std::size_t n);
  static Topology log_extra(std::size_t n, std::size_t m) { return build(n, NetworkKind::LogExtra, m); }

  std::size_t n() const noexcept { return n_; }
  std::size_t log2n() const noexcept { return log2n_; }
  NetworkKind kind() const noexcept { return kind_; }
  std::size_t extra_stages() const noexcept { return m_; }
  std::size_t stages() const noexcept { return stages_; }
  std::size_t switches_per_stage() const noexcept { return n_ / 2; }
  std::size_t switch_count() const noexcept { return stages_ * (n_ / 2); }
  std::size_t selector_count() const noexcept { return kSelectorsPerSwitch * switch_count(); }
  bool mirrored() const noexcept { return mirrored_; }

  /// Wiring at boundary b (0 = network inputs, b = s + 1 follows stage s):
  /// link i moves to link wiring(b)[i].
  std::span<const std::uint32_t> wiring(std::size_t boundary) const { return wiring_[boundary]; }
  std::span<const std::uint32_t> inverse_wiring(std::size_t boundary) const { return inverse_[boundary]; }
  bool wiring_is_identity(std::size_t boundary) const { return identity_[boundary]; }
  std::size_t boundaries() const noexcept { return wiring_.size(); }

  static std::size_t selector_index(std::size_t stage, std::size_t sw, Selector which, std::size_t n) {
    return (stage * (n / 2) + sw) * kSelectorsPerSwitch + static_cast<std::size_t>(which);
  }
  std::size_t selector_index(std::size_t stage, std::size_t sw, Selector which) const {
    return selector_index(stage, sw, which, n_);
  }

  /// Stage order reversed, each boundary permutation inverted and reversed.
  /// The same switch index keeps the same link pair.
  Topology mirror() const;

  std::string describe() const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.n_ == b.n_ && a.kind_ == b.kind_ && a.m_ == b.m_ && a.mirrored_ == b.mirrored_;
  }

 private:
  Topology() = default;
  void finish_wiring();

  std::size_t n_ = 0;
  std::size_t log2n_ = 0;
  NetworkKind kind_ = NetworkKind::Omega;
  std::size_t m_ = 0;
  std::size_t stages_ = 0;
  bool mirrored_ = false;
  std::vector<std::vector<std::uint32_t>> wiring_;
  std::vector<std::vector<std::uint32_t>> inverse_;
  std::vector<bool> identity_;
};

/// Perfect shuffle on log2(n)-bit link indices (rotate left by one).
std::uint32_t perfect_shuffle(std::uint32_t link, std::size_t log2n) noexcept;

Block apply_forward(const Topology& topo, const Trn& trn, const Block& x);
Block apply_inverse(const Topology& topo, const Trn& trn, const Block& y);

/// Configuration for topo.mirror() that undoes apply_forward(topo, trn, .).
Trn reverse_trn(const Topology& topo, const Trn& trn);

/// Where each input link ends up under the swap bits of trn (toggles ignored).
std::vector<std::uint32_t> routing_permutation(const Topology& topo, const Trn& trn);

Trn random_trn(const Topology& topo, std::mt19937_64& rng);
Block random_block(std::size_t n, std::mt19937_64& rng);

/// y = A x + b over GF(2). Column j of A is stored as columns[j].
struct AffineModel {
  std::vector<BitVector> columns;
  BitVector offset;

  Block apply(const Block& x) const;
  std::size_t rank() const;
};

AffineModel extract_affine(const Topology& topo, const Trn& trn);

/// Rank of a set of GF(2) vectors (rows or columns, as given).
std::size_t gf2_rank(std::vector<BitVector> vectors);

enum class CoverageMode { Exhaustive, Sampled };

/// Number of distinct routing permutations reached over swap settings.
/// Exhaustive mode enumerates all 2^switch_count settings and requires
/// switch_count <= 20 and 2^switch_count <= budget. Sampled mode draws
/// `budget` random settings.
std::size_t permutation_coverage(const Topology& topo, CoverageMode mode, std::uint64_t budget,
                                 std::uint64_t seed = 0);

}  // namespace extru
