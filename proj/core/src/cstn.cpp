// SPDX-License-Identifier: Apache-2.0
#include "extru/cstn.hpp"

#include <bit>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

namespace extru {

namespace {

void require_size(const BitVector& v, std::size_t expected, const char* what) {
  if (v.size() != expected) {
    throw std::invalid_argument(std::string(what) + " has " + std::to_string(v.size()) +
                                " bits, network expects " + std::to_string(expected));
  }
}

void fill_random(BitVector& v, std::mt19937_64& rng) {
  auto words = v.words();
  for (auto& w : words) w = rng();
  if (v.size() % 64 != 0 && !words.empty()) {
    words.back() &= (std::uint64_t{1} << (v.size() % 64)) - 1;
  }
}

BitVector permute(const BitVector& v, std::span<const std::uint32_t> to) {
  BitVector out(v.size());
  const auto words = v.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (std::uint64_t bits = words[w]; bits != 0; bits &= bits - 1) {
      const std::size_t i = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
      out.set(to[i]);
    }
  }
  return out;
}

// One column of switches, forward direction: route, then toggle outputs.
void switch_column_forward(BitVector& v, const Trn& trn, std::size_t first_selector, std::size_t n) {
  std::size_t sel = first_selector;
  for (std::size_t link = 0; link < n; link += 2, sel += kSelectorsPerSwitch) {
    bool upper = v.test(link);
    bool lower = v.test(link + 1);
    if (trn.test(sel)) std::swap(upper, lower);
    v.set(link, upper != trn.test(sel + 1));
    v.set(link + 1, lower != trn.test(sel + 2));
  }
}

// Inverse of switch_column_forward: untoggle, then unswap.
void switch_column_inverse(BitVector& v, const Trn& trn, std::size_t first_selector, std::size_t n) {
  std::size_t sel = first_selector;
  for (std::size_t link = 0; link < n; link += 2, sel += kSelectorsPerSwitch) {
    bool upper = v.test(link) != trn.test(sel + 1);
    bool lower = v.test(link + 1) != trn.test(sel + 2);
    if (trn.test(sel)) std::swap(upper, lower);
    v.set(link, upper);
    v.set(link + 1, lower);
  }
}

}  // namespace

std::uint32_t perfect_shuffle(std::uint32_t link, std::size_t log2n) noexcept {
  const std::uint32_t mask = (std::uint32_t{1} << log2n) - 1;
  return ((link << 1) | (link >> (log2n - 1))) & mask;
}

Topology Topology::build(std::size_t n, NetworkKind kind, std::size_t m) {
  if (n < 4) throw std::invalid_argument("network width must be at least 4, got " + std::to_string(n));
  if (!std::has_single_bit(n)) {
    throw std::invalid_argument("network width must be a power of two, got " + std::to_string(n));
  }
  if (n > (std::size_t{1} << 20)) throw std::invalid_argument("network width too large");
  if (kind == NetworkKind::Omega && m != 0) {
    throw std::invalid_argument("omega network takes no extra stages");
  }
  if (kind == NetworkKind::LogExtra && m == 0) {
    throw std::invalid_argument("log network needs at least one extra stage");
  }

  Topology t;
  t.n_ = n;
  t.log2n_ = static_cast<std::size_t>(std::countr_zero(n));
  t.kind_ = kind;
  t.m_ = m;
  t.stages_ = t.log2n_ + m;

  // Boundary 0 is the identity; every stage (extra ones included) is
  // followed by a perfect shuffle.
  std::vector<std::uint32_t> identity(n);
  std::vector<std::uint32_t> shuffle(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    identity[i] = i;
    shuffle[i] = perfect_shuffle(i, t.log2n_);
  }
  t.wiring_.push_back(std::move(identity));
  for (std::size_t s = 0; s < t.stages_; ++s) t.wiring_.push_back(shuffle);
  t.finish_wiring();
  return t;
}

Topology Topology::log_extra(std::size_t n) {
  if (n < 8 || !std::has_single_bit(n)) {
    throw std::invalid_argument("default log network needs a power-of-two width of at least 8");
  }
  return build(n, NetworkKind::LogExtra, static_cast<std::size_t>(std::countr_zero(n)) - 2);
}

void Topology::finish_wiring() {
  inverse_.clear();
  identity_.clear();
  for (const auto& w : wiring_) {
    if (w.size() != n_) throw std::logic_error("wiring permutation has wrong length");
    std::vector<std::uint32_t> inv(n_, UINT32_MAX);
    bool ident = true;
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (w[i] >= n_ || inv[w[i]] != UINT32_MAX) throw std::logic_error("wiring is not a bijection");
      inv[w[i]] = i;
      ident = ident && w[i] == i;
    }
    inverse_.push_back(std::move(inv));
    identity_.push_back(ident);
  }
}

Topology Topology::mirror() const {
  Topology t = *this;
  t.mirrored_ = !mirrored_;
  t.wiring_.assign(inverse_.rbegin(), inverse_.rend());
  t.finish_wiring();
  return t;
}

std::string Topology::describe() const {
  std::string s = kind_ == NetworkKind::Omega
                      ? "omega-" + std::to_string(n_)
                      : "log(" + std::to_string(n_) + "," + std::to_string(m_) + ",1)";
  if (mirrored_) s += "-mirror";
  return s;
}

Block apply_forward(const Topology& topo, const Trn& trn, const Block& x) {
  require_size(x, topo.n(), "block");
  require_size(trn, topo.selector_count(), "configuration");
  const std::size_t n = topo.n();
  BitVector v = topo.wiring_is_identity(0) ? BitVector(x) : permute(x, topo.wiring(0));
  for (std::size_t s = 0; s < topo.stages(); ++s) {
    switch_column_forward(v, trn, topo.selector_index(s, 0, Selector::Swap), n);
    if (!topo.wiring_is_identity(s + 1)) v = permute(v, topo.wiring(s + 1));
  }
  return Block(std::move(v));
}

Block apply_inverse(const Topology& topo, const Trn& trn, const Block& y) {
  require_size(y, topo.n(), "block");
  require_size(trn, topo.selector_count(), "configuration");
  const std::size_t n = topo.n();
  BitVector v = y;
  for (std::size_t s = topo.stages(); s-- > 0;) {
    if (!topo.wiring_is_identity(s + 1)) v = permute(v, topo.inverse_wiring(s + 1));
    switch_column_inverse(v, trn, topo.selector_index(s, 0, Selector::Swap), n);
  }
  if (!topo.wiring_is_identity(0)) v = permute(v, topo.inverse_wiring(0));
  return Block(std::move(v));
}

Trn reverse_trn(const Topology& topo, const Trn& trn) {
  require_size(trn, topo.selector_count(), "configuration");
  const std::size_t half = topo.switches_per_stage();
  const std::size_t last = topo.stages() - 1;
  Trn out(trn.size());
  for (std::size_t s = 0; s < topo.stages(); ++s) {
    for (std::size_t sw = 0; sw < half; ++sw) {
      const std::size_t src = topo.selector_index(s, sw, Selector::Swap);
      const std::size_t dst = topo.selector_index(last - s, sw, Selector::Swap);
      const bool swap = trn.test(src);
      // Toggling before the crossbar equals toggling the opposite output after it.
      out.set(dst, swap);
      out.set(dst + 1, trn.test(swap ? src + 2 : src + 1));
      out.set(dst + 2, trn.test(swap ? src + 1 : src + 2));
    }
  }
  return out;
}

std::vector<std::uint32_t> routing_permutation(const Topology& topo, const Trn& trn) {
  require_size(trn, topo.selector_count(), "configuration");
  std::vector<std::uint32_t> where(topo.n());
  for (std::uint32_t i = 0; i < topo.n(); ++i) {
    std::uint32_t p = topo.wiring(0)[i];
    for (std::size_t s = 0; s < topo.stages(); ++s) {
      if (trn.test(topo.selector_index(s, p >> 1, Selector::Swap))) p ^= 1u;
      p = topo.wiring(s + 1)[p];
    }
    where[i] = p;
  }
  return where;
}

Trn random_trn(const Topology& topo, std::mt19937_64& rng) {
  Trn t(topo.selector_count());
  fill_random(t, rng);
  return t;
}

Block random_block(std::size_t n, std::mt19937_64& rng) {
  Block b(n);
  fill_random(b, rng);
  return b;
}

Block AffineModel::apply(const Block& x) const {
  if (x.size() != columns.size()) throw std::invalid_argument("affine model: block width mismatch");
  BitVector y = offset;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (x.test(j)) y ^= columns[j];
  }
  return Block(std::move(y));
}

std::size_t AffineModel::rank() const { return gf2_rank(columns); }

AffineModel extract_affine(const Topology& topo, const Trn& trn) {
  AffineModel model;
  model.offset = apply_forward(topo, trn, Block(topo.n()));
  model.columns.reserve(topo.n());
  for (std::size_t j = 0; j < topo.n(); ++j) {
    model.columns.push_back(apply_forward(topo, trn, Block(BitVector::unit(j, topo.n()))) ^ model.offset);
  }
  return model;
}

std::size_t gf2_rank(std::vector<BitVector> vectors) {
  std::size_t rank = 0;
  if (vectors.empty()) return 0;
  const std::size_t width = vectors.front().size();
  for (std::size_t col = 0; col < width && rank < vectors.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < vectors.size() && !vectors[pivot].test(col)) ++pivot;
    if (pivot == vectors.size()) continue;
    std::swap(vectors[rank], vectors[pivot]);
    for (std::size_t r = 0; r < vectors.size(); ++r) {
      if (r != rank && vectors[r].test(col)) vectors[r] ^= vectors[rank];
    }
    ++rank;
  }
  return rank;
}

std::size_t permutation_coverage(const Topology& topo, CoverageMode mode, std::uint64_t budget,
                                 std::uint64_t seed) {
  const std::size_t switches = topo.switch_count();
  const std::size_t n = topo.n();
  if (n > 65536) throw std::invalid_argument("coverage: network too wide");

  std::unordered_set<std::string> seen;
  std::string key(2 * n, '\0');
  std::vector<std::uint8_t> swaps(switches);

  auto record = [&]() {
    for (std::uint32_t i = 0; i < n; ++i) {
      std::uint32_t p = topo.wiring(0)[i];
      for (std::size_t s = 0; s < topo.stages(); ++s) {
        if (swaps[s * (n / 2) + (p >> 1)] != 0) p ^= 1u;
        p = topo.wiring(s + 1)[p];
      }
      key[2 * i] = static_cast<char>(p & 0xff);
      key[2 * i + 1] = static_cast<char>(p >> 8);
    }
    seen.insert(key);
  };

  if (mode == CoverageMode::Exhaustive) {
    if (switches > 20) {
      throw std::length_error("coverage: exhaustive mode supports at most 20 swap bits, network has " +
                              std::to_string(switches));
    }
    const std::uint64_t settings = std::uint64_t{1} << switches;
    if (settings > budget) {
      throw std::length_error("coverage: " + std::to_string(settings) + " settings exceed budget " +
                              std::to_string(budget));
    }
    for (std::uint64_t code = 0; code < settings; ++code) {
      for (std::size_t k = 0; k < switches; ++k) swaps[k] = static_cast<std::uint8_t>((code >> k) & 1u);
      record();
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::uint64_t trial = 0; trial < budget; ++trial) {
      for (auto& b : swaps) b = static_cast<std::uint8_t>(rng() & 1u);
      record();
    }
  }
  return seen.size();
}

}  // namespace extru
