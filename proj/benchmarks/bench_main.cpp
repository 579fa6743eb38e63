// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "extru/acorn.hpp"
#include "extru/cstn.hpp"
#include "extru/protocol.hpp"
#include "extru/rng.hpp"
#include "extru/satattack.hpp"
#include "extru/sbox.hpp"

namespace {

using namespace extru;

Topology topology_for(const benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  return state.range(1) == 0 ? Topology::omega(n) : Topology::log_extra(n);
}

void BM_CstnForward(benchmark::State& state) {
  const auto t = topology_for(state);
  std::mt19937_64 rng(1);
  const Trn trn = random_trn(t, rng);
  Block x = random_block(t.n(), rng);
  for (auto _ : state) {
    x = apply_forward(t, trn, x);
    benchmark::DoNotOptimize(x);
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(t.n() / 8));
}
BENCHMARK(BM_CstnForward)->Args({64, 0})->Args({64, 1})->Args({256, 1});

void BM_CstnInverse(benchmark::State& state) {
  const auto t = topology_for(state);
  std::mt19937_64 rng(2);
  const Trn trn = random_trn(t, rng);
  Block y = random_block(t.n(), rng);
  for (auto _ : state) {
    y = apply_inverse(t, trn, y);
    benchmark::DoNotOptimize(y);
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(t.n() / 8));
}
BENCHMARK(BM_CstnInverse)->Args({64, 1});

void BM_Sbox(benchmark::State& state) {
  std::mt19937_64 rng(3);
  Block x = random_block(64, rng);
  const auto& s = SboxTable::khazad();
  for (auto _ : state) {
    x = substitute(s, x);
    benchmark::DoNotOptimize(x);
  }
  state.SetBytesProcessed(state.iterations() * 8);
}
BENCHMARK(BM_Sbox);

void BM_AcornSeal(benchmark::State& state) {
  acorn::AeadKey key{};
  acorn::Npub npub{};
  const std::vector<std::uint8_t> pt(static_cast<std::size_t>(state.range(0)), 0x42);
  for (auto _ : state) {
    auto sealed = acorn::seal(key, npub, {}, pt);
    benchmark::DoNotOptimize(sealed);
  }
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AcornSeal)->Arg(120)->Arg(2048);

void BM_Trivium(benchmark::State& state) {
  const std::vector<std::uint8_t> key(10, 1);
  const std::vector<std::uint8_t> iv(10, 2);
  rng::Trivium t(key, iv);
  for (auto _ : state) {
    auto s = t.keystream(4096);
    benchmark::DoNotOptimize(s);
  }
  state.SetBytesProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_Trivium);

protocol::SessionConfig config(protocol::Role role) {
  protocol::SessionConfig c;
  c.n = 64;
  c.kind = NetworkKind::LogExtra;
  c.m = 4;
  c.T = 32;
  c.role = role;
  return c;
}

void BM_ProtocolRoundTrip(benchmark::State& state) {
  rng::SeededSource entropy(4);
  protocol::Transmitter tx(config(protocol::Role::Initiator), entropy);
  protocol::Receiver rx(config(protocol::Role::Responder));
  std::mt19937_64 rng(5);
  const Block x = random_block(64, rng);
  for (auto _ : state) {
    for (const auto& f : tx.tx_block(x)) {
      auto out = rx.rx_frame(f);
      benchmark::DoNotOptimize(out);
    }
  }
  state.SetBytesProcessed(state.iterations() * 8);
}
BENCHMARK(BM_ProtocolRoundTrip);

void BM_SatAttackOmega(benchmark::State& state) {
  const auto t = Topology::omega(static_cast<std::size_t>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto b = satattack::derive_safe_bound(t, 1, 60, ++seed);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_SatAttackOmega)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
