// SPDX-License-Identifier: Apache-2.0
//
// Analytic cycle / time / energy model: a pure AEAD channel against the
// re-keyed CSTN channel, parameterised by measured hardware constants.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "extru/cstn.hpp"

namespace extru::costmodel {

struct CipherParams {
  std::string name;
  double c_fix = 0;   // initialization cycles
  double c_byte = 0;  // cycles per encrypted byte
  double prng_bits_per_cycle = 0;
  double clock_ns = 0;
  double power_uw = 0;

  /// Throws std::invalid_argument unless every field is positive.
  void validate() const;
};

/// How many TRNs an ExTru message pays for.
enum class Accounting {
  /// One S-frame per T blocks (what the protocol does).
  PerInterval,
  /// A single S-frame for the whole message.
  SingleTrn,
};

std::string accounting_name(Accounting a);
Accounting parse_accounting(std::string_view name);

enum class ClockSource { Asic, Fpga };

struct EnergyTable {
  std::vector<std::size_t> sizes;
  std::map<std::string, std::vector<double>> rows;

  /// Row value at `bytes`; throws std::out_of_range if absent.
  double at(const std::string& design, std::size_t bytes) const;
};

struct Fixtures {
  /// "aes-gcm", "acorn": pure-cipher designs.
  std::map<std::string, CipherParams> ciphers;
  /// Same keys: ExTru built around that cipher (c_fix/c_byte of the cipher,
  /// power/clock of the combined design).
  std::map<std::string, CipherParams> extru;
  EnergyTable energy_table;
};

/// Built-in fixtures (compiled from data/cost_fixtures.json).
const Fixtures& builtin_fixtures(ClockSource clock = ClockSource::Asic);
Fixtures parse_fixtures(std::string_view json_text, ClockSource clock = ClockSource::Asic);
const std::string& builtin_fixtures_json();

std::uint64_t cycles_cipher(const CipherParams& p, std::uint64_t msg_bytes, bool include_init);

struct ExtruScenario {
  CipherParams params;
  Topology topology = Topology::log_extra(64, 4);
  std::size_t T = 32;
  Accounting accounting = Accounting::PerInterval;
};

std::uint64_t blocks_for(const Topology& topo, std::uint64_t msg_bytes);
std::uint64_t rekeys_for(const ExtruScenario& s, std::uint64_t msg_bytes);

std::uint64_t cycles_extru(const CipherParams& p, const Topology& topo, std::uint64_t msg_bytes, std::size_t T,
                           bool include_init, Accounting accounting = Accounting::PerInterval);
std::uint64_t cycles_extru(const ExtruScenario& s, std::uint64_t msg_bytes, bool include_init);

/// power_uw * cycles * clock_ns, in femtojoules.
double energy(const CipherParams& p, std::uint64_t cycles);
double time_us(const CipherParams& p, std::uint64_t cycles);

struct ScenarioResult {
  std::string design;
  std::uint64_t msg_bytes = 0;
  std::uint64_t cycles = 0;
  double time_us = 0;
  double energy = 0;
  /// Baseline time over this row's time (1 for baseline rows).
  double speedup = 1;
};

struct SweepResult {
  std::vector<ScenarioResult> rows;
  /// Smallest message size, in bytes, at which ExTru takes less time.
  std::optional<std::uint64_t> crossover_bytes;
};

SweepResult sweep(const CipherParams& baseline, const ExtruScenario& extru, const std::vector<std::uint64_t>& sizes,
                  bool include_init = false);

/// Smallest size with ExTru time strictly below the baseline, searched up
/// to `limit` bytes.
std::optional<std::uint64_t> crossover(const CipherParams& baseline, const ExtruScenario& extru,
                                       bool include_init = false, std::uint64_t limit = std::uint64_t{1} << 24);

/// Header: design,msg_bytes,cycles,time_us,energy,speedup
std::string to_csv(const SweepResult& result);

/// 1 - extru/baseline for a row pair of the energy table.
double table_reduction(const EnergyTable& table, const std::string& baseline, const std::string& extru,
                       std::size_t bytes);

const std::vector<std::uint64_t>& standard_sizes();

}  // namespace extru::costmodel
