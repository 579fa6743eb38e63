// SPDX-License-Identifier: Apache-2.0
#include "extru/costmodel.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace extru::costmodel {

namespace detail {
extern const char* const kFixturesJson;
}

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

CipherParams read_params(const std::string& name, const nlohmann::json& hw, const nlohmann::json& cipher,
                         ClockSource clock) {
  CipherParams p;
  p.name = name;
  p.c_fix = cipher.at("c_fix").get<double>();
  p.c_byte = cipher.at("c_byte").get<double>();
  p.prng_bits_per_cycle = cipher.at("prng_bits_per_cycle").get<double>();
  p.power_uw = hw.at("power_uw").get<double>();
  p.clock_ns = clock == ClockSource::Asic ? hw.at("delay_ns").get<double>() : 1000.0 / hw.at("fpga_mhz").get<double>();
  p.validate();
  return p;
}

}  // namespace

void CipherParams::validate() const {
  if (!(c_fix > 0 && c_byte > 0 && prng_bits_per_cycle > 0 && clock_ns > 0 && power_uw > 0)) {
    throw std::invalid_argument("cipher parameters for '" + name + "' must all be positive");
  }
}

std::string accounting_name(Accounting a) { return a == Accounting::PerInterval ? "per-interval" : "single-trn"; }

Accounting parse_accounting(std::string_view name) {
  if (name == "per-interval") return Accounting::PerInterval;
  if (name == "single-trn") return Accounting::SingleTrn;
  throw std::invalid_argument("unknown accounting mode '" + std::string(name) + "'");
}

double EnergyTable::at(const std::string& design, std::size_t bytes) const {
  const auto& row = rows.at(design);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == bytes) return row.at(i);
  }
  throw std::out_of_range("energy table has no column for " + std::to_string(bytes) + " bytes");
}

const std::string& builtin_fixtures_json() {
  static const std::string text(detail::kFixturesJson);
  return text;
}

Fixtures parse_fixtures(std::string_view json_text, ClockSource clock) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    Fixtures f;
    for (const auto& [name, c] : j.at("ciphers").items()) {
      f.ciphers[name] = read_params(name, c, c, clock);
      f.extru[name] = read_params("extru-" + name, j.at("extru").at(name), c, clock);
    }
    const auto& t = j.at("energy_table");
    f.energy_table.sizes = t.at("sizes_bytes").get<std::vector<std::size_t>>();
    for (const auto& [name, row] : t.at("rows").items()) {
      f.energy_table.rows[name] = row.get<std::vector<double>>();
      if (f.energy_table.rows[name].size() != f.energy_table.sizes.size()) {
        throw std::invalid_argument("energy table row '" + name + "' has the wrong length");
      }
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("cost fixtures: ") + e.what());
  }
}

const Fixtures& builtin_fixtures(ClockSource clock) {
  static const Fixtures asic = parse_fixtures(builtin_fixtures_json(), ClockSource::Asic);
  static const Fixtures fpga = parse_fixtures(builtin_fixtures_json(), ClockSource::Fpga);
  return clock == ClockSource::Asic ? asic : fpga;
}

std::uint64_t cycles_cipher(const CipherParams& p, std::uint64_t msg_bytes, bool include_init) {
  const double c = (include_init ? p.c_fix : 0.0) + p.c_byte * static_cast<double>(msg_bytes);
  return static_cast<std::uint64_t>(std::llround(c));
}

std::uint64_t blocks_for(const Topology& topo, std::uint64_t msg_bytes) { return ceil_div(msg_bytes, topo.n() / 8); }

std::uint64_t rekeys_for(const ExtruScenario& s, std::uint64_t msg_bytes) {
  if (s.T < 1) throw std::invalid_argument("T must be at least 1");
  const std::uint64_t blocks = blocks_for(s.topology, msg_bytes);
  if (blocks == 0) return 0;
  return s.accounting == Accounting::PerInterval ? ceil_div(blocks, s.T) : 1;
}

std::uint64_t cycles_extru(const ExtruScenario& s, std::uint64_t msg_bytes, bool include_init) {
  const std::uint64_t blocks = blocks_for(s.topology, msg_bytes);
  const std::uint64_t trn_bytes = ceil_div(s.topology.selector_count(), 8);
  const double c = (include_init ? s.params.c_fix : 0.0) +
                   static_cast<double>(rekeys_for(s, msg_bytes)) * s.params.c_byte * static_cast<double>(trn_bytes) +
                   static_cast<double>(blocks);
  return static_cast<std::uint64_t>(std::llround(c));
}

std::uint64_t cycles_extru(const CipherParams& p, const Topology& topo, std::uint64_t msg_bytes, std::size_t T,
                           bool include_init, Accounting accounting) {
  return cycles_extru(ExtruScenario{p, topo, T, accounting}, msg_bytes, include_init);
}

double energy(const CipherParams& p, std::uint64_t cycles) {
  return p.power_uw * static_cast<double>(cycles) * p.clock_ns;
}

double time_us(const CipherParams& p, std::uint64_t cycles) { return static_cast<double>(cycles) * p.clock_ns / 1000.0; }

std::optional<std::uint64_t> crossover(const CipherParams& baseline, const ExtruScenario& extru, bool include_init,
                                       std::uint64_t limit) {
  for (std::uint64_t b = 1; b <= limit; ++b) {
    const double tb = time_us(baseline, cycles_cipher(baseline, b, include_init));
    const double te = time_us(extru.params, cycles_extru(extru, b, include_init));
    if (te < tb) return b;
  }
  return std::nullopt;
}

SweepResult sweep(const CipherParams& baseline, const ExtruScenario& extru, const std::vector<std::uint64_t>& sizes,
                  bool include_init) {
  if (sizes.empty()) throw std::invalid_argument("sweep needs at least one message size");
  SweepResult out;
  for (const auto bytes : sizes) {
    ScenarioResult b;
    b.design = baseline.name;
    b.msg_bytes = bytes;
    b.cycles = cycles_cipher(baseline, bytes, include_init);
    b.time_us = time_us(baseline, b.cycles);
    b.energy = energy(baseline, b.cycles);
    ScenarioResult e;
    e.design = extru.params.name + "/" + accounting_name(extru.accounting);
    e.msg_bytes = bytes;
    e.cycles = cycles_extru(extru, bytes, include_init);
    e.time_us = time_us(extru.params, e.cycles);
    e.energy = energy(extru.params, e.cycles);
    e.speedup = e.time_us > 0 ? b.time_us / e.time_us : 0.0;
    out.rows.push_back(b);
    out.rows.push_back(e);
  }
  out.crossover_bytes = crossover(baseline, extru, include_init);
  return out;
}

std::string to_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "design,msg_bytes,cycles,time_us,energy,speedup\n";
  os << std::setprecision(10);
  for (const auto& r : result.rows) {
    os << r.design << ',' << r.msg_bytes << ',' << r.cycles << ',' << r.time_us << ',' << r.energy << ','
       << r.speedup << '\n';
  }
  return os.str();
}

double table_reduction(const EnergyTable& table, const std::string& baseline, const std::string& extru,
                       std::size_t bytes) {
  return 1.0 - table.at(extru, bytes) / table.at(baseline, bytes);
}

const std::vector<std::uint64_t>& standard_sizes() {
  static const std::vector<std::uint64_t> sizes{32, 64, 128, 256, 512, 768, 1024, 2048};
  return sizes;
}

}  // namespace extru::costmodel
