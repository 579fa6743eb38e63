// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "extru/costmodel.hpp"

using namespace extru;
using namespace extru::costmodel;

namespace {

const CipherParams& cipher(const std::string& name) { return builtin_fixtures().ciphers.at(name); }

ExtruScenario scenario(const std::string& baseline, Accounting a) {
  CipherParams p = builtin_fixtures().extru.at(baseline);
  p.c_fix = cipher(baseline).c_fix;
  p.c_byte = cipher(baseline).c_byte;
  return ExtruScenario{p, Topology::log_extra(64, 4), 32, a};
}

}  // namespace

TEST_CASE("cipher cycle model") {
  CHECK(cycles_cipher(cipher("aes-gcm"), 128, true) == 19708);
  CHECK(cycles_cipher(cipher("acorn"), 0, true) == 20452);
  CHECK(cycles_cipher(cipher("acorn"), 0, false) == 0);
  CHECK(cycles_cipher(cipher("acorn"), 100, false) == 1700);
}

TEST_CASE("ExTru cycle model") {
  const auto topo = Topology::log_extra(64, 4);
  const auto& acorn = cipher("acorn");
  CHECK(cycles_extru(acorn, topo, 256, 32, false) == 2072);
  CHECK(cycles_extru(acorn, topo, 0, 32, true) == 20452);
  CHECK(cycles_extru(acorn, topo, 0, 32, false) == 0);
  CHECK(blocks_for(topo, 0) == 0);
  CHECK(blocks_for(topo, 1) == 1);
  CHECK(blocks_for(topo, 257) == 33);
  const auto per = scenario("acorn", Accounting::PerInterval);
  const auto single = scenario("acorn", Accounting::SingleTrn);
  CHECK(rekeys_for(per, 2048) == 8);
  CHECK(rekeys_for(single, 2048) == 1);
  CHECK(cycles_extru(per, 2048, false) == 8 * 17 * 120 + 256);
  CHECK(cycles_extru(single, 2048, false) == 17 * 120 + 256);
}

TEST_CASE("energy and time follow the clock") {
  const auto& p = cipher("aes-gcm");
  CHECK(energy(p, 0) == 0.0);
  CHECK(time_us(p, 1000) == doctest::Approx(1000 * p.clock_ns / 1000.0));
  CHECK(energy(p, 1000) == doctest::Approx(p.power_uw * 1000 * p.clock_ns));
  const auto& fpga = builtin_fixtures(ClockSource::Fpga).ciphers.at("aes-gcm");
  CHECK(fpga.clock_ns == doctest::Approx(1000.0 / 158.3));
}

TEST_CASE("energy table reductions") {
  const auto& table = builtin_fixtures().energy_table;
  CHECK(100 * table_reduction(table, "aes-gcm", "extru-aes-gcm", 2048) == doctest::Approx(94.33).epsilon(0.001));
  CHECK(100 * table_reduction(table, "acorn", "extru-acorn", 2048) == doctest::Approx(67.71).epsilon(0.001));
  CHECK(std::abs(100 * table_reduction(table, "aes-gcm", "extru-aes-gcm", 2048) - 94.5) <= 0.5);
  CHECK(std::abs(100 * table_reduction(table, "acorn", "extru-acorn", 2048) - 67.8) <= 0.5);
  CHECK_THROWS(table.at("acorn", 100));
  CHECK_THROWS(table.at("des", 32));
}

TEST_CASE("model flatness") {
  for (const std::string base : {"acorn", "aes-gcm"}) {
    const auto single = scenario(base, Accounting::SingleTrn);
    const double flat = energy(single.params, cycles_extru(single, 2048, false)) /
                        energy(single.params, cycles_extru(single, 32, false));
    CHECK(flat <= 1.5);
    const auto& c = cipher(base);
    const double linear = energy(c, cycles_cipher(c, 2048, false)) / energy(c, cycles_cipher(c, 32, false));
    CHECK(linear >= 7.0);
  }
  const auto& table = builtin_fixtures().energy_table;
  CHECK(table.at("extru-acorn", 2048) / table.at("extru-acorn", 32) <= 1.5);
  CHECK(table.at("acorn", 2048) / table.at("acorn", 32) >= 7.0);
}

TEST_CASE("crossover: ExTru loses on small messages and wins on large ones") {
  for (const std::string base : {"acorn", "aes-gcm"}) {
    for (auto a : {Accounting::PerInterval, Accounting::SingleTrn}) {
      const auto s = scenario(base, a);
      const auto& c = cipher(base);
      CHECK(cycles_extru(s, 16, false) > cycles_cipher(c, 16, false));
      const auto x = crossover(c, s);
      REQUIRE(x);
      CHECK(cycles_extru(s, *x, false) < cycles_cipher(c, *x, false));
    }
  }
  CipherParams cheap = cipher("acorn");
  cheap.c_byte = 2;
  CHECK(crossover(cheap, scenario("acorn", Accounting::SingleTrn)));
}

TEST_CASE("sweep and CSV") {
  const auto s = scenario("aes-gcm", Accounting::SingleTrn);
  const auto r = sweep(cipher("aes-gcm"), s, {64, 2048}, true);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[0].design == "aes-gcm");
  CHECK(r.rows[0].speedup == doctest::Approx(1.0));
  CHECK(r.rows[3].speedup > 1.0);
  const std::string csv = to_csv(r);
  CHECK(csv.rfind("design,msg_bytes,cycles,time_us,energy,speedup\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(standard_sizes().front() == 32);
  CHECK(standard_sizes().back() == 2048);
}

TEST_CASE("fixture parsing") {
  const auto f = parse_fixtures(builtin_fixtures_json());
  CHECK(f.ciphers.at("aes-gcm").c_fix == 10492);
  CHECK(parse_accounting("single-trn") == Accounting::SingleTrn);
  CHECK(accounting_name(Accounting::PerInterval) == "per-interval");
  CHECK_THROWS(parse_accounting("never"));
  CHECK_THROWS(parse_fixtures("{}"));
  CHECK_THROWS(parse_fixtures(R"({"ciphers":{"x":{"c_fix":-1}}})"));
  CipherParams bad;
  bad.name = "bad";
  CHECK_THROWS(bad.validate());
}
