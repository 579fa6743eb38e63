// SPDX-License-Identifier: Apache-2.0
//
// Built-in property checks across all modules, for field diagnosis.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace extru {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  bool passed() const;
};

SelftestReport run_selftest(std::uint64_t seed = 1);

}  // namespace extru
