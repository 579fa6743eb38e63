// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "extru/selftest.hpp"

TEST_CASE("built-in self test passes") {
  const auto report = extru::run_selftest(3);
  CHECK(report.checks.size() >= 10);
  for (const auto& c : report.checks) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
  CHECK(report.passed());
}
