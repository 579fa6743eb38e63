// SPDX-License-Identifier: Apache-2.0
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "extru/satattack.hpp"
#include "extru/sbox.hpp"

using namespace extru;
using namespace extru::satattack;

namespace {

// Fix key and input with unit clauses; the model must reproduce the
// reference evaluation and the complement of any output bit must be UNSAT.
void cross_check(Solver& s, const Topology& t, bool with_sbox, std::mt19937_64& rng) {
  const Lit truth = s.new_var();
  s.add_clause({truth});
  std::vector<Lit> key(t.selector_count());
  std::vector<Lit> x(t.n());
  for (auto& l : key) l = s.new_var();
  for (auto& l : x) l = s.new_var();
  const auto y = encode_cstn(s, t, key, x, truth, with_sbox);
  REQUIRE(y.size() == t.n());
  const Trn trn = random_trn(t, rng);
  const Block in = random_block(t.n(), rng);
  std::vector<Lit> units;
  for (std::size_t i = 0; i < key.size(); ++i) units.push_back(trn.test(i) ? key[i] : -key[i]);
  for (std::size_t i = 0; i < x.size(); ++i) units.push_back(in.test(i) ? x[i] : -x[i]);
  const auto deadline = Clock::now() + std::chrono::seconds(30);
  REQUIRE(s.solve(units, deadline) == SolveResult::Sat);
  Block expect = apply_forward(t, trn, in);
  if (with_sbox) expect = substitute(SboxTable::khazad(), expect);
  for (std::size_t i = 0; i < t.n(); ++i) {
    const bool got = y[i] == truth ? true : y[i] == -truth ? false : (y[i] > 0 ? s.value(y[i]) : !s.value(-y[i]));
    REQUIRE(got == expect.test(i));
  }
  const std::size_t bit = rng() % t.n();
  auto flipped = units;
  flipped.push_back(expect.test(bit) ? -y[bit] : y[bit]);
  CHECK(s.solve(flipped, deadline) == SolveResult::Unsat);
}

}  // namespace

TEST_CASE("CNF encoding agrees with the network, both solvers") {
  std::mt19937_64 rng(17);
  for (const char* name : {"cadical", "picosat"}) {
    CAPTURE(name);
    for (const auto& t : {Topology::omega(4), Topology::omega(8), Topology::log_extra(16), Topology::log_extra(64)}) {
      CAPTURE(t.describe());
      for (int rep = 0; rep < 3; ++rep) {
        auto s = solver_factory(name)();
        cross_check(*s, t, false, rng);
      }
      if (t.n() % 8 == 0) {
        auto s = solver_factory(name)();
        cross_check(*s, t, true, rng);
      }
    }
  }
  CHECK_THROWS_AS(solver_factory("minisat"), std::invalid_argument);
}

TEST_CASE("DIMACS export") {
  const auto c = encode_cnf(Topology::omega(4));
  const std::string text = c.to_dimacs();
  std::istringstream in(text);
  std::string p, cnf;
  int vars = 0;
  std::size_t clauses = 0;
  std::string line;
  while (std::getline(in, line) && line.rfind("c", 0) == 0) {
  }
  std::istringstream header(line);
  header >> p >> cnf >> vars >> clauses;
  CHECK(p == "p");
  CHECK(cnf == "cnf");
  CHECK(vars == c.cnf.variables());
  CHECK(clauses == c.cnf.clause_count());
  CHECK(c.key.size() == 12);
  CHECK(c.inputs.size() == 4);
  CHECK(c.outputs.size() == 4);
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      CHECK(line.substr(line.size() - 2) == " 0");
      ++lines;
    }
  }
  CHECK(lines == clauses);
}

TEST_CASE("attack on small Omega networks recovers an equivalent configuration") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {4u, 8u, 16u}) {
    const auto t = Topology::omega(n);
    for (int trial = 0; trial < 3; ++trial) {
      const Trn hidden = random_trn(t, rng);
      const auto oracle = make_oracle(t, hidden);
      std::size_t callbacks = 0;
      AttackOptions opts;
      opts.on_dip = [&](std::size_t i, double) { CHECK(i == ++callbacks); };
      const auto trace = attack(t, oracle, opts);
      CAPTURE(n);
      REQUIRE_FALSE(trace.censored);
      CHECK(trace.verdict == Verdict::Equivalent);
      REQUIRE(trace.recovered);
      CHECK(trace.iterations == trace.dips.size());
      CHECK(callbacks == trace.iterations);
      CHECK(trace.iterations >= 2);
      CHECK(consistent(t, *trace.recovered, trace.dips));
      for (const auto& d : trace.dips) CHECK(oracle(d.input) == d.output);
      // DIPs are distinct inputs.
      for (std::size_t i = 0; i < trace.dips.size(); ++i) {
        for (std::size_t j = i + 1; j < trace.dips.size(); ++j) CHECK(trace.dips[i].input != trace.dips[j].input);
      }
    }
  }
}

TEST_CASE("attack with the S-box layer") {
  std::mt19937_64 rng(6);
  const auto t = Topology::omega(8);
  const Trn hidden = random_trn(t, rng);
  AttackOptions opts;
  opts.with_sbox = true;
  const auto trace = attack(t, make_oracle(t, hidden, true), opts);
  REQUIRE_FALSE(trace.censored);
  CHECK(trace.verdict == Verdict::Equivalent);
  CHECK(consistent(t, *trace.recovered, trace.dips, true));
}

TEST_CASE("equivalence check notices a wrong key") {
  std::mt19937_64 rng(8);
  const auto t = Topology::omega(16);
  const Trn hidden = random_trn(t, rng);
  Trn wrong = hidden;
  wrong.flip(1);  // a toggle bit always changes the function
  CHECK(functionally_equivalent(t, hidden, make_oracle(t, hidden), false, 1000, 1));
  CHECK_FALSE(functionally_equivalent(t, wrong, make_oracle(t, hidden), false, 1000, 1));
}

TEST_CASE("timeouts are censored, not failures") {
  std::mt19937_64 rng(9);
  const auto t = Topology::log_extra(64);
  AttackOptions opts;
  opts.timeout_seconds = 0.2;
  const auto trace = attack(t, make_oracle(t, random_trn(t, rng)), opts);
  CHECK(trace.censored);
  CHECK(trace.verdict == Verdict::Censored);
  CHECK_FALSE(trace.recovered);
  CHECK(trace.seconds < 5.0);
}

TEST_CASE("summarize_trials censoring rule") {
  const auto t = Topology::omega(8);
  auto make = [&](std::size_t iters, bool censored) {
    AttackTrace tr{t, false, {}, iters, 0.0, std::nullopt, censored ? Verdict::Censored : Verdict::Equivalent,
                   censored, "test"};
    return tr;
  };
  auto b = summarize_trials({make(5, false), make(7, false), make(3, true)});
  CHECK(b.estimate == 7);
  CHECK_FALSE(b.censored);
  b = summarize_trials({make(5, false), make(9, true)});
  CHECK(b.estimate == 9);
  CHECK(b.censored);
  b = summarize_trials({make(2, true)});
  CHECK(b.estimate == 2);
  CHECK(b.censored);
}

TEST_CASE("derive_safe_bound is reproducible and runs in parallel") {
  const auto t = Topology::omega(8);
  const auto serial = derive_safe_bound(t, 4, 30, 123);
  const auto parallel = derive_safe_bound(t, 4, 30, 123, {}, 3);
  REQUIRE(serial.trials.size() == 4);
  REQUIRE(parallel.trials.size() == 4);
  CHECK_FALSE(serial.censored);
  for (std::size_t i = 0; i < 4; ++i) CHECK(serial.trials[i].iterations == parallel.trials[i].iterations);
  CHECK(serial.estimate == parallel.estimate);
}

TEST_CASE("reference bounds") {
  CHECK(reference_safe_bound(Topology::omega(8)) == 7u);
  CHECK(reference_safe_bound(Topology::log_extra(64)) == 33u);
  CHECK_FALSE(reference_safe_bound(Topology::log_extra(64, 2)));
}

TEST_CASE("external DIMACS solver route") {
  const std::string cmd = EXTRU_DIMACS_SOLVER;
  std::mt19937_64 rng(10);
  const auto t = Topology::omega(8);
  const Trn hidden = random_trn(t, rng);
  AttackOptions opts;
  opts.solver = [cmd] { return make_dimacs_process_solver(cmd); };
  const auto trace = attack(t, make_oracle(t, hidden), opts);
  CHECK(trace.solver == "dimacs:" + cmd);
  REQUIRE_FALSE(trace.censored);
  CHECK(trace.verdict == Verdict::Equivalent);

  auto slow = make_dimacs_process_solver("sleep 10; echo");
  const Lit v = slow->new_var();
  slow->add_clause({v});
  const auto start = Clock::now();
  CHECK(slow->solve({}, Clock::now() + std::chrono::milliseconds(200)) == SolveResult::Timeout);
  CHECK(Clock::now() - start < std::chrono::seconds(5));

  auto broken = make_dimacs_process_solver("true");
  broken->add_clause({broken->new_var()});
  CHECK_THROWS_AS(broken->solve({}, Clock::now() + std::chrono::seconds(5)), std::runtime_error);
}

TEST_CASE("report JSON") {
  const auto t = Topology::omega(4);
  std::mt19937_64 rng(12);
  const auto trace = attack(t, make_oracle(t, random_trn(t, rng)));
  const std::string j = report_json(trace);
  CHECK(j.find("\"verdict\":\"equivalent\"") != std::string::npos);
  CHECK(j.find("\"iterations\":" + std::to_string(trace.iterations)) != std::string::npos);
}
