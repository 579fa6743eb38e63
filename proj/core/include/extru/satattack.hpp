// SPDX-License-Identifier: Apache-2.0
//
// Oracle-guided SAT attack on a CSTN with the configuration as the unknown
// key: Tseitin encoding, miter/DIP loop and post-hoc equivalence check.
#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "extru/cstn.hpp"

namespace extru::satattack {

using Lit = int;

/// Anything that accepts variables and clauses (DIMACS literal convention).
class CnfSink {
 public:
  virtual ~CnfSink() = default;
  virtual Lit new_var() = 0;
  virtual void add_clause(std::span<const Lit> clause) = 0;
  void add_clause(std::initializer_list<Lit> clause) { add_clause(std::span(clause.begin(), clause.size())); }
};

/// Stored formula with DIMACS export.
class Cnf final : public CnfSink {
 public:
  Lit new_var() override { return ++vars_; }
  void add_clause(std::span<const Lit> clause) override;
  using CnfSink::add_clause;

  int variables() const noexcept { return vars_; }
  std::size_t clause_count() const noexcept { return starts_.size(); }
  std::span<const Lit> clause(std::size_t i) const;
  std::string to_dimacs(std::span<const Lit> extra_units = {}) const;

 private:
  int vars_ = 0;
  std::vector<Lit> lits_;
  std::vector<std::size_t> starts_;
};

enum class SolveResult { Sat, Unsat, Timeout };

using Clock = std::chrono::steady_clock;

class Solver : public CnfSink {
 public:
  /// Solves under the given assumptions; returns Timeout if `deadline`
  /// passes first.
  virtual SolveResult solve(std::span<const Lit> assumptions, Clock::time_point deadline) = 0;
  /// Model value of a variable after Sat.
  virtual bool value(Lit var) const = 0;
  virtual std::string name() const = 0;
};

/// In-process incremental solvers. CaDiCaL is the default for attacks.
std::unique_ptr<Solver> make_cadical_solver();
std::unique_ptr<Solver> make_picosat_solver();

/// Runs `command <file.cnf>` per query; the command must print a
/// SAT-competition style answer ("s SATISFIABLE" with "v" lines or
/// "s UNSATISFIABLE").
std::unique_ptr<Solver> make_dimacs_process_solver(std::string command);

using SolverFactory = std::function<std::unique_ptr<Solver>()>;

/// "cadical" or "picosat"; throws std::invalid_argument otherwise.
SolverFactory solver_factory(std::string_view name);

/// Encodes apply_forward (optionally followed by the byte S-box) over
/// symbolic key literals. `inputs` may contain the constant literals
/// `truth` / -`truth`; simplification keeps constant-input copies small.
/// Each general switch output costs 8 clauses and no auxiliary variables.
std::vector<Lit> encode_cstn(CnfSink& sink, const Topology& topo, std::span<const Lit> key,
                             std::span<const Lit> inputs, Lit truth, bool with_sbox = false);

struct KeyedCircuit {
  Topology topology;
  bool with_sbox = false;
  Cnf cnf;
  Lit truth = 0;
  std::vector<Lit> key;
  std::vector<Lit> inputs;
  std::vector<Lit> outputs;

  std::string to_dimacs() const { return cnf.to_dimacs(); }
};

/// Fully symbolic circuit: satisfying assignments are exactly the
/// (trn, x, y) with y = f_trn(x).
KeyedCircuit encode_cnf(const Topology& topo, bool with_sbox = false);

using Oracle = std::function<Block(const Block&)>;

/// apply_forward under a hidden configuration, optionally followed by the S-box.
Oracle make_oracle(const Topology& topo, const Trn& hidden, bool with_sbox = false);

enum class Verdict { Equivalent, NotEquivalent, Censored };

std::string verdict_name(Verdict v);

struct Dip {
  Block input;
  Block output;
};

struct AttackTrace {
  Topology topology;
  bool with_sbox = false;
  std::vector<Dip> dips;
  std::size_t iterations = 0;
  double seconds = 0.0;
  std::optional<Trn> recovered;
  Verdict verdict = Verdict::Censored;
  bool censored = true;
  std::string solver;
};

struct AttackOptions {
  double timeout_seconds = 60.0;
  bool with_sbox = false;
  /// Inputs used by the equivalence check when n > 16.
  std::size_t verify_samples = 100000;
  std::uint64_t seed = 1;
  SolverFactory solver;  // CaDiCaL when empty
  /// Called after each DIP with the iteration count and elapsed seconds.
  std::function<void(std::size_t, double)> on_dip;
};

AttackTrace attack(const Topology& topo, const Oracle& oracle, const AttackOptions& options = {});

/// Equivalence check used for the verdict: every input for n <= 16,
/// otherwise `samples` random inputs.
bool functionally_equivalent(const Topology& topo, const Trn& candidate, const Oracle& oracle, bool with_sbox,
                             std::size_t samples, std::uint64_t seed);

/// Whether `trn` reproduces every recorded DIP pair.
bool consistent(const Topology& topo, const Trn& trn, std::span<const Dip> dips, bool with_sbox = false);

struct SafeBound {
  std::size_t estimate = 0;
  /// True when the estimate is only a lower bound because the largest DIP
  /// counts came from runs that hit the timeout.
  bool censored = false;
  std::vector<AttackTrace> trials;
};

/// Attacks `trials` independent random hidden keys. The estimate is the
/// largest DIP count over all trials; it is flagged censored when that
/// maximum comes from a timed-out trial.
/// Trial t uses a hidden key drawn from std::mt19937_64(seed + t); up to
/// `jobs` trials run concurrently.
SafeBound derive_safe_bound(const Topology& topo, std::size_t trials, double timeout_seconds,
                            std::uint64_t seed = 1, SolverFactory solver = {}, std::size_t jobs = 1);

/// Combines finished trials into an estimate (as derive_safe_bound does).
SafeBound summarize_trials(std::vector<AttackTrace> trials);

/// Reference DIP counts (N) for the default networks, where published
/// measurements exist. LOG_{64,4,1} reports 33: its attack did not finish
/// and at least 33 DIPs are expected.
std::optional<std::size_t> reference_safe_bound(const Topology& topo);

/// Single-line JSON {size, kind, m, iterations, seconds, verdict, censored, ...}.
std::string report_json(const AttackTrace& trace);

}  // namespace extru::satattack
