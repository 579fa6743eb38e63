// SPDX-License-Identifier: Apache-2.0
#include "extru/satattack.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cadical.hpp"

#include "extru/network_json.hpp"
#include "extru/sbox.hpp"
#include "json.hpp"

extern "C" {
#include "picosat.h"
}

namespace extru::satattack {

void Cnf::add_clause(std::span<const Lit> clause) {
  starts_.push_back(lits_.size());
  for (Lit l : clause) {
    if (l == 0 || std::abs(l) > vars_) throw std::invalid_argument("cnf: literal out of range");
    lits_.push_back(l);
  }
}

std::span<const Lit> Cnf::clause(std::size_t i) const {
  const std::size_t end = i + 1 < starts_.size() ? starts_[i + 1] : lits_.size();
  return std::span(lits_).subspan(starts_[i], end - starts_[i]);
}

std::string Cnf::to_dimacs(std::span<const Lit> extra_units) const {
  std::ostringstream os;
  os << "p cnf " << vars_ << ' ' << clause_count() + extra_units.size() << '\n';
  for (std::size_t i = 0; i < clause_count(); ++i) {
    for (Lit l : clause(i)) os << l << ' ';
    os << "0\n";
  }
  for (Lit l : extra_units) os << l << " 0\n";
  return os.str();
}

namespace {

class PicosatSolver final : public Solver {
 public:
  PicosatSolver() : ps_(picosat_init()) {
    // Random initial phase with a fixed seed. The default (Jeroslow-Wang)
    // phase stalls for minutes on some miter queries.
    picosat_set_global_default_phase(ps_, 3);
    picosat_set_seed(ps_, 1);
  }
  ~PicosatSolver() override { picosat_reset(ps_); }
  PicosatSolver(const PicosatSolver&) = delete;
  PicosatSolver& operator=(const PicosatSolver&) = delete;

  Lit new_var() override { return picosat_inc_max_var(ps_); }
  void add_clause(std::span<const Lit> clause) override {
    for (Lit l : clause) picosat_add(ps_, l);
    picosat_add(ps_, 0);
  }
  using CnfSink::add_clause;

  SolveResult solve(std::span<const Lit> assumptions, Clock::time_point deadline) override {
    deadline_ = deadline;
    picosat_set_interrupt(ps_, this, &PicosatSolver::interrupted);
    for (Lit l : assumptions) picosat_assume(ps_, l);
    switch (picosat_sat(ps_, -1)) {
      case PICOSAT_SATISFIABLE: return SolveResult::Sat;
      case PICOSAT_UNSATISFIABLE: return SolveResult::Unsat;
      default: return SolveResult::Timeout;
    }
  }

  bool value(Lit var) const override { return picosat_deref(ps_, var) > 0; }
  std::string name() const override { return "picosat"; }

 private:
  static int interrupted(void* self) {
    return Clock::now() >= static_cast<PicosatSolver*>(self)->deadline_ ? 1 : 0;
  }

  PicoSAT* ps_;
  Clock::time_point deadline_{};
};

class CadicalSolver final : public Solver, private CaDiCaL::Terminator {
 public:
  CadicalSolver() { solver_.connect_terminator(this); }
  ~CadicalSolver() override { solver_.disconnect_terminator(); }

  Lit new_var() override { return ++vars_; }
  void add_clause(std::span<const Lit> clause) override {
    for (Lit l : clause) solver_.add(l);
    solver_.add(0);
  }
  using CnfSink::add_clause;

  SolveResult solve(std::span<const Lit> assumptions, Clock::time_point deadline) override {
    deadline_ = deadline;
    for (Lit l : assumptions) solver_.assume(l);
    switch (solver_.solve()) {
      case 10: return SolveResult::Sat;
      case 20: return SolveResult::Unsat;
      default: return SolveResult::Timeout;
    }
  }

  bool value(Lit var) const override { return var <= solver_.vars() && solver_.val(var) > 0; }
  std::string name() const override { return "cadical"; }

 private:
  bool terminate() override { return Clock::now() >= deadline_; }

  mutable CaDiCaL::Solver solver_;
  Lit vars_ = 0;
  Clock::time_point deadline_{};
};

class DimacsProcessSolver final : public Solver {
 public:
  explicit DimacsProcessSolver(std::string command) : command_(std::move(command)) {}

  Lit new_var() override { return cnf_.new_var(); }
  void add_clause(std::span<const Lit> clause) override { cnf_.add_clause(clause); }
  using CnfSink::add_clause;

  SolveResult solve(std::span<const Lit> assumptions, Clock::time_point deadline) override;
  bool value(Lit var) const override {
    return static_cast<std::size_t>(var) < model_.size() && model_[static_cast<std::size_t>(var)];
  }
  std::string name() const override { return "dimacs:" + command_; }

 private:
  std::string command_;
  Cnf cnf_;
  std::vector<bool> model_;
};

SolveResult DimacsProcessSolver::solve(std::span<const Lit> assumptions, Clock::time_point deadline) {
  char path[] = "/tmp/extru-cnf-XXXXXX";
  const int fd = ::mkstemp(path);
  if (fd < 0) throw std::runtime_error("dimacs solver: cannot create temporary file");
  {
    const std::string text = cnf_.to_dimacs(assumptions);
    std::size_t done = 0;
    while (done < text.size()) {
      const ssize_t w = ::write(fd, text.data() + done, text.size() - done);
      if (w <= 0) {
        ::close(fd);
        ::unlink(path);
        throw std::runtime_error("dimacs solver: cannot write formula");
      }
      done += static_cast<std::size_t>(w);
    }
    ::close(fd);
  }

  int pipefd[2];
  if (::pipe(pipefd) != 0) throw std::runtime_error("dimacs solver: pipe failed");
  const std::string cmdline = command_ + " " + path;
  const pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error("dimacs solver: fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(pipefd[1], STDOUT_FILENO);
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    ::execl("/bin/sh", "sh", "-c", cmdline.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(pipefd[1]);

  std::string output;
  bool timed_out = false;
  char buf[4096];
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    pollfd p{pipefd[0], POLLIN, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(std::min<long long>(left, 1000)));
    if (rc < 0 && errno != EINTR) break;
    if (rc <= 0) continue;
    const ssize_t r = ::read(pipefd[0], buf, sizeof(buf));
    if (r <= 0) break;
    output.append(buf, static_cast<std::size_t>(r));
  }
  if (timed_out) ::kill(-pid, SIGKILL);
  ::close(pipefd[0]);
  int status = 0;
  ::waitpid(pid, &status, 0);
  ::unlink(path);
  if (timed_out) return SolveResult::Timeout;

  std::istringstream is(output);
  std::string line;
  std::optional<bool> sat;
  model_.assign(static_cast<std::size_t>(cnf_.variables()) + 1, false);
  while (std::getline(is, line)) {
    if (line.rfind("s ", 0) == 0) {
      if (line.find("UNSATISFIABLE") != std::string::npos) {
        sat = false;
      } else if (line.find("SATISFIABLE") != std::string::npos) {
        sat = true;
      }
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream vs(line.substr(2));
      long long lit = 0;
      while (vs >> lit) {
        if (lit > 0 && lit < static_cast<long long>(model_.size())) model_[static_cast<std::size_t>(lit)] = true;
      }
    }
  }
  if (!sat) throw std::runtime_error("dimacs solver: no 's' answer line from '" + command_ + "'");
  return *sat ? SolveResult::Sat : SolveResult::Unsat;
}

// Literal algebra with constant folding. Constants are +truth / -truth.
class Builder {
 public:
  Builder(CnfSink& sink, Lit truth) : sink_(sink), truth_(truth) {}

  bool is_const(Lit l) const { return l == truth_ || l == -truth_; }
  Lit constant(bool v) const { return v ? truth_ : -truth_; }

  Lit xor2(Lit a, Lit b) {
    if (is_const(a)) return a == truth_ ? -b : b;
    if (is_const(b)) return b == truth_ ? -a : a;
    if (a == b) return -truth_;
    if (a == -b) return truth_;
    const Lit u = sink_.new_var();
    sink_.add_clause({-a, -b, -u});
    sink_.add_clause({a, b, -u});
    sink_.add_clause({a, -b, u});
    sink_.add_clause({-a, b, u});
    return u;
  }

  // (s ? b : a) when it reduces to an existing literal.
  std::optional<Lit> mux_shortcut(Lit s, Lit a, Lit b) const {
    if (a == b) return a;
    if (s == truth_) return b;
    if (s == -truth_) return a;
    if (is_const(a) && is_const(b)) return a == -truth_ ? s : -s;
    return std::nullopt;
  }

  // (s ? b : a) xor t.
  Lit mux_xor(Lit s, Lit a, Lit b, Lit t) {
    if (auto m = mux_shortcut(s, a, b)) return xor2(*m, t);
    if (is_const(t)) {
      const Lit u = sink_.new_var();
      sink_.add_clause({s, -a, u});
      sink_.add_clause({s, a, -u});
      sink_.add_clause({-s, -b, u});
      sink_.add_clause({-s, b, -u});
      return t == truth_ ? -u : u;
    }
    const Lit u = sink_.new_var();
    sink_.add_clause({s, a, t, -u});
    sink_.add_clause({s, a, -t, u});
    sink_.add_clause({s, -a, t, u});
    sink_.add_clause({s, -a, -t, -u});
    sink_.add_clause({-s, b, t, -u});
    sink_.add_clause({-s, b, -t, u});
    sink_.add_clause({-s, -b, t, u});
    sink_.add_clause({-s, -b, -t, -u});
    return u;
  }

  void sbox_byte(const SboxTable& table, std::span<Lit> bits) {
    const bool all_const = std::all_of(bits.begin(), bits.end(), [&](Lit l) { return is_const(l); });
    if (all_const) {
      unsigned v = 0;
      for (std::size_t i = 0; i < 8; ++i) v |= (bits[i] == truth_ ? 1u : 0u) << i;
      const std::uint8_t y = table(static_cast<std::uint8_t>(v));
      for (std::size_t i = 0; i < 8; ++i) bits[i] = constant(((y >> i) & 1u) != 0);
      return;
    }
    std::array<Lit, 8> out{};
    for (auto& o : out) o = sink_.new_var();
    std::vector<Lit> clause;
    for (unsigned v = 0; v < 256; ++v) {
      clause.clear();
      bool satisfied = false;
      for (std::size_t i = 0; i < 8 && !satisfied; ++i) {
        const bool bit = ((v >> i) & 1u) != 0;
        if (is_const(bits[i])) {
          satisfied = (bits[i] == truth_) != bit;
        } else {
          clause.push_back(bit ? -bits[i] : bits[i]);
        }
      }
      if (satisfied) continue;
      const std::uint8_t y = table(static_cast<std::uint8_t>(v));
      for (std::size_t k = 0; k < 8; ++k) {
        clause.push_back(((y >> k) & 1u) != 0 ? out[k] : -out[k]);
        sink_.add_clause(clause);
        clause.pop_back();
      }
    }
    std::copy(out.begin(), out.end(), bits.begin());
  }

 private:
  CnfSink& sink_;
  Lit truth_;
};

std::vector<Lit> constant_inputs(const Block& x, Lit truth) {
  std::vector<Lit> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x.test(i) ? truth : -truth;
  return v;
}

void require_equal(CnfSink& sink, std::span<const Lit> lits, const Block& value) {
  for (std::size_t i = 0; i < lits.size(); ++i) sink.add_clause({value.test(i) ? lits[i] : -lits[i]});
}

Trn read_key(const Solver& solver, std::span<const Lit> key) {
  Trn t(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) t.set(i, solver.value(key[i]));
  return t;
}

Block evaluate(const Topology& topo, const Trn& trn, const Block& x, bool with_sbox) {
  static const SboxTable table = SboxTable::khazad();
  Block y = apply_forward(topo, trn, x);
  return with_sbox ? substitute(table, y) : y;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::unique_ptr<Solver> make_picosat_solver() { return std::make_unique<PicosatSolver>(); }

std::unique_ptr<Solver> make_cadical_solver() { return std::make_unique<CadicalSolver>(); }

SolverFactory solver_factory(std::string_view name) {
  if (name == "cadical") return make_cadical_solver;
  if (name == "picosat") return make_picosat_solver;
  throw std::invalid_argument("unknown solver '" + std::string(name) + "' (expected cadical or picosat)");
}

std::unique_ptr<Solver> make_dimacs_process_solver(std::string command) {
  return std::make_unique<DimacsProcessSolver>(std::move(command));
}

std::vector<Lit> encode_cstn(CnfSink& sink, const Topology& topo, std::span<const Lit> key,
                             std::span<const Lit> inputs, Lit truth, bool with_sbox) {
  if (key.size() != topo.selector_count() || inputs.size() != topo.n()) {
    throw std::invalid_argument("encode_cstn: key/input literal counts do not match the topology");
  }
  Builder b(sink, truth);
  const std::size_t n = topo.n();
  std::vector<Lit> sig(n);
  std::vector<Lit> next(n);
  for (std::size_t i = 0; i < n; ++i) sig[topo.wiring(0)[i]] = inputs[i];
  for (std::size_t s = 0; s < topo.stages(); ++s) {
    for (std::size_t sw = 0; sw < n / 2; ++sw) {
      const std::size_t k = topo.selector_index(s, sw, Selector::Swap);
      const Lit upper = sig[2 * sw];
      const Lit lower = sig[2 * sw + 1];
      sig[2 * sw] = b.mux_xor(key[k], upper, lower, key[k + 1]);
      sig[2 * sw + 1] = b.mux_xor(key[k], lower, upper, key[k + 2]);
    }
    const auto w = topo.wiring(s + 1);
    for (std::size_t i = 0; i < n; ++i) next[w[i]] = sig[i];
    sig.swap(next);
  }
  if (with_sbox) {
    if (n % 8 != 0) throw std::invalid_argument("encode_cstn: S-box needs a width divisible by 8");
    static const SboxTable table = SboxTable::khazad();
    for (std::size_t j = 0; j < n; j += 8) b.sbox_byte(table, std::span(sig).subspan(j, 8));
  }
  return sig;
}

KeyedCircuit encode_cnf(const Topology& topo, bool with_sbox) {
  KeyedCircuit c{topo, with_sbox, {}, 0, {}, {}, {}};
  c.truth = c.cnf.new_var();
  c.cnf.add_clause({c.truth});
  for (std::size_t i = 0; i < topo.n(); ++i) c.inputs.push_back(c.cnf.new_var());
  for (std::size_t i = 0; i < topo.selector_count(); ++i) c.key.push_back(c.cnf.new_var());
  c.outputs = encode_cstn(c.cnf, topo, c.key, c.inputs, c.truth, with_sbox);
  return c;
}

Oracle make_oracle(const Topology& topo, const Trn& hidden, bool with_sbox) {
  return [topo, hidden, with_sbox](const Block& x) { return evaluate(topo, hidden, x, with_sbox); };
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return "equivalent";
    case Verdict::NotEquivalent: return "not-equivalent";
    case Verdict::Censored: return "censored";
  }
  return "unknown";
}

bool consistent(const Topology& topo, const Trn& trn, std::span<const Dip> dips, bool with_sbox) {
  return std::all_of(dips.begin(), dips.end(),
                     [&](const Dip& d) { return evaluate(topo, trn, d.input, with_sbox) == d.output; });
}

bool functionally_equivalent(const Topology& topo, const Trn& candidate, const Oracle& oracle, bool with_sbox,
                             std::size_t samples, std::uint64_t seed) {
  const std::size_t n = topo.n();
  if (n <= 16) {
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      const Block in(BitVector::from_u64(x, n));
      if (evaluate(topo, candidate, in, with_sbox) != oracle(in)) return false;
    }
    return true;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const Block in = random_block(n, rng);
    if (evaluate(topo, candidate, in, with_sbox) != oracle(in)) return false;
  }
  return true;
}

AttackTrace attack(const Topology& topo, const Oracle& oracle, const AttackOptions& options) {
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(options.timeout_seconds));
  auto solver = options.solver ? options.solver() : make_cadical_solver();
  AttackTrace trace{topo, options.with_sbox, {}, 0, 0.0, std::nullopt, Verdict::Censored, true, solver->name()};

  const Lit truth = solver->new_var();
  solver->add_clause({truth});
  auto fresh = [&](std::size_t count) {
    std::vector<Lit> v(count);
    for (auto& l : v) l = solver->new_var();
    return v;
  };
  const auto key1 = fresh(topo.selector_count());
  const auto key2 = fresh(topo.selector_count());
  const auto x = fresh(topo.n());
  const auto y1 = encode_cstn(*solver, topo, key1, x, truth, options.with_sbox);
  const auto y2 = encode_cstn(*solver, topo, key2, x, truth, options.with_sbox);

  // Miter: under `act` the two keys must disagree on x.
  Builder b(*solver, truth);
  const Lit act = solver->new_var();
  std::vector<Lit> differ{-act};
  for (std::size_t i = 0; i < topo.n(); ++i) {
    const Lit d = b.xor2(y1[i], y2[i]);
    if (d == truth) {
      differ.clear();
      break;
    }
    if (d != -truth) differ.push_back(d);
  }
  if (!differ.empty()) solver->add_clause(differ);

  const Lit assume_act[] = {act};
  for (;;) {
    const SolveResult r = solver->solve(assume_act, deadline);
    if (r == SolveResult::Timeout) {
      trace.seconds = seconds_since(start);
      return trace;
    }
    if (r == SolveResult::Unsat) break;
    Block dip(topo.n());
    for (std::size_t i = 0; i < topo.n(); ++i) dip.set(i, solver->value(x[i]));
    const Block answer = oracle(dip);
    const auto in = constant_inputs(dip, truth);
    require_equal(*solver, encode_cstn(*solver, topo, key1, in, truth, options.with_sbox), answer);
    require_equal(*solver, encode_cstn(*solver, topo, key2, in, truth, options.with_sbox), answer);
    trace.dips.push_back({std::move(dip), answer});
    trace.iterations = trace.dips.size();
    if (options.on_dip) options.on_dip(trace.iterations, seconds_since(start));
  }

  // No distinguishing input remains: any key consistent with the DIPs works.
  if (solver->solve({}, deadline) != SolveResult::Sat) {
    trace.seconds = seconds_since(start);
    return trace;
  }
  trace.recovered = read_key(*solver, key1);
  trace.seconds = seconds_since(start);
  trace.censored = false;
  trace.verdict = functionally_equivalent(topo, *trace.recovered, oracle, options.with_sbox,
                                          options.verify_samples, options.seed)
                      ? Verdict::Equivalent
                      : Verdict::NotEquivalent;
  return trace;
}

SafeBound summarize_trials(std::vector<AttackTrace> trials) {
  SafeBound out;
  std::size_t completed_max = 0;
  std::size_t censored_max = 0;
  bool any_completed = false;
  for (const auto& t : trials) {
    if (t.censored) {
      censored_max = std::max(censored_max, t.iterations);
    } else {
      any_completed = true;
      completed_max = std::max(completed_max, t.iterations);
    }
  }
  out.estimate = std::max(completed_max, censored_max);
  out.censored = !any_completed || censored_max > completed_max;
  out.trials = std::move(trials);
  return out;
}

SafeBound derive_safe_bound(const Topology& topo, std::size_t trials, double timeout_seconds, std::uint64_t seed,
                            SolverFactory solver, std::size_t jobs) {
  if (trials < 1) throw std::invalid_argument("derive_safe_bound: need at least one trial");
  std::vector<AttackTrace> traces(trials, AttackTrace{topo, false, {}, 0, 0.0, std::nullopt, Verdict::Censored, true, {}});
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t t = next++; t < trials; t = next++) {
      try {
        std::mt19937_64 rng(seed + t);
        const Trn hidden = random_trn(topo, rng);
        AttackOptions opts;
        opts.timeout_seconds = timeout_seconds;
        opts.seed = seed + t;
        opts.solver = solver;
        traces[t] = attack(topo, make_oracle(topo, hidden), opts);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, trials);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return summarize_trials(std::move(traces));
}

std::optional<std::size_t> reference_safe_bound(const Topology& topo) {
  static const std::map<std::size_t, std::size_t> omega{{4, 6},   {8, 7},   {16, 8},  {32, 12},
                                                        {64, 14}, {128, 24}, {256, 25}, {512, 26}};
  static const std::map<std::size_t, std::size_t> log_default{{8, 18}, {16, 25}, {32, 32}, {64, 33}};
  const auto& table = topo.kind() == NetworkKind::Omega ? omega : log_default;
  if (topo.kind() == NetworkKind::LogExtra && topo.extra_stages() + 2 != topo.log2n()) return std::nullopt;
  const auto it = table.find(topo.n());
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string report_json(const AttackTrace& trace) {
  nlohmann::json j;
  j["size"] = trace.topology.n();
  j["kind"] = kind_name(trace.topology.kind());
  j["m"] = trace.topology.extra_stages();
  j["selector_count"] = trace.topology.selector_count();
  j["iterations"] = trace.iterations;
  j["seconds"] = trace.seconds;
  j["verdict"] = verdict_name(trace.verdict);
  j["censored"] = trace.censored;
  j["with_sbox"] = trace.with_sbox;
  j["solver"] = trace.solver;
  if (trace.recovered) j["recovered_trn"] = trace.recovered->to_hex();
  return j.dump();
}

}  // namespace extru::satattack
