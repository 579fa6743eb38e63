// SPDX-License-Identifier: Apache-2.0
//
// extru: command-line front end.
//
// Exit codes: 0 success, 1 protocol/authentication/health failure or other
// runtime error, 2 usage error, 3 attack timed out (censored result).
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "extru/acorn.hpp"
#include "extru/costmodel.hpp"
#include "extru/cstn.hpp"
#include "extru/network_json.hpp"
#include "extru/protocol.hpp"
#include "extru/rng.hpp"
#include "extru/satattack.hpp"
#include "extru/sbox.hpp"
#include "extru/selftest.hpp"
#include "extru/transport.hpp"
#include "json.hpp"

namespace {

using namespace extru;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCensored = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void log_line(const std::string& msg) { std::cerr << "extru: " << msg << '\n'; }

std::vector<std::uint8_t> read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::uint8_t> read_input(const std::string& path) {
  if (path == "-") return read_all(std::cin);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "'");
  return read_all(f);
}

std::string read_text(const std::string& path) {
  const auto bytes = read_input(path);
  return {bytes.begin(), bytes.end()};
}

void write_stdout(std::span<const std::uint8_t> bytes) {
  std::cout.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

struct NetworkFlags {
  std::string kind = "log";
  std::size_t n = 64;
  std::optional<std::size_t> m;

  void add(CLI::App& app) {
    app.add_option("--kind", kind, "Network family")->check(CLI::IsMember({"omega", "log"}));
    app.add_option("--n", n, "Block width in bits (power of two, >= 4)");
    app.add_option("--m", m, "Extra stages for --kind log (default log2(n) - 2)");
  }

  Topology topology() const {
    try {
      const NetworkKind k = parse_kind(kind);
      if (k == NetworkKind::Omega) {
        if (m && *m != 0) throw UsageError("--m is only valid with --kind log");
        return Topology::omega(n);
      }
      return m ? Topology::log_extra(n, *m) : Topology::log_extra(n);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

acorn::AeadKey resolve_key(const std::string& flag) {
  std::string hex = flag;
  if (hex.empty()) {
    if (const char* env = std::getenv("EXTRU_KEY")) hex = env;
  }
  if (hex.empty()) throw UsageError("no key: pass --key <32 hex digits> or set EXTRU_KEY");
  try {
    return acorn::AeadKey::from_hex(hex);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------- net

struct NetCmd {
  NetworkFlags net;
  bool info = false;
  bool random_trn = false;
  bool mirror = false;
  std::uint64_t seed = 1;
  std::string trn_file;
  std::string coverage;
  std::uint64_t budget = 1u << 20;
  std::string dimacs_out;
  bool affine = false;

  int run() const {
    Topology topo = net.topology();
    if (mirror) topo = topo.mirror();
    std::optional<Trn> trn;
    if (!trn_file.empty()) {
      auto d = parse_network_json(read_text(trn_file));
      if (!(d.topology == topo)) throw UsageError("TRN file describes " + d.topology.describe());
      trn = d.trn;
    } else if (random_trn) {
      std::mt19937_64 rng(seed);
      trn = extru::random_trn(topo, rng);
    }
    if (!dimacs_out.empty()) {
      std::ofstream f(dimacs_out);
      if (!f) throw UsageError("cannot write '" + dimacs_out + "'");
      f << satattack::encode_cnf(topo).to_dimacs();
    }
    if (!coverage.empty()) {
      const auto mode = coverage == "exhaustive" ? CoverageMode::Exhaustive : CoverageMode::Sampled;
      std::size_t count = 0;
      try {
        count = permutation_coverage(topo, mode, budget, seed);
      } catch (const std::length_error& e) {
        throw UsageError(e.what());
      }
      json j = json::parse(to_json(topo));
      j["coverage_mode"] = coverage;
      j["budget"] = budget;
      j["distinct_permutations"] = count;
      std::cout << j.dump() << '\n';
      return kExitOk;
    }
    if (affine) {
      if (!trn) throw UsageError("--affine needs --trn-file or --random-trn");
      const AffineModel model = extract_affine(topo, *trn);
      json j = json::parse(to_json(topo, &*trn));
      json cols = json::array();
      for (const auto& c : model.columns) cols.push_back(c.to_hex());
      j["affine"] = {{"columns", cols}, {"offset", model.offset.to_hex()}, {"rank", model.rank()}};
      std::cout << j.dump() << '\n';
      return kExitOk;
    }
    std::cout << to_json(topo, trn ? &*trn : nullptr) << '\n';
    return kExitOk;
  }
};

// ---------------------------------------------------------- encode/decode

struct CodecCmd {
  std::string trn_file;
  std::string input = "-";
  bool no_sbox = false;
  bool no_feedback = false;
  bool decode = false;

  int run() const {
    if (trn_file.empty()) throw UsageError("--trn-file is required");
    const auto desc = parse_network_json(read_text(trn_file));
    if (!desc.trn) throw UsageError("TRN file has no \"trn\" field");
    const Topology& topo = desc.topology;
    if (topo.n() % 8 != 0) throw UsageError("block width must be a multiple of 8");
    const std::size_t block_bytes = topo.n() / 8;
    const SboxTable table = SboxTable::khazad();
    Trn trn = *desc.trn;

    auto data = read_input(input);
    if (!decode) {
      data.push_back(0x80);
      while (data.size() % block_bytes != 0) data.push_back(0);
    } else if (data.size() % block_bytes != 0) {
      log_line("input is not a whole number of " + std::to_string(block_bytes) + "-byte blocks");
      return kExitFailure;
    }
    std::vector<std::uint8_t> out;
    out.reserve(data.size());
    for (std::size_t off = 0; off < data.size(); off += block_bytes) {
      const Block in(BitVector::from_bytes(std::span(data).subspan(off, block_bytes), topo.n()));
      Block result;
      if (!decode) {
        result = apply_forward(topo, trn, in);
        if (!no_sbox) result = substitute(table, result);
        if (!no_feedback) protocol::feedback(trn, result);
      } else {
        result = apply_inverse(topo, trn, no_sbox ? in : substitute(table, in));
        if (!no_feedback) protocol::feedback(trn, in);
      }
      const auto bytes = result.to_bytes();
      out.insert(out.end(), bytes.begin(), bytes.end());
    }
    if (decode) {
      try {
        transport::strip_padding(out);
      } catch (const protocol::ProtocolError& e) {
        log_line(std::string("decode: ") + e.what());
        return kExitFailure;
      }
    }
    write_stdout(out);
    return kExitOk;
  }
};

// ---------------------------------------------------------------- session

struct SessionCmd {
  bool sending = true;
  std::string listen;
  std::string connect;
  std::string key;
  std::size_t t = 32;
  NetworkFlags net;
  std::optional<std::uint64_t> seed;
  bool duplex = false;

  int run() {
    if (listen.empty() == connect.empty()) throw UsageError("exactly one of --listen or --connect is required");
    protocol::SessionConfig cfg;
    const Topology topo = net.topology();
    cfg.n = topo.n();
    cfg.kind = topo.kind();
    cfg.m = topo.extra_stages();
    cfg.T = t;
    cfg.key = resolve_key(key);
    // The dialing side is the initiator.
    cfg.role = connect.empty() ? protocol::Role::Responder : protocol::Role::Initiator;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }

    std::unique_ptr<transport::TcpStream> stream;
    std::unique_ptr<transport::TcpListener> listener;
    if (!listen.empty()) {
      const auto [host, port] = transport::parse_endpoint(listen);
      listener = std::make_unique<transport::TcpListener>(host, port);
      log_line("listening on " + host + ":" + std::to_string(listener->port()));
      stream = listener->accept();
    } else {
      const auto [host, port] = transport::parse_endpoint(connect);
      stream = transport::TcpStream::connect(host, port);
    }

    const bool do_send = sending || duplex;
    const bool do_recv = !sending || duplex;
    json report;
    std::exception_ptr tx_error;
    std::thread tx_thread;
    std::unique_ptr<rng::EntropySource> source;
    if (seed) {
      source = std::make_unique<rng::SeededSource>(*seed);
    } else {
      source = std::make_unique<rng::OsEntropySource>();
    }

    if (do_send) {
      auto tx = std::make_shared<protocol::Transmitter>(cfg, *source);
      auto body = [&, tx] {
        try {
          const auto stats = transport::send_stream(*stream, *tx, [](std::span<std::uint8_t> buf) -> std::size_t {
            const ssize_t r = ::read(STDIN_FILENO, buf.data(), buf.size());
            return r > 0 ? static_cast<std::size_t>(r) : 0;
          });
          report["sent"] = {{"bytes", stats.bytes}, {"blocks", stats.blocks}, {"rekeys", stats.rekeys}};
        } catch (...) {
          tx_error = std::current_exception();
        }
      };
      if (do_recv) {
        tx_thread = std::thread(body);
      } else {
        body();
      }
    }
    int code = kExitOk;
    if (do_recv) {
      protocol::Receiver rx(cfg);
      try {
        const auto stats = transport::recv_stream(*stream, rx, [](std::span<const std::uint8_t> bytes) {
          write_stdout(bytes);
          std::cout.flush();
        });
        report["received"] = {{"bytes", stats.bytes}, {"blocks", stats.blocks}, {"rekeys", stats.rekeys}};
      } catch (const protocol::ProtocolError& e) {
        log_line(std::string("session aborted (") + protocol::error_kind_name(e.kind()) + "): " + e.what());
        code = kExitFailure;
      }
    }
    if (tx_thread.joinable()) tx_thread.join();
    if (tx_error) std::rethrow_exception(tx_error);
    // stdout may carry plaintext, so the report goes to stderr when receiving.
    (do_recv ? std::cerr : std::cout) << report.dump() << '\n';
    return code;
  }
};

// ---------------------------------------------------------------- attack

struct AttackCmd {
  NetworkFlags net;
  double timeout = 60;
  std::size_t trials = 1;
  std::size_t jobs = 0;
  std::uint64_t seed = 1;
  bool sbox = false;
  std::string solver = "cadical";
  std::string solver_cmd;
  std::string trn_file;

  int run() const {
    const Topology topo = net.topology();
    satattack::SolverFactory factory = satattack::solver_factory(solver);
    if (!solver_cmd.empty()) {
      factory = [cmd = solver_cmd] { return satattack::make_dimacs_process_solver(cmd); };
    }
    std::vector<satattack::AttackTrace> traces;
    if (!trn_file.empty()) {
      const auto d = parse_network_json(read_text(trn_file));
      if (!d.trn || !(d.topology == topo)) throw UsageError("TRN file does not match the requested network");
      satattack::AttackOptions opts;
      opts.timeout_seconds = timeout;
      opts.with_sbox = sbox;
      opts.seed = seed;
      opts.solver = factory;
      traces.push_back(satattack::attack(topo, satattack::make_oracle(topo, *d.trn, sbox), opts));
    } else if (sbox) {
      for (std::size_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng(seed + t);
        satattack::AttackOptions opts;
        opts.timeout_seconds = timeout;
        opts.with_sbox = true;
        opts.seed = seed + t;
        opts.solver = factory;
        traces.push_back(satattack::attack(topo, satattack::make_oracle(topo, random_trn(topo, rng), true), opts));
      }
    } else {
      const std::size_t workers = jobs ? jobs : std::max(1u, std::thread::hardware_concurrency());
      traces = satattack::derive_safe_bound(topo, trials, timeout, seed, factory, workers).trials;
    }
    for (const auto& t : traces) std::cout << satattack::report_json(t) << '\n';
    const auto bound = satattack::summarize_trials(traces);
    json summary{{"summary", true},
                 {"size", topo.n()},
                 {"kind", kind_name(topo.kind())},
                 {"m", topo.extra_stages()},
                 {"trials", traces.size()},
                 {"n_estimate", bound.estimate},
                 {"censored", bound.censored}};
    if (const auto ref = satattack::reference_safe_bound(topo)) summary["reference_n"] = *ref;
    std::cout << summary.dump() << '\n';
    for (const auto& t : traces) {
      if (t.verdict == satattack::Verdict::NotEquivalent) return kExitFailure;
    }
    return bound.censored ? kExitCensored : kExitOk;
  }
};

// ---------------------------------------------------------------- cost

struct CostCmd {
  std::string baseline = "acorn";
  std::vector<std::uint64_t> sizes;
  std::size_t t = 32;
  NetworkFlags net;
  std::string accounting = "both";
  bool init = false;
  std::string clock = "asic";
  std::string format = "csv";
  std::string fixtures_file;

  int run() {
    const auto clk = clock == "asic" ? costmodel::ClockSource::Asic : costmodel::ClockSource::Fpga;
    const costmodel::Fixtures fx = fixtures_file.empty() ? costmodel::builtin_fixtures(clk)
                                                         : costmodel::parse_fixtures(read_text(fixtures_file), clk);
    if (!fx.ciphers.count(baseline)) throw UsageError("unknown baseline '" + baseline + "'");
    if (sizes.empty()) sizes = costmodel::standard_sizes();
    const Topology topo = net.topology();
    std::vector<costmodel::Accounting> modes;
    if (accounting == "both" || accounting == "per-interval") modes.push_back(costmodel::Accounting::PerInterval);
    if (accounting == "both" || accounting == "single-trn") modes.push_back(costmodel::Accounting::SingleTrn);

    const auto& base = fx.ciphers.at(baseline);
    // ExTru uses the baseline cipher's cycle constants for its S-frames.
    costmodel::CipherParams ext = fx.extru.at(baseline);
    ext.c_fix = base.c_fix;
    ext.c_byte = base.c_byte;

    bool header_done = false;
    for (const auto mode : modes) {
      const costmodel::ExtruScenario scenario{ext, topo, t, mode};
      const auto result = costmodel::sweep(base, scenario, sizes, init);
      if (format == "csv") {
        std::string csv = costmodel::to_csv(result);
        if (header_done) csv.erase(0, csv.find('\n') + 1);
        header_done = true;
        std::cout << csv;
      } else {
        double max_speedup = 0;
        for (const auto& r : result.rows) {
          json row{{"design", r.design}, {"msg_bytes", r.msg_bytes}, {"cycles", r.cycles},
                   {"time_us", r.time_us}, {"energy", r.energy},      {"speedup", r.speedup}};
          std::cout << row.dump() << '\n';
          if (r.design != base.name) max_speedup = std::max(max_speedup, r.speedup);
        }
        json s{{"summary", true},
               {"baseline", base.name},
               {"accounting", costmodel::accounting_name(mode)},
               {"max_speedup", max_speedup}};
        s["crossover_bytes"] = result.crossover_bytes ? json(*result.crossover_bytes) : json(nullptr);
        std::cout << s.dump() << '\n';
      }
    }
    if (format == "csv" && modes.size() > 0) {
      // Crossovers go to stderr so stdout stays a single CSV table.
      for (const auto mode : modes) {
        const auto c = costmodel::crossover(base, costmodel::ExtruScenario{ext, topo, t, mode}, init);
        log_line("crossover (" + costmodel::accounting_name(mode) + "): " + (c ? std::to_string(*c) + " bytes" : "none"));
      }
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------- rngtest

struct RngTestCmd {
  std::string input;
  std::string source;
  std::size_t samples = 1000000;
  double entropy = 1.0;
  std::uint64_t seed = 1;

  int run() const {
    if (input.empty() == source.empty()) throw UsageError("exactly one of --input or --source is required");
    if (!(entropy > 0 && entropy <= 1)) throw UsageError("--entropy must be in (0, 1]");
    std::vector<std::uint8_t> bytes;
    std::string origin;
    if (!input.empty()) {
      bytes = read_input(input);
      origin = input;
    } else {
      std::unique_ptr<rng::EntropySource> src;
      if (source == "os") {
        src = std::make_unique<rng::OsEntropySource>();
      } else if (source == "seeded") {
        src = std::make_unique<rng::SeededSource>(seed);
      } else if (source == "stuck0" || source == "stuck1") {
        src = std::make_unique<rng::StuckAtSource>(source == "stuck1");
      } else if (source == "trivium") {
        rng::Prng p = rng::Prng::from_seed([&] {
          rng::Seed s{};
          std::mt19937_64 r(seed);
          for (auto& b : s) b = static_cast<std::uint8_t>(r());
          return s;
        }());
        bytes = p.draw(rng::Label::Base, (samples + 7) / 8);
      } else {
        throw UsageError("unknown --source '" + source + "'");
      }
      if (src) {
        bytes.resize((samples + 7) / 8);
        src->fill(bytes);
      }
      origin = source;
    }
    // Count every trip rather than stopping at the first alarm.
    rng::RepetitionCountTest rct(entropy);
    rng::AdaptiveProportionTest apt(entropy);
    std::optional<std::size_t> first;
    std::size_t count = 0;
    const std::size_t limit = input.empty() ? samples : bytes.size() * 8;
    for (std::size_t i = 0; i < limit; ++i) {
      const bool bit = ((bytes[i / 8] >> (i % 8)) & 1u) != 0;
      const bool a = rct.step(bit) == rng::Verdict::Alarm;
      const bool b = apt.step(bit) == rng::Verdict::Alarm;
      if ((a || b) && !first) first = i + 1;
      ++count;
    }
    json j{{"source", origin},       {"samples", count},         {"entropy_per_bit", entropy},
           {"rct_cutoff", rct.cutoff()}, {"apt_cutoff", apt.cutoff()}, {"apt_window", apt.window()},
           {"rct_alarms", rct.trips()},  {"apt_alarms", apt.trips()}};
    j["first_alarm_sample"] = first ? json(*first) : json(nullptr);
    j["verdict"] = first ? "alarm" : "ok";
    std::cout << j.dump() << '\n';
    return first ? kExitFailure : kExitOk;
  }
};

// ---------------------------------------------------------------- selftest

int run_selftest_cmd(std::uint64_t seed) {
  const auto report = run_selftest(seed);
  for (const auto& c : report.checks) {
    json j{{"check", c.name}, {"passed", c.passed}, {"seconds", c.seconds}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    std::cout << j.dump() << '\n';
  }
  std::cout << json{{"summary", true}, {"passed", report.passed()}, {"checks", report.checks.size()}}.dump() << '\n';
  return report.passed() ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{"Re-keyed switching-network channel: networks, sessions, attacks and cost model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "extru 0.1.0");

  NetCmd net;
  auto* net_app = app.add_subcommand("net", "Build and inspect a network");
  net.net.add(*net_app);
  net_app->add_flag("--info", net.info, "Print the network description (default action)");
  net_app->add_flag("--random-trn", net.random_trn, "Attach a random configuration");
  net_app->add_option("--trn-file", net.trn_file, "Network JSON with a \"trn\" field");
  net_app->add_flag("--mirror", net.mirror, "Use the mirrored (receive-direction) network");
  net_app->add_option("--seed", net.seed, "Seed for --random-trn and sampled coverage");
  net_app->add_option("--coverage", net.coverage, "Count routing permutations")
      ->check(CLI::IsMember({"exhaustive", "sampled"}));
  net_app->add_option("--budget", net.budget, "Settings limit for --coverage");
  net_app->add_option("--dimacs", net.dimacs_out, "Write the keyed-circuit CNF to this file");
  net_app->add_flag("--affine", net.affine, "Print the affine form y = A x + b of the configuration");

  CodecCmd enc;
  CodecCmd dec;
  dec.decode = true;
  for (auto [cmd, name, help] : {std::tuple{&enc, "encode", "Apply network + S-box to stdin, blockwise"},
                                 std::tuple{&dec, "decode", "Invert encode"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--trn-file", cmd->trn_file, "Network JSON with a \"trn\" field")->required();
    sub->add_option("--input", cmd->input, "Input file ('-' for stdin)");
    sub->add_flag("--no-sbox", cmd->no_sbox, "Skip the S-box layer");
    sub->add_flag("--no-feedback", cmd->no_feedback, "Keep the configuration fixed across blocks");
  }

  SessionCmd send;
  SessionCmd recv;
  recv.sending = false;
  auto* session_app = app.add_subcommand("session", "Run a live session over TCP");
  session_app->require_subcommand(1);
  for (auto [cmd, name, help] : {std::tuple{&send, "send", "Stream stdin to the peer"},
                                 std::tuple{&recv, "recv", "Write the peer's stream to stdout"}}) {
    auto* sub = session_app->add_subcommand(name, help);
    sub->add_option("--listen", cmd->listen, "host:port to accept one connection on");
    sub->add_option("--connect", cmd->connect, "host:port to dial");
    sub->add_option("--key", cmd->key, "128-bit pre-shared key, 32 hex digits (else $EXTRU_KEY)");
    sub->add_option("--t", cmd->t, "Blocks per TRN");
    cmd->net.add(*sub);
    sub->add_option("--seed", cmd->seed, "Seed the PRNG deterministically (testing only)");
    sub->add_flag("--duplex", cmd->duplex, "Send stdin and receive to stdout at the same time");
  }

  AttackCmd atk;
  auto* attack_app = app.add_subcommand("attack", "Oracle-guided SAT attack on a random hidden configuration");
  atk.net.add(*attack_app);
  attack_app->add_option("--timeout", atk.timeout, "Seconds per trial");
  attack_app->add_option("--trials", atk.trials, "Independent hidden keys")->check(CLI::PositiveNumber);
  attack_app->add_option("--jobs", atk.jobs, "Parallel trials (default: hardware threads)");
  attack_app->add_option("--seed", atk.seed, "Seed for hidden keys");
  attack_app->add_flag("--sbox", atk.sbox, "Include the S-box layer in the attacked circuit");
  attack_app->add_option("--solver", atk.solver, "In-process solver")->check(CLI::IsMember({"cadical", "picosat"}));
  attack_app->add_option("--solver-cmd", atk.solver_cmd, "External DIMACS solver command (overrides --solver)");
  attack_app->add_option("--trn-file", atk.trn_file, "Attack this configuration instead of random ones");

  CostCmd cost;
  auto* cost_app = app.add_subcommand("cost", "Cycle/time/energy sweep against a pure-cipher channel");
  cost_app->add_option("--baseline", cost.baseline, "acorn or aes-gcm");
  cost_app->add_option("--sizes", cost.sizes, "Message sizes in bytes")->delimiter(',');
  cost_app->add_option("--t", cost.t, "Blocks per TRN");
  cost.net.add(*cost_app);
  cost_app->add_option("--accounting", cost.accounting, "TRN accounting")
      ->check(CLI::IsMember({"per-interval", "single-trn", "both"}));
  cost_app->add_flag("--init", cost.init, "Include cipher initialization cycles");
  cost_app->add_option("--clock", cost.clock, "Clock period source")->check(CLI::IsMember({"asic", "fpga"}));
  cost_app->add_option("--format", cost.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cost_app->add_option("--fixtures", cost.fixtures_file, "Parameter JSON (default: built-in)");

  RngTestCmd rngt;
  auto* rng_app = app.add_subcommand("rngtest", "Run the repetition-count and adaptive-proportion tests");
  rng_app->add_option("--input", rngt.input, "Raw bit file, LSB first ('-' for stdin)");
  rng_app->add_option("--source", rngt.source, "Built-in source: os, seeded, stuck0, stuck1, trivium");
  rng_app->add_option("--samples", rngt.samples, "Samples to draw from --source");
  rng_app->add_option("--entropy", rngt.entropy, "Assessed entropy per bit");
  rng_app->add_option("--seed", rngt.seed, "Seed for seeded/trivium sources");

  std::uint64_t selftest_seed = 1;
  auto* self_app = app.add_subcommand("selftest", "Run built-in property checks");
  self_app->add_option("--seed", selftest_seed, "Seed for randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (net_app->parsed()) return net.run();
    if (app.got_subcommand("encode")) return enc.run();
    if (app.got_subcommand("decode")) return dec.run();
    if (session_app->parsed()) return session_app->got_subcommand("send") ? send.run() : recv.run();
    if (attack_app->parsed()) return atk.run();
    if (cost_app->parsed()) return cost.run();
    if (rng_app->parsed()) return rngt.run();
    if (self_app->parsed()) return run_selftest_cmd(selftest_seed);
  } catch (const UsageError& e) {
    log_line(e.what());
    return kExitUsage;
  } catch (const protocol::ProtocolError& e) {
    log_line(std::string("protocol error (") + protocol::error_kind_name(e.kind()) + "): " + e.what());
    return kExitFailure;
  } catch (const rng::HealthAlarm& e) {
    log_line(std::string("entropy health alarm: ") + e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    log_line(e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
