// qsprp: keyed small-domain permutations built from a GGM PRF pushed through
// function-to-permutation converters, plus statistical and quantum-attack
// experiments against them.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "qsprp/harness.hpp"
#include "qsprp/prp.hpp"
#include "qsprp/qsim.hpp"

namespace {

using namespace qsprp;

constexpr int kExitUsage = 2;
constexpr int kExitConstructionFailure = 3;

struct CommonOpts {
  size_t lambda = 128;
  size_t o = 16;
  std::string fpc = "sometimesrecurse";
  std::string prg = "secure";
  uint32_t rounds = 0;  // 0 keeps the per-kind defaults
  std::string key_hex;
  std::string key_file;
  std::string out_path;
  std::string format = "text";
  uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--lambda", opts.lambda, "security parameter in bits")
      ->capture_default_str();
  cmd->add_option("--o", opts.o, "permutation domain width in bits")
      ->capture_default_str();
  cmd->add_option("--fpc", opts.fpc, "converter kind")
      ->check(CLI::IsMember({"feistel", "swapornot", "sometimesrecurse"}))
      ->capture_default_str();
  cmd->add_option("--rounds", opts.rounds,
                  "override the round count (all levels for sometimesrecurse)");
  cmd->add_option("--prg", opts.prg, "generator kind")
      ->check(CLI::IsMember({"secure", "toy", "dup"}))
      ->capture_default_str();
  cmd->add_option("--key", opts.key_hex, "key as lambda/4 hex digits");
  cmd->add_option("--key-file", opts.key_file, "file holding the hex key");
  opts.seed_opt = cmd->add_option("--seed", opts.seed, "deterministic seed")
                      ->envname("QSPRP_SEED");
  cmd->add_option("--out", opts.out_path, "output file (default stdout)");
  cmd->add_option("--format", opts.format, "report format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
}

PrgKind parse_prg(const std::string& s) {
  if (s == "secure") return PrgKind::kSecure;
  if (s == "toy") return PrgKind::kToyWeak;
  return PrgKind::kDupDegenerate;
}

FpcKind parse_fpc(const std::string& s) {
  if (s == "feistel") return FpcKind::kFeistel;
  if (s == "swapornot") return FpcKind::kSwapOrNot;
  return FpcKind::kSometimesRecurse;
}

PrpParams build_params(const CommonOpts& opts, size_t o) {
  FpcSpec spec = FpcSpec::with_default_rounds(parse_fpc(opts.fpc), o, opts.lambda);
  if (opts.rounds > 0) {
    for (uint32_t& r : spec.rounds) r = opts.rounds;
    spec.validate();
  }
  return PrpParams::make(opts.lambda, spec, parse_prg(opts.prg));
}

uint64_t effective_seed(const CommonOpts& opts, bool randomize_default) {
  if (opts.seed_opt != nullptr && opts.seed_opt->count() > 0) return opts.seed;
  if (randomize_default) return std::random_device{}();
  return opts.seed;
}

PrpKey resolve_key(const CommonOpts& opts) {
  if (!opts.key_hex.empty()) return PrpKey::from_hex(opts.lambda, opts.key_hex);
  if (!opts.key_file.empty()) {
    std::ifstream in(opts.key_file);
    std::string hex;
    if (!(in >> hex)) {
      throw CLI::ValidationError("--key-file", "cannot read key file");
    }
    return PrpKey::from_hex(opts.lambda, hex);
  }
  throw CLI::ValidationError("--key", "a key is required (--key or --key-file)");
}

void write_output(const CommonOpts& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path);
  if (!out) throw CLI::ValidationError("--out", "cannot open output file");
  out << text;
}

harness::PermOracle prp_oracle(std::shared_ptr<PrpInstance> prp) {
  const int o = static_cast<int>(prp->params().fpc.domain_bits);
  return harness::PermOracle{
      o,
      [prp, o](uint64_t x) { return prp->encrypt(Bits::from_u64(o, x)).to_u64(); },
      [prp, o](uint64_t y) { return prp->decrypt(Bits::from_u64(o, y)).to_u64(); }};
}

// --- selftest ---------------------------------------------------------------

// Exhaustive invariant battery at o <= 8: bijectivity, inverse round trips,
// and query accounting for each converter, plus a composed-PRP round trip.
// `fault` deliberately corrupts swap-or-not forward evaluations so the
// battery's detection path can be exercised.
bool run_selftest(std::ostream& log, bool fault) {
  bool ok = true;
  auto fail = [&](const std::string& what) {
    log << "selftest FAIL: " << what << '\n';
    ok = false;
  };

  for (FpcKind kind : {FpcKind::kFeistel, FpcKind::kSwapOrNot,
                       FpcKind::kSometimesRecurse}) {
    for (size_t o = 1; o <= 8; ++o) {
      if (kind == FpcKind::kFeistel && o % 2 != 0) continue;
      FpcSpec spec = FpcSpec::with_default_rounds(kind, o, 64);
      OracleSignature sig = spec.oracle_signature();
      for (uint64_t seed = 1; seed <= 3; ++seed) {
        HashedOracle oracle(sig.m, sig.n, seed * 0x9e37 + o);
        CountingOracle counted(oracle);
        std::vector<bool> seen(size_t{1} << o, false);
        for (uint64_t x = 0; x < (uint64_t{1} << o); ++x) {
          counted.reset();
          Bits y = fpc_forward(spec, counted, Bits::from_u64(o, x));
          if (fault && kind == FpcKind::kSwapOrNot) {
            y.set_bit(o - 1, !y.bit(o - 1));
          }
          if (counted.count() != expected_query_count(spec, y) &&
              !(fault && kind == FpcKind::kSwapOrNot)) {
            fail("query count mismatch");
          }
          const uint64_t yv = y.to_u64();
          if (seen[yv]) fail("forward collision (not a bijection)");
          seen[yv] = true;
          if (fpc_inverse(spec, counted, y).to_u64() != x) {
            fail("inverse round trip failed");
          }
        }
      }
    }
  }

  // Composed PRP round trip, secure generator.
  FpcSpec spec = FpcSpec::with_default_rounds(FpcKind::kSometimesRecurse, 6, 64);
  PrpParams params = PrpParams::make(64, spec);
  RandomSource rng(7);
  PrpInstance prp(prp_keygen(64, rng), params);
  for (uint64_t x = 0; x < 64; ++x) {
    Bits c = prp.encrypt(Bits::from_u64(6, x));
    if (prp.decrypt(c).to_u64() != x) fail("prp round trip failed");
  }
  return ok;
}

// --- subcommand bodies --------------------------------------------------------

int cmd_keygen(const CommonOpts& opts) {
  RandomSource rng(effective_seed(opts, /*randomize_default=*/true));
  write_output(opts, prp_keygen(opts.lambda, rng).to_hex() + "\n");
  return 0;
}

int cmd_crypt(const CommonOpts& opts, const std::string& value_hex,
              bool encrypt) {
  PrpParams params = build_params(opts, opts.o);
  PrpKey key = resolve_key(opts);
  PrpInstance prp(key, params);
  Bits value = Bits::from_hex(opts.o, value_hex);
  Bits out = encrypt ? prp.encrypt(value) : prp.decrypt(value);
  write_output(opts, out.to_hex() + "\n");
  return 0;
}

int cmd_table(const CommonOpts& opts) {
  if (opts.o > harness::kMaxTableBits) {
    throw CLI::ValidationError("--o", "table export limited to o <= 20");
  }
  PrpParams params = build_params(opts, opts.o);
  auto prp = std::make_shared<PrpInstance>(resolve_key(opts), params);
  write_output(opts, harness::derive_table(prp_oracle(prp)).to_tsv());
  return 0;
}

int cmd_stats(const CommonOpts& opts, const std::string& experiment,
              const std::string& adversary_name, int trials, uint64_t q) {
  const uint64_t seed = effective_seed(opts, false);
  harness::ExperimentReport report;
  if (experiment == "fulltable") {
    FpcSpec spec = build_params(opts, opts.o).fpc;
    report = harness::full_table_chi_square(harness::hybrid1_world(spec),
                                            static_cast<int>(opts.o), trials,
                                            seed);
    report.config.construction = opts.fpc + "+random-oracle";
    report.config.ideal = "uniform-permutation";
  } else if (experiment == "hybrid01" || experiment == "hybrid12") {
    PrpParams params = build_params(opts, opts.o);
    harness::ExperimentConfig config;
    config.o = static_cast<int>(opts.o);
    config.query_budget = q;
    config.trials = trials;
    config.seed = seed;
    std::unique_ptr<harness::Adversary> adversary;
    if (adversary_name == "null") {
      adversary = harness::make_null_adversary();
    } else if (adversary_name == "fixedpoint") {
      adversary = harness::make_fixed_point_adversary(
          static_cast<int>(opts.o / 2) + 2);
    } else {
      adversary = harness::make_table_consistency_adversary();
    }
    if (experiment == "hybrid01") {
      config.construction = "hybrid0(prf)";
      config.ideal = "hybrid1(random-oracle)";
      report = harness::distinguisher_game(config, *adversary,
                                           harness::hybrid0_world(params),
                                           harness::hybrid1_world(params.fpc));
    } else {
      config.construction = "hybrid1(random-oracle)";
      config.ideal = "hybrid2(random-permutation)";
      report = harness::distinguisher_game(
          config, *adversary, harness::hybrid1_world(params.fpc),
          harness::hybrid2_world(static_cast<int>(opts.o)));
    }
  } else {
    throw CLI::ValidationError("--experiment", "unknown experiment");
  }
  write_output(opts, report.serialize(opts.format == "structured"));
  return 0;
}

int cmd_attack_simon(const CommonOpts& opts, int half_width, int trials,
                     const std::string& target,
                     const std::string& circuit_path) {
  RandomSource rng(effective_seed(opts, false));
  const int o = 2 * half_width;
  const uint64_t alpha = 0;
  const uint64_t beta = 1;
  std::ostringstream out;

  int feistel_like = 0;
  qsim::KmResult last;
  for (int trial = 0; trial < trials; ++trial) {
    RandomSource trial_rng = rng.fork();
    harness::PermOracle perm;
    if (target == "feistel3") {
      FpcSpec spec = FpcSpec::with_default_rounds(FpcKind::kFeistel, o,
                                                  opts.lambda);
      spec.rounds = {3};
      perm = harness::hybrid1_world(spec)(trial_rng);
    } else if (target == "randomperm") {
      perm = harness::hybrid2_world(o)(trial_rng);
    } else {
      PrpParams params = build_params(opts, o);
      auto prp = std::make_shared<PrpInstance>(
          prp_keygen(opts.lambda, trial_rng), params);
      perm = prp_oracle(prp);
    }
    last = qsim::km_feistel_distinguisher(perm.forward, perm.inverse,
                                          half_width, alpha, beta, trial_rng);
    if (last.verdict == qsim::Verdict::kFeistelLike) ++feistel_like;
  }

  out << "target: " << target << '\n'
      << "half_width: " << half_width << '\n'
      << "trials: " << trials << '\n'
      << "feistel_like: " << feistel_like << '\n'
      << "verdict: "
      << (2 * feistel_like > trials ? "FEISTEL_LIKE" : "RANDOM_LIKE") << '\n';
  if (last.period) {
    out << "last_period: "
        << Bits::from_u64(half_width + 1, *last.period).to_hex() << '\n';
  }
  out << "last_transcript_runs: " << last.transcript.measured.size() << '\n';

  if (!circuit_path.empty()) {
    std::ifstream in(circuit_path);
    if (!in) throw CLI::ValidationError("--circuit", "cannot open circuit file");
    std::stringstream buf;
    buf << in.rdbuf();
    auto gates = qsim::parse_circuit(buf.str());
    PrpParams params = build_params(opts, o);
    RandomSource key_rng(effective_seed(opts, false) + 1);
    auto prp = std::make_shared<PrpInstance>(prp_keygen(opts.lambda, key_rng),
                                             params);
    harness::PermutationTable fwd = harness::derive_table(prp_oracle(prp));
    harness::PermutationTable inv = fwd.inverted();
    std::vector<uint64_t> ftab(fwd.forward.begin(), fwd.forward.end());
    std::vector<uint64_t> itab(inv.forward.begin(), inv.forward.end());
    auto result = qsim::simulate_from_truth_table(
        ftab, itab, o, qsim::StateVector::basis(o, o, 0), gates, rng);
    out << "circuit_final_norm: " << result.state.norm() << '\n'
        << "circuit_measurements:";
    for (uint64_t m : result.measurements) out << ' ' << m;
    out << '\n';
  }
  write_output(opts, out.str());
  return 0;
}

int cmd_bench(const CommonOpts& opts, int iterations) {
  std::ostringstream out;
  RandomSource rng(effective_seed(opts, false));
  for (size_t o : {size_t{16}, size_t{32}, size_t{64}}) {
    PrpParams params = build_params(opts, o);
    PrpInstance prp(prp_keygen(opts.lambda, rng), params);
    std::vector<Bits> inputs;
    for (int i = 0; i < iterations; ++i) {
      inputs.push_back(rng.bits(o));
    }
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Bits> cts;
    for (const Bits& x : inputs) cts.push_back(prp.encrypt(x));
    const auto t1 = std::chrono::steady_clock::now();
    for (size_t i = 0; i < cts.size(); ++i) {
      if (prp.decrypt(cts[i]) != inputs[i]) {
        throw std::runtime_error("bench: round trip failed");
      }
    }
    const auto t2 = std::chrono::steady_clock::now();
    const double enc_us =
        std::chrono::duration<double, std::micro>(t1 - t0).count() / iterations;
    const double dec_us =
        std::chrono::duration<double, std::micro>(t2 - t1).count() / iterations;
    out << "o=" << o << " encrypt " << enc_us << " us/op ("
        << 1e6 / enc_us << " ops/s), decrypt " << dec_us << " us/op ("
        << 1e6 / dec_us << " ops/s)\n";
  }
  write_output(opts, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"small-domain pseudorandom permutations and experiments"};
  app.require_subcommand(1);
  app.set_config("--config")->configurable(false);
  app.allow_config_extras(false);

  CommonOpts opts;
  std::string value_hex;
  std::string experiment = "fulltable";
  std::string adversary = "null";
  std::string target = "prp";
  std::string circuit_path;
  int trials = 100;
  uint64_t q = 1u << 16;
  int half_width = 4;
  int iterations = 5;
  bool inject_fault = false;

  auto* keygen = app.add_subcommand("keygen", "generate a key, print hex");
  add_common(keygen, opts);

  auto* encrypt = app.add_subcommand("encrypt", "encrypt one hex value");
  add_common(encrypt, opts);
  encrypt->add_option("value", value_hex, "o-bit value, ceil(o/4) hex digits")
      ->required();

  auto* decrypt = app.add_subcommand("decrypt", "decrypt one hex value");
  add_common(decrypt, opts);
  decrypt->add_option("value", value_hex, "o-bit value, ceil(o/4) hex digits")
      ->required();

  auto* table = app.add_subcommand("table", "export the permutation as TSV");
  add_common(table, opts);

  auto* stats = app.add_subcommand("stats", "statistical distinguisher games");
  add_common(stats, opts);
  stats->add_option("--experiment", experiment, "fulltable|hybrid01|hybrid12")
      ->check(CLI::IsMember({"fulltable", "hybrid01", "hybrid12"}))
      ->capture_default_str();
  stats->add_option("--adversary", adversary, "null|fixedpoint|tableconsistency")
      ->check(CLI::IsMember({"null", "fixedpoint", "tableconsistency"}))
      ->capture_default_str();
  stats->add_option("--trials", trials)->capture_default_str();
  stats->add_option("--q", q, "query budget per trial")->capture_default_str();

  auto* attack = app.add_subcommand("attack-simon",
                                    "period-finding Feistel distinguisher");
  add_common(attack, opts);
  attack->add_option("--half-width", half_width)->capture_default_str();
  attack->add_option("--trials", trials)->capture_default_str();
  attack->add_option("--target", target, "prp|feistel3|randomperm")
      ->check(CLI::IsMember({"prp", "feistel3", "randomperm"}))
      ->capture_default_str();
  attack->add_option("--circuit", circuit_path,
                     "gate list to run against the table-backed oracle");

  auto* bench = app.add_subcommand("bench", "encrypt/decrypt throughput");
  add_common(bench, opts);
  bench->add_option("--iterations", iterations)->capture_default_str();

  auto* selftest = app.add_subcommand("selftest",
                                      "exhaustive o <= 8 invariant battery");
  add_common(selftest, opts);
  selftest->add_flag("--inject-fault", inject_fault,
                     "corrupt a swap-or-not round to verify detection")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (keygen->parsed()) return cmd_keygen(opts);
    if (encrypt->parsed()) return cmd_crypt(opts, value_hex, true);
    if (decrypt->parsed()) return cmd_crypt(opts, value_hex, false);
    if (table->parsed()) return cmd_table(opts);
    if (stats->parsed()) return cmd_stats(opts, experiment, adversary, trials, q);
    if (attack->parsed()) {
      return cmd_attack_simon(opts, half_width, trials, target, circuit_path);
    }
    if (bench->parsed()) return cmd_bench(opts, iterations);
    if (selftest->parsed()) {
      const bool ok = run_selftest(std::cerr, inject_fault);
      std::cout << (ok ? "selftest: all checks passed\n"
                       : "selftest: FAILURES detected\n");
      return ok ? 0 : kExitConstructionFailure;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kExitConstructionFailure;
  }
  return kExitUsage;
}
