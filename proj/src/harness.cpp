#include "qsprp/harness.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qsprp {
namespace harness {

namespace {

void check_table_bits(int o) {
  if (o < 1 || o > kMaxTableBits) {
    throw std::invalid_argument("permutation table: o must be in 1..20");
  }
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

bool PermutationTable::is_bijection() const {
  if (forward.size() != (size_t{1} << o)) return false;
  std::vector<bool> seen(forward.size(), false);
  for (uint32_t y : forward) {
    if (y >= forward.size() || seen[y]) return false;
    seen[y] = true;
  }
  return true;
}

PermutationTable PermutationTable::inverted() const {
  if (!is_bijection()) {
    throw std::invalid_argument("PermutationTable::inverted: not a bijection");
  }
  PermutationTable inv{o, std::vector<uint32_t>(forward.size())};
  for (size_t x = 0; x < forward.size(); ++x) {
    inv.forward[forward[x]] = static_cast<uint32_t>(x);
  }
  return inv;
}

std::string PermutationTable::to_tsv() const {
  std::string out;
  for (size_t x = 0; x < forward.size(); ++x) {
    out += Bits::from_u64(o, x).to_hex();
    out += '\t';
    out += Bits::from_u64(o, forward[x]).to_hex();
    out += '\n';
  }
  return out;
}

PermutationTable derive_table(const PermOracle& construction) {
  check_table_bits(construction.o);
  const size_t size = size_t{1} << construction.o;
  PermutationTable table{construction.o, {}};
  table.forward.reserve(size);
  for (uint64_t x = 0; x < size; ++x) {
    table.forward.push_back(static_cast<uint32_t>(construction.forward(x)));
  }
  if (!table.is_bijection()) {
    throw std::runtime_error("derive_table: construction output is not a bijection");
  }
  for (uint64_t y = 0; y < size; ++y) {
    if (table.forward[construction.inverse(y)] != y) {
      throw std::runtime_error("derive_table: inverse disagrees with forward table");
    }
  }
  return table;
}

PermutationTable sample_random_permutation(int o, RandomSource& rng) {
  check_table_bits(o);
  PermutationTable table{o, std::vector<uint32_t>(size_t{1} << o)};
  std::iota(table.forward.begin(), table.forward.end(), 0u);
  for (size_t i = table.forward.size(); i > 1; --i) {
    std::swap(table.forward[i - 1], table.forward[rng.below(i)]);
  }
  return table;
}

PermStats permutation_statistics(const PermutationTable& table) {
  if (!table.is_bijection()) {
    throw std::invalid_argument("permutation_statistics: not a bijection");
  }
  PermStats stats;
  std::vector<bool> visited(table.forward.size(), false);
  for (size_t start = 0; start < table.forward.size(); ++start) {
    if (visited[start]) continue;
    int len = 0;
    size_t at = start;
    while (!visited[at]) {
      visited[at] = true;
      at = table.forward[at];
      ++len;
    }
    stats.cycle_type.push_back(len);
    if (len == 1) ++stats.fixed_points;
  }
  std::sort(stats.cycle_type.rbegin(), stats.cycle_type.rend());
  return stats;
}

uint64_t permutation_rank(const PermutationTable& table) {
  const size_t n = table.forward.size();
  if (n > 20) throw std::invalid_argument("permutation_rank: table too large");
  uint64_t rank = 0;
  for (size_t i = 0; i < n; ++i) {
    int smaller = 0;
    for (size_t j = i + 1; j < n; ++j) {
      if (table.forward[j] < table.forward[i]) ++smaller;
    }
    rank = rank * (n - i) + smaller;
  }
  return rank;
}

WorldFactory hybrid0_world(const PrpParams& params) {
  params.validate();
  return [params](RandomSource& rng) {
    auto prp = std::make_shared<PrpInstance>(prp_keygen(params.lambda, rng),
                                             params);
    const int o = static_cast<int>(params.fpc.domain_bits);
    return PermOracle{
        o,
        [prp, o](uint64_t x) {
          return prp->encrypt(Bits::from_u64(o, x)).to_u64();
        },
        [prp, o](uint64_t y) {
          return prp->decrypt(Bits::from_u64(o, y)).to_u64();
        }};
  };
}

WorldFactory hybrid1_world(const FpcSpec& spec) {
  spec.validate();
  return [spec](RandomSource& rng) {
    OracleSignature sig = spec.oracle_signature();
    auto oracle =
        std::make_shared<RandomOracle>(sig.m, sig.n, rng.next_u64());
    const int o = static_cast<int>(spec.domain_bits);
    return PermOracle{
        o,
        [spec, oracle, o](uint64_t x) {
          return fpc_forward(spec, *oracle, Bits::from_u64(o, x)).to_u64();
        },
        [spec, oracle, o](uint64_t y) {
          return fpc_inverse(spec, *oracle, Bits::from_u64(o, y)).to_u64();
        }};
  };
}

WorldFactory hybrid2_world(int o) {
  check_table_bits(o);
  return [o](RandomSource& rng) {
    auto table = std::make_shared<PermutationTable>(
        sample_random_permutation(o, rng));
    auto inverse = std::make_shared<PermutationTable>(table->inverted());
    return PermOracle{o,
                      [table](uint64_t x) { return table->forward[x]; },
                      [inverse](uint64_t y) { return inverse->forward[y]; }};
  };
}

std::string ExperimentReport::serialize(bool structured) const {
  std::ostringstream out;
  const std::string config_line =
      "o=" + std::to_string(config.o) + " q=" +
      std::to_string(config.query_budget) + " seed=" +
      std::to_string(config.seed) + " construction=" + config.construction +
      " ideal=" + config.ideal;
  if (structured) {
    out << "config: " << config_line << '\n'
        << "trials: " << config.trials << '\n'
        << "advantage: " << format_double(advantage) << '\n'
        << "ci_low: " << format_double(ci_low) << '\n'
        << "ci_high: " << format_double(ci_high) << '\n'
        << "chi2: " << format_double(chi2) << '\n'
        << "dof: " << dof << '\n'
        << "verdict: " << verdict << '\n';
  } else {
    out << "experiment: " << config_line << '\n'
        << "  trials " << config.trials << ", advantage "
        << format_double(advantage) << " (95% CI [" << format_double(ci_low)
        << ", " << format_double(ci_high) << "])\n"
        << "  chi2 " << format_double(chi2) << " at " << dof << " dof\n"
        << "  verdict: " << verdict << '\n';
  }
  return out.str();
}

namespace {

class NullAdversary : public Adversary {
 public:
  bool run(QueryChannel&, RandomSource& rng) override { return rng.coin(); }
};

class FixedPointAdversary : public Adversary {
 public:
  explicit FixedPointAdversary(int threshold) : threshold_(threshold) {}
  bool run(QueryChannel& channel, RandomSource&) override {
    const uint64_t size = uint64_t{1} << channel.domain_bits();
    int fixed = 0;
    for (uint64_t x = 0; x < size; ++x) {
      if (channel.forward(x) == x) ++fixed;
    }
    return fixed >= threshold_;
  }

 private:
  int threshold_;
};

class TableConsistencyAdversary : public Adversary {
 public:
  bool run(QueryChannel& channel, RandomSource&) override {
    const uint64_t size = uint64_t{1} << channel.domain_bits();
    std::vector<uint64_t> table(size);
    std::vector<bool> seen(size, false);
    for (uint64_t x = 0; x < size; ++x) {
      table[x] = channel.forward(x);
      if (table[x] >= size || seen[table[x]]) return false;
      seen[table[x]] = true;
    }
    for (uint64_t y = 0; y < size; ++y) {
      if (table[channel.inverse(y)] != y) return false;
    }
    return true;
  }
};

}  // namespace

std::unique_ptr<Adversary> make_null_adversary() {
  return std::make_unique<NullAdversary>();
}

std::unique_ptr<Adversary> make_fixed_point_adversary(int threshold) {
  return std::make_unique<FixedPointAdversary>(threshold);
}

std::unique_ptr<Adversary> make_table_consistency_adversary() {
  return std::make_unique<TableConsistencyAdversary>();
}

ExperimentReport distinguisher_game(const ExperimentConfig& config,
                                    Adversary& adversary,
                                    const WorldFactory& world_a,
                                    const WorldFactory& world_b) {
  if (config.trials < 1 || config.query_budget < 1) {
    throw std::invalid_argument("distinguisher_game: bad config");
  }
  RandomSource root(config.seed);
  int count[2] = {0, 0};
  int ones[2] = {0, 0};
  for (int trial = 0; trial < config.trials; ++trial) {
    const int world = trial % 2;
    RandomSource trial_rng = root.fork();
    PermOracle oracle = (world == 0 ? world_a : world_b)(trial_rng);
    QueryChannel channel(oracle, config.query_budget);
    const bool out = adversary.run(channel, trial_rng);
    ++count[world];
    if (out) ++ones[world];
  }
  const double pa = static_cast<double>(ones[0]) / count[0];
  const double pb = static_cast<double>(ones[1]) / count[1];
  const double se = std::sqrt(pa * (1 - pa) / count[0] +
                              pb * (1 - pb) / count[1]);
  ExperimentReport report;
  report.config = config;
  report.advantage = pa - pb;
  report.ci_low = report.advantage - 1.96 * se;
  report.ci_high = report.advantage + 1.96 * se;
  report.verdict = (report.ci_low > 0.0 || report.ci_high < 0.0)
                       ? "distinguished"
                       : "indistinguishable";
  return report;
}

ExperimentReport full_table_chi_square(const WorldFactory& construction,
                                       int o, int samples, uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("full_table_chi_square: samples");
  if (o != 2 && o != 3) {
    throw std::invalid_argument(
        "full_table_chi_square: only o=2 (exact) and o=3 (marginals)");
  }
  RandomSource root(seed);
  std::vector<double> expected;
  std::vector<int> observed;
  std::map<std::vector<int>, size_t> class_index;
  if (o == 2) {
    expected.assign(24, static_cast<double>(samples) / 24.0);
    observed.assign(24, 0);
  } else {
    const auto census = cycle_type_census(8);
    expected.resize(census.size());
    observed.assign(census.size(), 0);
    for (size_t i = 0; i < census.size(); ++i) {
      expected[i] = census[i].probability * samples;
      class_index[census[i].type] = i;
    }
  }
  for (int s = 0; s < samples; ++s) {
    RandomSource trial_rng = root.fork();
    PermutationTable table = derive_table(construction(trial_rng));
    if (o == 2) {
      ++observed[permutation_rank(table)];
    } else {
      ++observed[class_index.at(permutation_statistics(table).cycle_type)];
    }
  }
  double chi2 = 0.0;
  for (size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    chi2 += d * d / expected[i];
  }
  ExperimentReport report;
  report.config.o = o;
  report.config.query_budget = uint64_t{1} << o;  // full-domain regime
  report.config.trials = samples;
  report.config.seed = seed;
  report.chi2 = chi2;
  report.dof = static_cast<int>(expected.size()) - 1;
  report.verdict = chi2 < chi2_quantile(0.999, report.dof) ? "not_rejected"
                                                           : "rejected";
  return report;
}

double chi2_quantile(double p, int dof) {
  boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::quantile(dist, p);
}

double monobit_zscore(const Bits& stream) {
  const size_t n = stream.width();
  if (n == 0) throw std::invalid_argument("monobit_zscore: empty stream");
  size_t ones = 0;
  for (size_t i = 0; i < n; ++i) ones += stream.bit(i);
  return (2.0 * ones - static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
}

double byte_chi2(const Bits& stream) {
  const size_t nbytes = stream.width() / 8;
  if (nbytes < 256) {
    throw std::invalid_argument("byte_chi2: need at least 256 full bytes");
  }
  double counts[256] = {};
  for (size_t i = 0; i < nbytes; ++i) counts[stream.bytes()[i]] += 1.0;
  const double expected = static_cast<double>(nbytes) / 256.0;
  double chi2 = 0.0;
  for (double c : counts) {
    const double d = c - expected;
    chi2 += d * d / expected;
  }
  return chi2;
}

namespace {

void partitions_rec(int remaining, int max_part, std::vector<int>& current,
                    std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    current.push_back(part);
    partitions_rec(remaining - part, part, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<CycleClass> cycle_type_census(int n) {
  if (n < 1 || n > 20) throw std::invalid_argument("cycle_type_census: n");
  std::vector<std::vector<int>> parts;
  std::vector<int> scratch;
  partitions_rec(n, n, scratch, parts);
  std::vector<CycleClass> census;
  for (const auto& type : parts) {
    // Pr[cycle type] = 1 / prod over lengths l: l^{m_l} * m_l!
    double denom = 1.0;
    int run_len = 0;
    for (size_t i = 0; i < type.size(); ++i) {
      denom *= type[i];
      run_len = (i > 0 && type[i] == type[i - 1]) ? run_len + 1 : 1;
      denom *= run_len;
    }
    census.push_back({type, 1.0 / denom});
  }
  return census;
}

}  // namespace harness
}  // namespace qsprp
