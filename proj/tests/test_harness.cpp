#include <stdexcept>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "qsprp/harness.hpp"

using namespace qsprp;
using namespace qsprp::harness;

namespace {

PermOracle table_oracle(const PermutationTable& table) {
  auto fwd = std::make_shared<PermutationTable>(table);
  auto inv = std::make_shared<PermutationTable>(table.inverted());
  return PermOracle{
      table.o, [fwd](uint64_t x) { return fwd->forward[x]; },
      [inv](uint64_t y) { return inv->forward[y]; }};
}

}  // namespace

TEST_CASE("permutation statistics on identity and a 4-cycle") {
  PermutationTable id{2, {0, 1, 2, 3}};
  PermStats s = permutation_statistics(id);
  CHECK(s.fixed_points == 4);
  CHECK(s.cycle_type == std::vector<int>{1, 1, 1, 1});

  PermutationTable cyc{2, {1, 2, 3, 0}};
  s = permutation_statistics(cyc);
  CHECK(s.fixed_points == 0);
  CHECK(s.cycle_type == std::vector<int>{4});

  PermutationTable mixed{2, {0, 2, 1, 3}};
  s = permutation_statistics(mixed);
  CHECK(s.fixed_points == 2);
  CHECK(s.cycle_type == std::vector<int>{2, 1, 1});
}

TEST_CASE("permutation rank is the lexicographic lehmer rank") {
  CHECK(permutation_rank(PermutationTable{1, {0, 1}}) == 0);
  CHECK(permutation_rank(PermutationTable{1, {1, 0}}) == 1);
  CHECK(permutation_rank(PermutationTable{2, {0, 1, 2, 3}}) == 0);
  CHECK(permutation_rank(PermutationTable{2, {3, 2, 1, 0}}) == 23);
}

TEST_CASE("derive_table validates bijectivity and the inverse callable") {
  PermutationTable table{2, {2, 0, 3, 1}};
  PermOracle good = table_oracle(table);
  PermutationTable derived = derive_table(good);
  CHECK(derived.forward == table.forward);
  CHECK(derived.is_bijection());

  PermOracle collides = good;
  collides.forward = [](uint64_t) { return 0; };
  CHECK_THROWS_AS(derive_table(collides), std::runtime_error);

  PermOracle bad_inverse = table_oracle(table);
  bad_inverse.inverse = [](uint64_t y) { return y; };
  CHECK_THROWS_AS(derive_table(bad_inverse), std::runtime_error);
}

TEST_CASE("tsv export is hex pairs, one per line") {
  PermutationTable table{2, {2, 0, 3, 1}};
  CHECK(table.to_tsv() == "0\t2\n1\t0\n2\t3\n3\t1\n");
  PermutationTable wide{8, {}};
  wide.forward.resize(256);
  std::iota(wide.forward.begin(), wide.forward.end(), 0);
  std::istringstream lines(wide.to_tsv());
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "00\t00");
  while (std::getline(lines, line)) continue;
}

TEST_CASE("random permutation sampling is uniform at o = 1 and o = 2") {
  RandomSource rng(30);
  int swapped = 0;
  for (int t = 0; t < 4000; ++t)
    if (sample_random_permutation(1, rng).forward[0] == 1) ++swapped;
  CHECK(std::abs(swapped - 2000) < 3 * std::sqrt(1000.0));

  std::array<int, 24> counts{};
  const int samples = 24000;
  for (int t = 0; t < samples; ++t)
    ++counts[permutation_rank(sample_random_permutation(2, rng))];
  double chi2 = 0.0, expected = samples / 24.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < chi2_quantile(0.999, 23));
}

TEST_CASE("fixed point count of a random permutation averages one") {
  RandomSource rng(31);
  double total = 0.0;
  const int n = 5000;
  for (int t = 0; t < n; ++t)
    total += permutation_statistics(sample_random_permutation(3, rng))
                 .fixed_points;
  CHECK(std::abs(total / n - 1.0) < 0.05);
}

TEST_CASE("cycle type census probabilities sum to one and match hand values") {
  auto census = cycle_type_census(4);
  CHECK(census.size() == 5);  // partitions of 4
  double sum = 0.0;
  for (const auto& c : census) {
    sum += c.probability;
    if (c.type == std::vector<int>{4})
      CHECK(c.probability == doctest::Approx(0.25));
    if (c.type == std::vector<int>{1, 1, 1, 1})
      CHECK(c.probability == doctest::Approx(1.0 / 24));
    if (c.type == std::vector<int>{2, 2})
      CHECK(c.probability == doctest::Approx(0.125));
  }
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("query channel enforces the budget exactly") {
  PermutationTable table{2, {1, 0, 3, 2}};
  PermOracle oracle = table_oracle(table);
  QueryChannel channel(oracle, 3);
  CHECK(channel.forward(0) == 1);
  CHECK(channel.inverse(1) == 0);
  CHECK(channel.forward(2) == 3);
  CHECK(channel.used() == 3);
  CHECK_THROWS_AS(channel.forward(0), QueryBudgetExceeded);
}

TEST_CASE("null adversary advantage interval straddles zero") {
  ExperimentConfig config;
  config.o = 4;
  config.query_budget = 1ull << 4;
  config.trials = 2000;
  config.seed = 77;
  config.construction = "random";
  config.ideal = "random";
  auto adversary = make_null_adversary();
  ExperimentReport report = distinguisher_game(
      config, *adversary, hybrid2_world(4), hybrid2_world(4));
  CHECK(report.ci_low <= 0.0);
  CHECK(report.ci_high >= 0.0);
  CHECK(report.verdict == "indistinguishable");
}

TEST_CASE("fixed point adversary separates one-round swap-or-not from random") {
  // A single swap-or-not round is x -> x or x ^ K uniformly over oracles,
  // never a generic permutation; with threshold 1 the acceptance rates
  // differ by a wide margin at o = 4.
  FpcSpec spec = FpcSpec::with_default_rounds(FpcKind::kSwapOrNot, 4, 64);
  spec.rounds = {1};
  ExperimentConfig config;
  config.o = 4;
  config.query_budget = 1ull << 4;
  config.trials = 1500;
  config.seed = 78;
  config.construction = "sn1";
  config.ideal = "random";
  auto adversary = make_fixed_point_adversary(1);
  ExperimentReport report = distinguisher_game(
      config, *adversary, hybrid1_world(spec), hybrid2_world(4));
  CHECK(std::abs(report.advantage) > 0.2);
  CHECK(report.verdict == "distinguished");
}

TEST_CASE("table consistency adversary accepts every hybrid") {
  FpcSpec spec = FpcSpec::with_default_rounds(FpcKind::kSometimesRecurse, 3, 64);
  PrpParams params = PrpParams::make(64, spec);
  ExperimentConfig config;
  config.o = 3;
  config.query_budget = 1ull << 5;  // 2^o forward + 2^o inverse
  config.trials = 200;
  config.seed = 79;
  config.construction = "prp";
  config.ideal = "fpc";
  auto adversary = make_table_consistency_adversary();
  ExperimentReport report = distinguisher_game(
      config, *adversary, hybrid0_world(params), hybrid1_world(spec));
  CHECK(std::abs(report.advantage) < 0.05);
}

TEST_CASE("full table chi square keeps ideal samplers and flags weak ones") {
  ExperimentReport ideal =
      full_table_chi_square(hybrid2_world(2), 2, 6000, 80);
  CHECK(ideal.dof == 23);
  CHECK(ideal.verdict == "not_rejected");

  // 2-round Feistel at o = 2 can only reach a sliver of S_4.
  FpcSpec weak = FpcSpec::with_default_rounds(FpcKind::kFeistel, 2, 64);
  weak.rounds = {2};
  ExperimentReport rejected =
      full_table_chi_square(hybrid1_world(weak), 2, 6000, 81);
  CHECK(rejected.verdict == "rejected");
  CHECK(rejected.chi2 > 10 * chi2_quantile(0.999, 23));

  ExperimentReport o3 =
      full_table_chi_square(hybrid1_world(FpcSpec::with_default_rounds(
                                FpcKind::kSometimesRecurse, 3, 64)),
                            3, 2000, 82);
  CHECK(o3.verdict == "not_rejected");
}

TEST_CASE("ideal sampler false positive guard across repeated batches") {
  int rejections = 0;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    ExperimentReport r = full_table_chi_square(hybrid2_world(2), 2, 1200,
                                               1000 + seed);
    if (r.verdict == "rejected") ++rejections;
  }
  CHECK(rejections <= 2);  // alpha = 0.001 per batch
}

TEST_CASE("report serialization uses the stable field names") {
  ExperimentReport report;
  report.config =
      ExperimentConfig{4, 16, 100, 9, "construction-label", "ideal-label"};
  report.advantage = 0.125;
  report.ci_low = -0.01;
  report.ci_high = 0.26;
  report.dof = 23;
  report.verdict = "indistinguishable";
  std::string text = report.serialize(true);
  for (const char* field : {"config", "trials", "advantage", "ci_low",
                            "ci_high", "chi2", "dof", "verdict"}) {
    CAPTURE(field);
    CHECK(text.find(field) != std::string::npos);
  }
  CHECK(text.find("construction-label") != std::string::npos);
  CHECK(report.serialize(false).find("indistinguishable") !=
        std::string::npos);
}

TEST_CASE("monobit and byte statistics behave on known streams") {
  Bits balanced = Bits::from_hex(16, "a5a5");
  CHECK(monobit_zscore(balanced) == doctest::Approx(0.0));
  Bits ones = Bits::from_hex(16, "ffff");
  CHECK(monobit_zscore(ones) == doctest::Approx(4.0));
  RandomSource rng(90);
  Bits random_stream = rng.bits(8 * 4096);
  CHECK(byte_chi2(random_stream) < chi2_quantile(0.999, 255));
  CHECK_THROWS_AS(byte_chi2(Bits::from_u64(64, 1)), std::invalid_argument);
}

TEST_CASE("chi2 quantile matches reference values") {
  CHECK(chi2_quantile(0.999, 23) == doctest::Approx(49.728).epsilon(1e-3));
  CHECK(chi2_quantile(0.95, 1) == doctest::Approx(3.8415).epsilon(1e-3));
}
