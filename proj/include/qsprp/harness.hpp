#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qsprp/fpc.hpp"
#include "qsprp/prp.hpp"

namespace qsprp {
namespace harness {

constexpr int kMaxTableBits = 20;

// --- Permutation tables -----------------------------------------------------

struct PermutationTable {
  int o = 0;
  std::vector<uint32_t> forward;  // 2^o entries

  bool is_bijection() const;
  PermutationTable inverted() const;
  // TSV export: lowercase hex x, tab, hex y, one pair per line, no header.
  std::string to_tsv() const;
};

// A keyed/oracle-backed permutation presented as forward/inverse callables.
struct PermOracle {
  int o = 0;
  std::function<uint64_t(uint64_t)> forward;
  std::function<uint64_t(uint64_t)> inverse;
};

// Exhaustively evaluates the construction, validates bijectivity, and
// cross-checks the inverse callable against the inverted forward table.
PermutationTable derive_table(const PermOracle& construction);

// Uniform over the symmetric group via unbiased index-swap shuffling.
PermutationTable sample_random_permutation(int o, RandomSource& rng);

struct PermStats {
  int fixed_points = 0;
  std::vector<int> cycle_type;  // cycle lengths, descending
};

PermStats permutation_statistics(const PermutationTable& table);

// Lexicographic rank of the permutation within S_{2^o} (Lehmer code).
uint64_t permutation_rank(const PermutationTable& table);

// --- Worlds ------------------------------------------------------------------

// A world factory builds a fresh oracle-or-keyed permutation per trial.
using WorldFactory = std::function<PermOracle(RandomSource&)>;

// Hybrid 0: converter over a PRF-backed oracle with a fresh key per trial.
WorldFactory hybrid0_world(const PrpParams& params);
// Hybrid 1: the same converter over a fresh lazily-sampled random oracle.
WorldFactory hybrid1_world(const FpcSpec& spec);
// Hybrid 2: a fresh uniform random permutation.
WorldFactory hybrid2_world(int o);

// --- Experiments --------------------------------------------------------------

struct ExperimentConfig {
  int o = 0;
  uint64_t query_budget = 1;  // q; q >= 2^o is the full-domain regime
  int trials = 1;
  uint64_t seed = 0;
  std::string construction;  // label echoed into the report
  std::string ideal;         // label echoed into the report
};

struct ExperimentReport {
  ExperimentConfig config;
  double advantage = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double chi2 = 0.0;
  int dof = 0;
  std::string verdict;
  // Structured text with stable field names: config, trials, advantage,
  // ci_low, ci_high, chi2, dof, verdict. `structured` emits bare key: value
  // lines; otherwise a short human-readable block.
  std::string serialize(bool structured) const;
};

class QueryBudgetExceeded : public std::runtime_error {
 public:
  explicit QueryBudgetExceeded(uint64_t budget)
      : std::runtime_error("adversary exceeded its query budget of " +
                           std::to_string(budget)) {}
};

// Forward/inverse access handed to an adversary; counts every query in both
// directions against the shared budget.
class QueryChannel {
 public:
  QueryChannel(const PermOracle& oracle, uint64_t budget)
      : oracle_(oracle), budget_(budget) {}

  uint64_t forward(uint64_t x) {
    charge();
    return oracle_.forward(x);
  }
  uint64_t inverse(uint64_t y) {
    charge();
    return oracle_.inverse(y);
  }
  int domain_bits() const { return oracle_.o; }
  uint64_t used() const { return used_; }

 private:
  void charge() {
    if (used_ >= budget_) throw QueryBudgetExceeded(budget_);
    ++used_;
  }
  const PermOracle& oracle_;
  uint64_t budget_;
  uint64_t used_ = 0;
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual bool run(QueryChannel& channel, RandomSource& rng) = 0;
};

// Outputs an unbiased coin independent of the oracle.
std::unique_ptr<Adversary> make_null_adversary();
// Queries the full domain and outputs 1 when the fixed-point count reaches
// the threshold.
std::unique_ptr<Adversary> make_fixed_point_adversary(int threshold);
// Derives the forward table and outputs 1 iff inverse queries confirm it is
// a consistent bijection; flags construction defects, advantage ~0 otherwise.
std::unique_ptr<Adversary> make_table_consistency_adversary();

// Runs `trials` games alternating between the two worlds and estimates
// Pr[A=1 | world A] - Pr[A=1 | world B] with a 95% confidence interval.
ExperimentReport distinguisher_game(const ExperimentConfig& config,
                                    Adversary& adversary,
                                    const WorldFactory& world_a,
                                    const WorldFactory& world_b);

// Full-domain goodness-of-fit: samples fresh constructions, derives the
// whole table each time, and tests the induced distribution against the
// uniform distribution on S_{2^o}. o = 2 bins all 24 permutations; o = 3
// bins cycle types (the exact marginal), because 8! cells are infeasible.
ExperimentReport full_table_chi_square(const WorldFactory& construction,
                                       int o, int samples, uint64_t seed);

// --- Statistics utilities ------------------------------------------------------

// Upper quantile of the chi-squared distribution (rejection threshold at
// significance alpha is chi2_quantile(1 - alpha, dof)).
double chi2_quantile(double p, int dof);

// Monobit z-score of a bit stream: 0 for perfectly balanced, |z| > ~4 is a
// clear failure.
double monobit_zscore(const Bits& stream);
// Chi-squared statistic of the byte histogram against uniform (255 dof).
double byte_chi2(const Bits& stream);

// Exact cycle-type census of S_n: each partition of n paired with its
// probability under a uniform permutation.
struct CycleClass {
  std::vector<int> type;  // descending cycle lengths
  double probability = 0.0;
};
std::vector<CycleClass> cycle_type_census(int n);

}  // namespace harness
}  // namespace qsprp
