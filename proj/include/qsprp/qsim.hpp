#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "qsprp/bits.hpp"

namespace qsprp {
namespace qsim {

constexpr int kMaxStateBits = 24;

enum class Register { kX, kY, kZ };

// Dense state vector over registers |x, y, z>. Amplitude index layout:
// (x << (wy + wz)) | (y << wz) | z. Bit 0 of a register is its most
// significant bit, matching Bits.
struct StateVector {
  int wx = 0, wy = 0, wz = 0;
  std::vector<std::complex<double>> amp;

  static StateVector basis(int wx, int wy, int wz, uint64_t x = 0,
                           uint64_t y = 0, uint64_t z = 0);

  size_t index(uint64_t x, uint64_t y, uint64_t z) const {
    return (x << (wy + wz)) | (y << wz) | z;
  }
  double norm() const;
  int register_width(Register r) const;
};

// Classical function as an explicit truth table, applied as the unitary
// O|x,y,z> = |x, y ^ O(x), z>.
struct QuantumOracle {
  int in_bits = 0;
  int out_bits = 0;
  std::vector<uint64_t> table;  // 2^in_bits entries, each < 2^out_bits

  void validate() const;
};

void apply_oracle(StateVector& psi, const QuantumOracle& oracle);
// Same unitary with O(x) computed on the fly.
void apply_oracle_fn(StateVector& psi,
                     const std::function<uint64_t(uint64_t)>& fn);

void apply_hadamard(StateVector& psi, Register reg, int bit);
// Born-rule measurement of a whole register; collapses and renormalizes.
uint64_t measure(StateVector& psi, Register reg, RandomSource& rng);
// Measures the x register, then applies the oracle.
uint64_t classical_query(StateVector& psi, const QuantumOracle& oracle,
                         RandomSource& rng);

// --- Circuits -------------------------------------------------------------

// Text format, one gate per line (blank lines and '#' comments ignored):
//   h <x|z> <bit>      Hadamard on one register bit
//   oracle <fwd|inv>   permutation oracle gate
//   cquery <fwd|inv>   classical query (measure x, then oracle)
//   measure <x|y|z>    Born-rule measurement of a register
struct Gate {
  enum class Kind { kHadamard, kOracle, kClassicalQuery, kMeasure };
  Kind kind;
  Register reg = Register::kX;
  int bit = 0;
  bool inverse_oracle = false;
};

std::vector<Gate> parse_circuit(std::string_view text);

struct CircuitResult {
  StateVector state;
  std::vector<uint64_t> measurements;
};

CircuitResult run_circuit(StateVector initial, const std::vector<Gate>& gates,
                          const std::function<uint64_t(uint64_t)>& forward,
                          const std::function<uint64_t(uint64_t)>& inverse,
                          RandomSource& rng);

// Executes the circuit answering every oracle gate from captured truth
// tables alone. The tables must be mutually inverse bijections; the result
// is identical to running against the live permutation.
CircuitResult simulate_from_truth_table(
    const std::vector<uint64_t>& forward_table,
    const std::vector<uint64_t>& inverse_table, int domain_bits,
    StateVector initial, const std::vector<Gate>& gates, RandomSource& rng);

// --- Simon's algorithm ----------------------------------------------------

struct SimonTranscript {
  std::vector<uint64_t> measured;  // post-Hadamard x measurements
  std::vector<int> rank_history;   // GF(2) rank after each run
  std::optional<uint64_t> period;
};

// Repeats [uniform x, oracle, Hadamard x, measure x], collecting vectors
// orthogonal to any period, until they pin a unique nonzero candidate
// (rank w-1) or rule one out (rank w / max_runs exhausted).
std::optional<uint64_t> simon_find_period(const QuantumOracle& g, int max_runs,
                                          RandomSource& rng,
                                          SimonTranscript* transcript = nullptr);

// --- 3-round Feistel distinguisher ----------------------------------------

enum class Verdict { kFeistelLike, kRandomLike };

struct KmResult {
  Verdict verdict = Verdict::kRandomLike;
  std::optional<uint64_t> period;
  SimonTranscript transcript;
};

// Period-finding distinguisher against a permutation on 2h bits. Builds
// g(b, x) = msb-half(P(x || alpha_b)) ^ alpha_b over (1+h)-bit inputs; for a
// 3-round Feistel g has period (1, f1(alpha) ^ f1(beta)), where f1 is the
// first round function. The Simon candidate is verified classically on
// fresh random points before declaring FEISTEL_LIKE.
KmResult km_feistel_distinguisher(
    const std::function<uint64_t(uint64_t)>& perm_forward,
    const std::function<uint64_t(uint64_t)>& perm_inverse, int half_width,
    uint64_t alpha, uint64_t beta, RandomSource& rng);

}  // namespace qsim
}  // namespace qsprp
