#pragma once

#include <utility>
#include <vector>

#include "qsprp/oracle.hpp"

namespace qsprp {

enum class FpcKind {
  kFeistel,          // r-round balanced Feistel; domain bits must be even
  kSwapOrNot,        // swap-or-not shuffle
  kSometimesRecurse, // sometimes-recurse shuffle over swap-or-not levels
};

struct OracleSignature {
  size_t m = 0;
  size_t n = 0;
  bool operator==(const OracleSignature&) const = default;
};

// Query multiplexing layout, fixed bit-exactly so truth tables reproduce
// across implementations:
//   tag(8) || level(8) || round(16) || payload(W),  W = max(o, 1)
// with the payload value right-aligned (zero-padded on the left).
// m(o, lambda) = 32 + W and n(o, lambda) = max(o, 1).
constexpr uint8_t kTagFeistelRound = 0x01;
constexpr uint8_t kTagSnRoundKey = 0x02;
constexpr uint8_t kTagSnSwapBit = 0x03;
constexpr uint8_t kTagSrRoundKey = 0x04;
constexpr uint8_t kTagSrSwapBit = 0x05;

Bits encode_query(uint8_t tag, uint8_t level, uint16_t round,
                  const Bits& payload, size_t payload_width);

struct FpcSpec {
  FpcKind kind = FpcKind::kSometimesRecurse;
  size_t domain_bits = 0;  // o
  size_t lambda = 128;
  // Single entry for Feistel / swap-or-not; one entry per recursion level
  // (widths o down to 1) for sometimes-recurse.
  std::vector<uint32_t> rounds;

  // Conservative default schedules: Feistel 4 rounds, swap-or-not 8o+8,
  // sometimes-recurse 8w+8 at active width w. Configurable; these defaults
  // carry no security bound of their own.
  static FpcSpec with_default_rounds(FpcKind kind, size_t o, size_t lambda);

  OracleSignature oracle_signature() const;
  void validate() const;
};

// The converter pair: forward is a bijection on {0,1}^o for every oracle O
// with the spec's signature, and inverse undoes it point by point.
Bits fpc_forward(const FpcSpec& spec, const OracleFunction& oracle,
                 const Bits& x);
Bits fpc_inverse(const FpcSpec& spec, const OracleFunction& oracle,
                 const Bits& y);

// One Feistel round: (L', R') = (R, L ^ f_out). Halves must be equal width.
std::pair<Bits, Bits> feistel_round(const Bits& left, const Bits& right,
                                    const Bits& f_out);

// One swap-or-not round: X' = X ^ K, canonical representative
// X_hat = max(X, X'); returns X' when swap_bit(X_hat) is set, else X.
// Self-inverse for fixed (K, swap_bit).
Bits swap_or_not_round(const Bits& x, const Bits& round_key,
                       const std::function<bool(const Bits&)>& swap_bit);

// Exact oracle-query cost of one forward (or inverse) call: Feistel r,
// swap-or-not 2r, sometimes-recurse the sum of 2 * rounds_j over the levels
// actually executed. For sometimes-recurse the output pins the termination
// level, so the count is a function of (spec, output).
uint64_t expected_query_count(const FpcSpec& spec, const Bits& output);

}  // namespace qsprp
