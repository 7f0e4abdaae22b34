#pragma once

#include <utility>

#include "qsprp/bits.hpp"

namespace qsprp {

// Length-doubling pseudorandom generators. kSecure is the real thing
// (SHA-256 in counter mode, see prg.cpp); the other two kinds exist for
// negative controls and analytic test cases.
enum class PrgKind {
  kSecure,         // SHA-256 counter-mode expansion
  kToyWeak,        // deliberately biased LCG byte stream
  kDupDegenerate,  // G(s) = (s, s); stream is the seed repeated
};

constexpr size_t kMinLambda = 8;
constexpr size_t kMaxLambda = 1024;

struct PrgInstance {
  PrgKind kind = PrgKind::kSecure;
  size_t lambda = 128;  // seed length in bits, in [8, 1024]
};

void validate_lambda(size_t lambda);

// Deterministic nbits-long expansion of the seed. Prefix-consistent:
// prg_stream(g, s, a) is a prefix of prg_stream(g, s, b) for a <= b.
Bits prg_stream(const PrgInstance& g, const Bits& seed, size_t nbits);

// The length-doubling generator: the first 2*lambda stream bits, split
// into the two child seeds (left = first lambda bits).
std::pair<Bits, Bits> prg_expand(const PrgInstance& g, const Bits& seed);

}  // namespace qsprp
