#pragma once

#include <memory>

#include "qsprp/oracle.hpp"
#include "qsprp/prg.hpp"

namespace qsprp {

constexpr size_t kMaxPrfIoBits = 1u << 16;

struct PrfParams {
  PrgInstance prg;  // carries lambda and the generator kind
  size_t m = 0;     // input bits, may be 0
  size_t n = 1;     // output bits, >= 1

  void validate() const;
};

struct PrfKey {
  Bits k;  // exactly lambda bits
};

// GGM tree evaluation: walk the input bits most-significant first, taking
// the left child seed on 0 and the right on 1, then expand the leaf seed
// to n output bits.
Bits prf_eval(const PrfKey& key, const PrfParams& params, const Bits& x);

// Keyed PRF exposed as an OracleFunction with signature (m, n). Evaluations
// are memoized and tree nodes are cached across queries, so repeated or
// prefix-sharing queries cost far less than a full walk. Thread-safe.
std::unique_ptr<OracleFunction> prf_as_oracle(const PrfKey& key,
                                              const PrfParams& params);

// Domain/range shrinking: eval(x') = first n_small bits of
// prf_eval(key, params, pad || x'), with |pad| = m - m_small. The pad sits
// on the most-significant side.
std::unique_ptr<OracleFunction> prf_adapt(const PrfKey& key,
                                          const PrfParams& params,
                                          size_t m_small, size_t n_small,
                                          const Bits& pad);

}  // namespace qsprp
