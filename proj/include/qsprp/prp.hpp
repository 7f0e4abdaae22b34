#pragma once

#include "qsprp/fpc.hpp"
#include "qsprp/prf.hpp"

namespace qsprp {

// The composed keyed permutation PRP(k, x) = F^{PRF(k, .)}(x) and its
// inverse. The parameter object carries the converter spec so a key is
// never reused across incompatible oracle signatures.
struct PrpParams {
  size_t lambda = 128;
  FpcSpec fpc;
  PrfParams prf;  // m, n derived from fpc.oracle_signature()

  static PrpParams make(size_t lambda, const FpcSpec& spec,
                        PrgKind prg_kind = PrgKind::kSecure);
  void validate() const;
};

struct PrpKey {
  PrfKey key;

  std::string to_hex() const { return key.k.to_hex(); }
  static PrpKey from_hex(size_t lambda, std::string_view hex);
};

PrpKey prp_keygen(size_t lambda, RandomSource& rng);

Bits prp_encrypt(const PrpKey& key, const PrpParams& params, const Bits& x);
Bits prp_decrypt(const PrpKey& key, const PrpParams& params, const Bits& y);

// A keyed permutation instance holding its PRF oracle, for callers that
// evaluate many points under one key.
class PrpInstance {
 public:
  PrpInstance(const PrpKey& key, const PrpParams& params)
      : params_(params), oracle_(prf_as_oracle(key.key, params.prf)) {
    params_.validate();
  }

  Bits encrypt(const Bits& x) const {
    return fpc_forward(params_.fpc, *oracle_, x);
  }
  Bits decrypt(const Bits& y) const {
    return fpc_inverse(params_.fpc, *oracle_, y);
  }
  const PrpParams& params() const { return params_; }

 private:
  PrpParams params_;
  std::unique_ptr<OracleFunction> oracle_;
};

}  // namespace qsprp
