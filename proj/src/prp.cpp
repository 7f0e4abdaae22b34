#include "qsprp/prp.hpp"

#include <stdexcept>

namespace qsprp {

PrpParams PrpParams::make(size_t lambda, const FpcSpec& spec,
                          PrgKind prg_kind) {
  PrpParams params;
  params.lambda = lambda;
  params.fpc = spec;
  params.fpc.lambda = lambda;
  OracleSignature sig = params.fpc.oracle_signature();
  params.prf = PrfParams{PrgInstance{prg_kind, lambda}, sig.m, sig.n};
  params.validate();
  return params;
}

void PrpParams::validate() const {
  fpc.validate();
  prf.validate();
  OracleSignature sig = fpc.oracle_signature();
  if (prf.m != sig.m || prf.n != sig.n) {
    throw std::invalid_argument("PrpParams: prf (m, n) != fpc oracle signature");
  }
  if (prf.prg.lambda != lambda || fpc.lambda != lambda) {
    throw std::invalid_argument("PrpParams: inconsistent lambda");
  }
}

PrpKey PrpKey::from_hex(size_t lambda, std::string_view hex) {
  validate_lambda(lambda);
  return PrpKey{PrfKey{Bits::from_hex(lambda, hex)}};
}

PrpKey prp_keygen(size_t lambda, RandomSource& rng) {
  validate_lambda(lambda);
  return PrpKey{PrfKey{rng.bits(lambda)}};
}

Bits prp_encrypt(const PrpKey& key, const PrpParams& params, const Bits& x) {
  params.validate();
  auto oracle = prf_as_oracle(key.key, params.prf);
  return fpc_forward(params.fpc, *oracle, x);
}

Bits prp_decrypt(const PrpKey& key, const PrpParams& params, const Bits& y) {
  params.validate();
  auto oracle = prf_as_oracle(key.key, params.prf);
  return fpc_inverse(params.fpc, *oracle, y);
}

}  // namespace qsprp
