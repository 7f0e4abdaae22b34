#include "qsprp/prg.hpp"

#include <openssl/sha.h>

#include <cstring>
#include <stdexcept>

namespace qsprp {

namespace {

// Secure stream block i = SHA256(tag || lambda_be16 || seed_bytes || i_be64).
// The seed bytes are the left-aligned encoding from Bits; the explicit
// lambda field separates seed widths that share a byte encoding.
constexpr char kDomainTag[] = "qsprp.prg.v1";

void secure_block(const Bits& seed, size_t lambda, uint64_t counter,
                  uint8_t out[SHA256_DIGEST_LENGTH]) {
  uint8_t buf[sizeof(kDomainTag) - 1 + 2 + kMaxLambda / 8 + 8];
  size_t off = 0;
  std::memcpy(buf + off, kDomainTag, sizeof(kDomainTag) - 1);
  off += sizeof(kDomainTag) - 1;
  buf[off++] = static_cast<uint8_t>(lambda >> 8);
  buf[off++] = static_cast<uint8_t>(lambda);
  std::memcpy(buf + off, seed.bytes().data(), seed.bytes().size());
  off += seed.bytes().size();
  for (int i = 7; i >= 0; --i) buf[off++] = static_cast<uint8_t>(counter >> (8 * i));
  SHA256(buf, off, out);
}

Bits secure_stream(const Bits& seed, size_t lambda, size_t nbits) {
  const size_t nbytes = (nbits + 7) / 8;
  if (nbytes <= SHA256_DIGEST_LENGTH) {
    uint8_t block[SHA256_DIGEST_LENGTH];
    secure_block(seed, lambda, 0, block);
    return Bits::from_bytes(nbits, block, nbytes);
  }
  std::vector<uint8_t> out(nbytes);
  uint8_t block[SHA256_DIGEST_LENGTH];
  for (size_t pos = 0, ctr = 0; pos < nbytes; pos += SHA256_DIGEST_LENGTH, ++ctr) {
    secure_block(seed, lambda, ctr, block);
    std::memcpy(out.data() + pos, block,
                std::min<size_t>(SHA256_DIGEST_LENGTH, nbytes - pos));
  }
  return Bits::from_bytes(nbits, out.data(), nbytes);
}

// Negative control: a 31-bit-style LCG whose output bytes have the low bit
// forced to zero. Monobit and byte-frequency tests both reject it.
Bits toy_weak_stream(const Bits& seed, size_t nbits) {
  uint64_t state = 0xcbf29ce484222325ULL;
  for (uint8_t b : seed.bytes()) {
    state ^= b;
    state *= 0x100000001b3ULL;
  }
  const size_t nbytes = (nbits + 7) / 8;
  std::vector<uint8_t> out(nbytes);
  for (size_t i = 0; i < nbytes; ++i) {
    state = state * 1103515245ULL + 12345ULL;
    out[i] = static_cast<uint8_t>(state >> 16) & 0xfe;
  }
  return Bits::from_bytes(nbits, out.data(), nbytes);
}

Bits dup_stream(const Bits& seed, size_t nbits) {
  Bits out(nbits);
  for (size_t i = 0; i < nbits; ++i) out.set_bit(i, seed.bit(i % seed.width()));
  return out;
}

}  // namespace

void validate_lambda(size_t lambda) {
  if (lambda < kMinLambda || lambda > kMaxLambda) {
    throw std::invalid_argument("lambda must be in [8, 1024]");
  }
}

Bits prg_stream(const PrgInstance& g, const Bits& seed, size_t nbits) {
  validate_lambda(g.lambda);
  if (seed.width() != g.lambda) {
    throw std::invalid_argument("prg_stream: seed length != lambda");
  }
  if (nbits == 0) throw std::invalid_argument("prg_stream: nbits must be >= 1");
  switch (g.kind) {
    case PrgKind::kSecure:
      return secure_stream(seed, g.lambda, nbits);
    case PrgKind::kToyWeak:
      return toy_weak_stream(seed, nbits);
    case PrgKind::kDupDegenerate:
      return dup_stream(seed, nbits);
  }
  throw std::invalid_argument("prg_stream: unknown kind");
}

std::pair<Bits, Bits> prg_expand(const PrgInstance& g, const Bits& seed) {
  Bits stream = prg_stream(g, seed, 2 * g.lambda);
  return {stream.slice(0, g.lambda), stream.slice(g.lambda, g.lambda)};
}

}  // namespace qsprp
