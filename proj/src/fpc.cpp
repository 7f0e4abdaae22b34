#include "qsprp/fpc.hpp"

#include <algorithm>
#include <stdexcept>

#include "qsprp/prg.hpp"

namespace qsprp {

namespace {

constexpr size_t kMaxDomainBits = 4096;
constexpr uint32_t kMaxRounds = 0xffff;  // round field is 16 bits

size_t payload_width(size_t o) { return o > 0 ? o : 1; }

void check_signature(const FpcSpec& spec, const OracleFunction& oracle) {
  OracleSignature sig = spec.oracle_signature();
  if (oracle.input_bits() != sig.m || oracle.output_bits() != sig.n) {
    throw std::invalid_argument("fpc: oracle signature mismatch");
  }
}

Bits sn_round_key(const OracleFunction& oracle, uint8_t key_tag, uint8_t level,
                  uint16_t round, size_t w, size_t payload_w) {
  return oracle.eval(encode_query(key_tag, level, round, Bits(payload_w),
                                  payload_w))
      .prefix(w);
}

// One swap-or-not pass at active width w: forward applies rounds 0..r-1,
// inverse applies them in reverse (each round is an involution).
Bits sn_pass(const OracleFunction& oracle, uint8_t key_tag, uint8_t swap_tag,
             uint8_t level, uint32_t rounds, size_t payload_w, Bits value,
             bool forward) {
  const size_t w = value.width();
  for (uint32_t i = 0; i < rounds; ++i) {
    const uint16_t round =
        static_cast<uint16_t>(forward ? i : rounds - 1 - i);
    Bits key = sn_round_key(oracle, key_tag, level, round, w, payload_w);
    value = swap_or_not_round(value, key, [&](const Bits& canonical) {
      return oracle
          .eval(encode_query(swap_tag, level, round,
                             canonical.zero_extend(payload_w), payload_w))
          .bit(0);
    });
  }
  return value;
}

Bits feistel_apply(const FpcSpec& spec, const OracleFunction& oracle,
                   const Bits& x, bool forward) {
  const size_t o = spec.domain_bits;
  const size_t h = o / 2;
  const uint32_t rounds = spec.rounds[0];
  Bits left = x.slice(0, h);
  Bits right = x.slice(h, h);
  if (forward) {
    for (uint32_t i = 0; i < rounds; ++i) {
      Bits f = oracle
                   .eval(encode_query(kTagFeistelRound, 0,
                                      static_cast<uint16_t>(i),
                                      right.zero_extend(o), o))
                   .prefix(h);
      std::tie(left, right) = feistel_round(left, right, f);
    }
  } else {
    for (uint32_t i = rounds; i-- > 0;) {
      // Undo (L', R') = (R, L ^ f(R)): here (left, right) is the post-round
      // pair, so R = left and L = right ^ f(left).
      Bits f = oracle
                   .eval(encode_query(kTagFeistelRound, 0,
                                      static_cast<uint16_t>(i),
                                      left.zero_extend(o), o))
                   .prefix(h);
      Bits prev_left = right ^ f;
      right = left;
      left = prev_left;
    }
  }
  return left.concat(right);
}

Bits swap_or_not_apply(const FpcSpec& spec, const OracleFunction& oracle,
                       const Bits& x, bool forward) {
  return sn_pass(oracle, kTagSnRoundKey, kTagSnSwapBit, 0, spec.rounds[0],
                 payload_width(spec.domain_bits), x, forward);
}

// Termination level encoded in the output: descending a level always strips
// a zero top bit, so the output is 0^j || v with v's top bit set (or j=o-1
// and v a single arbitrary bit).
size_t sr_termination_level(const Bits& y) {
  const size_t o = y.width();
  size_t z = 0;
  while (z < o && !y.bit(z)) ++z;
  return z >= o - 1 ? o - 1 : z;
}

Bits sometimes_recurse_forward(const FpcSpec& spec,
                               const OracleFunction& oracle, const Bits& x) {
  const size_t o = spec.domain_bits;
  const size_t payload_w = payload_width(o);
  Bits value = x;
  for (size_t level = 0;; ++level) {
    const size_t w = o - level;
    value = sn_pass(oracle, kTagSrRoundKey, kTagSrSwapBit,
                    static_cast<uint8_t>(level), spec.rounds[level], payload_w,
                    value, /*forward=*/true);
    if (w == 1 || value.bit(0)) break;
    value = value.slice(1, w - 1);  // strip the zero top bit, recurse
  }
  return value.zero_extend(o);
}

Bits sometimes_recurse_inverse(const FpcSpec& spec,
                               const OracleFunction& oracle, const Bits& y) {
  const size_t o = spec.domain_bits;
  const size_t payload_w = payload_width(o);
  const size_t term = sr_termination_level(y);
  Bits value = y.slice(term, o - term);
  for (size_t level = term + 1; level-- > 0;) {
    value = sn_pass(oracle, kTagSrRoundKey, kTagSrSwapBit,
                    static_cast<uint8_t>(level), spec.rounds[level], payload_w,
                    value, /*forward=*/false);
    if (level > 0) value = Bits(1).concat(value);  // restore the stripped zero
  }
  return value;
}

// --- Integer fast path (oracle signature fits in 64 bits, i.e. o <= 32) ----
//
// Mirrors the Bits implementations exactly: values are the numeric reading
// of the MSB-first bit strings, so canonical-max comparisons, prefixes, and
// top-bit tests all translate to plain integer operations.

uint64_t encode_u64(uint8_t tag, uint8_t level, uint16_t round,
                    uint64_t payload, size_t payload_w) {
  const uint64_t header =
      (uint64_t{tag} << 24) | (uint64_t{level} << 16) | round;
  return (header << payload_w) | payload;
}

uint64_t sn_pass_u64(const OracleFunction& oracle, uint8_t key_tag,
                     uint8_t swap_tag, uint8_t level, uint32_t rounds,
                     size_t payload_w, size_t w, uint64_t value,
                     bool forward) {
  const size_t n = payload_w;  // oracle output width
  for (uint32_t i = 0; i < rounds; ++i) {
    const uint16_t round =
        static_cast<uint16_t>(forward ? i : rounds - 1 - i);
    const uint64_t key =
        oracle.eval_u64(encode_u64(key_tag, level, round, 0, payload_w)) >>
        (n - w);
    const uint64_t swapped = value ^ key;
    const uint64_t canonical = std::max(value, swapped);
    const bool swap =
        (oracle.eval_u64(
             encode_u64(swap_tag, level, round, canonical, payload_w)) >>
         (n - 1)) &
        1;
    if (swap) value = swapped;
  }
  return value;
}

uint64_t feistel_u64(const FpcSpec& spec, const OracleFunction& oracle,
                     uint64_t x, bool forward) {
  const size_t o = spec.domain_bits;
  const size_t h = o / 2;
  const uint64_t half_mask = (uint64_t{1} << h) - 1;
  const uint32_t rounds = spec.rounds[0];
  uint64_t left = x >> h;
  uint64_t right = x & half_mask;
  if (forward) {
    for (uint32_t i = 0; i < rounds; ++i) {
      const uint64_t f =
          oracle.eval_u64(encode_u64(kTagFeistelRound, 0,
                                     static_cast<uint16_t>(i), right, o)) >>
          (o - h);
      const uint64_t next_right = left ^ f;
      left = right;
      right = next_right;
    }
  } else {
    for (uint32_t i = rounds; i-- > 0;) {
      const uint64_t f =
          oracle.eval_u64(encode_u64(kTagFeistelRound, 0,
                                     static_cast<uint16_t>(i), left, o)) >>
          (o - h);
      const uint64_t prev_left = right ^ f;
      right = left;
      left = prev_left;
    }
  }
  return (left << h) | right;
}

uint64_t sometimes_recurse_forward_u64(const FpcSpec& spec,
                                       const OracleFunction& oracle,
                                       uint64_t value) {
  const size_t o = spec.domain_bits;
  for (size_t level = 0;; ++level) {
    const size_t w = o - level;
    value = sn_pass_u64(oracle, kTagSrRoundKey, kTagSrSwapBit,
                        static_cast<uint8_t>(level), spec.rounds[level], o, w,
                        value, /*forward=*/true);
    if (w == 1 || ((value >> (w - 1)) & 1)) break;
    // stripping the zero top bit is a numeric no-op
  }
  return value;
}

uint64_t sometimes_recurse_inverse_u64(const FpcSpec& spec,
                                       const OracleFunction& oracle,
                                       uint64_t y) {
  const size_t o = spec.domain_bits;
  size_t z = 0;
  while (z < o && !((y >> (o - 1 - z)) & 1)) ++z;
  const size_t term = z >= o - 1 ? o - 1 : z;
  uint64_t value = y;
  for (size_t level = term + 1; level-- > 0;) {
    value = sn_pass_u64(oracle, kTagSrRoundKey, kTagSrSwapBit,
                        static_cast<uint8_t>(level), spec.rounds[level], o,
                        o - level, value, /*forward=*/false);
  }
  return value;
}

uint64_t fpc_apply_u64(const FpcSpec& spec, const OracleFunction& oracle,
                       uint64_t v, bool forward) {
  switch (spec.kind) {
    case FpcKind::kFeistel:
      return feistel_u64(spec, oracle, v, forward);
    case FpcKind::kSwapOrNot:
      return sn_pass_u64(oracle, kTagSnRoundKey, kTagSnSwapBit, 0,
                         spec.rounds[0], payload_width(spec.domain_bits),
                         spec.domain_bits, v, forward);
    case FpcKind::kSometimesRecurse:
      return forward ? sometimes_recurse_forward_u64(spec, oracle, v)
                     : sometimes_recurse_inverse_u64(spec, oracle, v);
  }
  throw std::invalid_argument("fpc: unknown kind");
}

}  // namespace

Bits encode_query(uint8_t tag, uint8_t level, uint16_t round,
                  const Bits& payload, size_t payload_w) {
  const uint64_t header =
      (uint64_t{tag} << 24) | (uint64_t{level} << 16) | round;
  return Bits::from_u64(32, header).concat(payload.zero_extend(payload_w));
}

FpcSpec FpcSpec::with_default_rounds(FpcKind kind, size_t o, size_t lambda) {
  FpcSpec spec;
  spec.kind = kind;
  spec.domain_bits = o;
  spec.lambda = lambda;
  switch (kind) {
    case FpcKind::kFeistel:
      spec.rounds = {4};
      break;
    case FpcKind::kSwapOrNot:
      spec.rounds = {static_cast<uint32_t>(8 * o + 8)};
      break;
    case FpcKind::kSometimesRecurse:
      for (size_t j = 0; j < o; ++j) {
        spec.rounds.push_back(static_cast<uint32_t>(8 * (o - j) + 8));
      }
      break;
  }
  spec.validate();
  return spec;
}

OracleSignature FpcSpec::oracle_signature() const {
  return {32 + payload_width(domain_bits), payload_width(domain_bits)};
}

void FpcSpec::validate() const {
  validate_lambda(lambda);
  if (domain_bits < 1 || domain_bits > kMaxDomainBits) {
    throw std::invalid_argument("FpcSpec: domain bits out of range");
  }
  if (kind == FpcKind::kFeistel && domain_bits % 2 != 0) {
    throw std::domain_error("FpcSpec: Feistel requires an even domain width");
  }
  const size_t expected =
      kind == FpcKind::kSometimesRecurse ? domain_bits : 1;
  if (kind == FpcKind::kSometimesRecurse && domain_bits > 255) {
    throw std::invalid_argument("FpcSpec: sometimes-recurse limited to o <= 255");
  }
  if (rounds.size() != expected) {
    throw std::invalid_argument("FpcSpec: round schedule size mismatch");
  }
  for (uint32_t r : rounds) {
    if (r < 1 || r > kMaxRounds) {
      throw std::invalid_argument("FpcSpec: rounds out of range");
    }
  }
}

Bits fpc_forward(const FpcSpec& spec, const OracleFunction& oracle,
                 const Bits& x) {
  spec.validate();
  check_signature(spec, oracle);
  if (x.width() != spec.domain_bits) {
    throw std::invalid_argument("fpc_forward: input width != domain bits");
  }
  if (spec.oracle_signature().m <= 64) {
    return Bits::from_u64(spec.domain_bits,
                          fpc_apply_u64(spec, oracle, x.to_u64(), true));
  }
  switch (spec.kind) {
    case FpcKind::kFeistel:
      return feistel_apply(spec, oracle, x, /*forward=*/true);
    case FpcKind::kSwapOrNot:
      return swap_or_not_apply(spec, oracle, x, /*forward=*/true);
    case FpcKind::kSometimesRecurse:
      return sometimes_recurse_forward(spec, oracle, x);
  }
  throw std::invalid_argument("fpc_forward: unknown kind");
}

Bits fpc_inverse(const FpcSpec& spec, const OracleFunction& oracle,
                 const Bits& y) {
  spec.validate();
  check_signature(spec, oracle);
  if (y.width() != spec.domain_bits) {
    throw std::invalid_argument("fpc_inverse: input width != domain bits");
  }
  if (spec.oracle_signature().m <= 64) {
    return Bits::from_u64(spec.domain_bits,
                          fpc_apply_u64(spec, oracle, y.to_u64(), false));
  }
  switch (spec.kind) {
    case FpcKind::kFeistel:
      return feistel_apply(spec, oracle, y, /*forward=*/false);
    case FpcKind::kSwapOrNot:
      return swap_or_not_apply(spec, oracle, y, /*forward=*/false);
    case FpcKind::kSometimesRecurse:
      return sometimes_recurse_inverse(spec, oracle, y);
  }
  throw std::invalid_argument("fpc_inverse: unknown kind");
}

std::pair<Bits, Bits> feistel_round(const Bits& left, const Bits& right,
                                    const Bits& f_out) {
  if (left.width() != right.width() || f_out.width() != left.width()) {
    throw std::invalid_argument("feistel_round: width mismatch");
  }
  return {right, left ^ f_out};
}

Bits swap_or_not_round(const Bits& x, const Bits& round_key,
                       const std::function<bool(const Bits&)>& swap_bit) {
  if (round_key.width() != x.width()) {
    throw std::invalid_argument("swap_or_not_round: key width mismatch");
  }
  Bits swapped = x ^ round_key;
  const Bits& canonical = x < swapped ? swapped : x;
  return swap_bit(canonical) ? swapped : x;
}

uint64_t expected_query_count(const FpcSpec& spec, const Bits& output) {
  spec.validate();
  switch (spec.kind) {
    case FpcKind::kFeistel:
      return spec.rounds[0];
    case FpcKind::kSwapOrNot:
      return 2ull * spec.rounds[0];
    case FpcKind::kSometimesRecurse: {
      const size_t term = sr_termination_level(output);
      uint64_t total = 0;
      for (size_t j = 0; j <= term; ++j) total += 2ull * spec.rounds[j];
      return total;
    }
  }
  throw std::invalid_argument("expected_query_count: unknown kind");
}

}  // namespace qsprp
