#include <stdexcept>
#include "doctest.h"
#include "qsprp/fpc.hpp"

using namespace qsprp;

namespace {

std::unique_ptr<OracleFunction> zero_oracle(const FpcSpec& spec) {
  OracleSignature sig = spec.oracle_signature();
  return std::make_unique<ConstantOracle>(sig.m, Bits(sig.n));
}

std::unique_ptr<OracleFunction> alternating_oracle(const FpcSpec& spec) {
  OracleSignature sig = spec.oracle_signature();
  Bits value(sig.n);
  for (size_t i = 0; i < sig.n; i += 2) value.set_bit(i, true);
  return std::make_unique<ConstantOracle>(sig.m, value);
}

}  // namespace

TEST_CASE("feistel round formula") {
  auto [l1, r1] = feistel_round(Bits::from_u64(2, 0b01), Bits::from_u64(2, 0b10),
                                Bits(2));
  CHECK(l1.to_u64() == 0b10);
  CHECK(r1.to_u64() == 0b01);
  auto [l2, r2] = feistel_round(Bits::from_u64(2, 0b01), Bits::from_u64(2, 0b10),
                                Bits::from_u64(2, 0b11));
  CHECK(l2.to_u64() == 0b10);
  CHECK(r2.to_u64() == 0b10);
  CHECK_THROWS_AS(feistel_round(Bits(2), Bits(3), Bits(2)),
                  std::invalid_argument);
}

TEST_CASE("four zero rounds cancel") {
  FpcSpec spec = FpcSpec::with_default_rounds(FpcKind::kFeistel, 4, 64);
  auto oracle = zero_oracle(spec);
  CHECK(fpc_forward(spec, *oracle, Bits::from_u64(4, 0b0110)).to_u64() ==
        0b0110);
}

TEST_CASE("feistel network matches a straight-line reference") {
  FpcSpec spec = FpcSpec::with_default_rounds(FpcKind::kFeistel, 8, 64);
  RandomOracle oracle(spec.oracle_signature().m, spec.oracle_signature().n, 99);
  for (uint64_t x = 0; x < 256; ++x) {
    // Reference: unrolled 4 rounds straight from the definition.
    uint64_t left = x >> 4, right = x & 0xf;
    for (uint16_t round = 0; round < 4; ++round) {
      const uint64_t f =
          oracle
              .eval(encode_query(kTagFeistelRound, 0, round,
                                 Bits::from_u64(4, right).zero_extend(8), 8))
              .prefix(4)
              .to_u64();
      const uint64_t next_right = left ^ f;
      left = right;
      right = next_right;
    }
    CHECK(fpc_forward(spec, oracle, Bits::from_u64(8, x)).to_u64() ==
          ((left << 4) | right));
  }
}

TEST_CASE("swap-or-not round behavior") {
  auto always = [](const Bits&) { return true; };
  auto never = [](const Bits&) { return false; };
  // K = 0 leaves the input alone for any swap function.
  for (uint64_t x = 0; x < 4; ++x) {
    CHECK(swap_or_not_round(Bits::from_u64(2, x), Bits(2), always).to_u64() == x);
    CHECK(swap_or_not_round(Bits::from_u64(2, x), Bits(2), never).to_u64() == x);
  }
  // Constant-1 swap bit with K = 11 is the complement map.
  for (uint64_t x = 0; x < 4; ++x) {
    CHECK(swap_or_not_round(Bits::from_u64(2, x), Bits::from_u64(2, 3), always)
              .to_u64() == (x ^ 3));
  }
}

TEST_CASE("swap-or-not round is an involution, exhaustive o <= 6") {
  RandomSource rng(21);
  for (size_t o = 1; o <= 6; ++o) {
    for (int trial = 0; trial < 10; ++trial) {
      Bits key = rng.bits(o);
      HashedOracle swap_fn(o, 1, rng.next_u64());
      auto swap_bit = [&](const Bits& c) { return swap_fn.eval(c).bit(0); };
      for (uint64_t x = 0; x < (uint64_t{1} << o); ++x) {
        Bits input = Bits::from_u64(o, x);
        Bits once = swap_or_not_round(input, key, swap_bit);
        CHECK(swap_or_not_round(once, key, swap_bit) == input);
      }
    }
  }
}

TEST_CASE("constant-zero oracle: swap-or-not is the identity") {
  FpcSpec spec = FpcSpec::with_default_rounds(FpcKind::kSwapOrNot, 5, 64);
  auto oracle = zero_oracle(spec);
  for (uint64_t x = 0; x < 32; ++x) {
    CHECK(fpc_forward(spec, *oracle, Bits::from_u64(5, x)).to_u64() == x);
  }
}

TEST_CASE("single swap-or-not round is self-inverse as a forward map") {
  FpcSpec spec = FpcSpec::with_default_rounds(FpcKind::kSwapOrNot, 4, 64);
  spec.rounds = {1};
  RandomOracle oracle(spec.oracle_signature().m, spec.oracle_signature().n, 5);
  for (uint64_t x = 0; x < 16; ++x) {
    Bits input = Bits::from_u64(4, x);
    Bits once = fpc_forward(spec, oracle, input);
    CHECK(fpc_forward(spec, oracle, once) == input);
  }
}

TEST_CASE("sometimes-recurse base cases") {
  // o = 1 is a bijection on {0, 1} whatever the oracle says.
  for (uint64_t seed : {1u, 2u, 3u}) {
    FpcSpec spec = FpcSpec::with_default_rounds(FpcKind::kSometimesRecurse, 1, 64);
    RandomOracle oracle(spec.oracle_signature().m, spec.oracle_signature().n,
                        seed);
    Bits y0 = fpc_forward(spec, oracle, Bits::from_u64(1, 0));
    Bits y1 = fpc_forward(spec, oracle, Bits::from_u64(1, 1));
    CHECK(y0 != y1);
  }
  // Constant-zero oracle descends all the way: 000 -> 000.
  FpcSpec spec = FpcSpec::with_default_rounds(FpcKind::kSometimesRecurse, 3, 64);
  auto oracle = zero_oracle(spec);
  CHECK(fpc_forward(spec, *oracle, Bits(3)).to_u64() == 0);
}

TEST_CASE("sometimes-recurse is bijective at o = 3 with a random oracle") {
  FpcSpec spec = FpcSpec::with_default_rounds(FpcKind::kSometimesRecurse, 3, 64);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    RandomOracle oracle(spec.oracle_signature().m, spec.oracle_signature().n,
                        seed);
    std::vector<bool> seen(8, false);
    for (uint64_t x = 0; x < 8; ++x) {
      Bits y = fpc_forward(spec, oracle, Bits::from_u64(3, x));
      CHECK(!seen[y.to_u64()]);
      seen[y.to_u64()] = true;
      CHECK(fpc_inverse(spec, oracle, y).to_u64() == x);
    }
  }
}

TEST_CASE("exhaustive inverse table equals the inverted forward table, o = 4") {
  RandomSource rng(22);
  for (FpcKind kind : {FpcKind::kFeistel, FpcKind::kSwapOrNot,
                       FpcKind::kSometimesRecurse}) {
    FpcSpec spec = FpcSpec::with_default_rounds(kind, 4, 64);
    RandomOracle oracle(spec.oracle_signature().m, spec.oracle_signature().n,
                        rng.next_u64());
    uint64_t forward[16], inverse[16];
    for (uint64_t x = 0; x < 16; ++x) {
      forward[x] = fpc_forward(spec, oracle, Bits::from_u64(4, x)).to_u64();
      inverse[x] = fpc_inverse(spec, oracle, Bits::from_u64(4, x)).to_u64();
    }
    for (uint64_t x = 0; x < 16; ++x) CHECK(inverse[forward[x]] == x);
  }
}

TEST_CASE("permutation property holds for adversarial oracles") {
  RandomSource rng(23);
  for (FpcKind kind : {FpcKind::kFeistel, FpcKind::kSwapOrNot,
                       FpcKind::kSometimesRecurse}) {
    for (size_t o : {2u, 5u, 8u}) {
      if (kind == FpcKind::kFeistel && o % 2 != 0) continue;
      FpcSpec spec = FpcSpec::with_default_rounds(kind, o, 64);
      OracleSignature sig = spec.oracle_signature();
      std::vector<std::unique_ptr<OracleFunction>> oracles;
      oracles.push_back(zero_oracle(spec));
      oracles.push_back(alternating_oracle(spec));
      oracles.push_back(
          std::make_unique<RandomOracle>(sig.m, sig.n, rng.next_u64()));
      for (const auto& oracle : oracles) {
        std::vector<bool> seen(size_t{1} << o, false);
        for (uint64_t x = 0; x < (uint64_t{1} << o); ++x) {
          Bits y = fpc_forward(spec, *oracle, Bits::from_u64(o, x));
          CHECK(!seen[y.to_u64()]);
          seen[y.to_u64()] = true;
          CHECK(fpc_inverse(spec, *oracle, y).to_u64() == x);
        }
      }
    }
  }
}

TEST_CASE("round trips at sampled points for larger domains") {
  RandomSource rng(24);
  for (FpcKind kind : {FpcKind::kFeistel, FpcKind::kSwapOrNot,
                       FpcKind::kSometimesRecurse}) {
    for (size_t o : {16u, 32u, 64u}) {
      FpcSpec spec = FpcSpec::with_default_rounds(kind, o, 64);
      HashedOracle oracle(spec.oracle_signature().m, spec.oracle_signature().n,
                          rng.next_u64());
      for (int i = 0; i < 200; ++i) {
        Bits x = rng.bits(o);
        CHECK(fpc_inverse(spec, oracle, fpc_forward(spec, oracle, x)) == x);
      }
    }
  }
}

TEST_CASE("query accounting matches the closed forms") {
  RandomSource rng(25);
  for (FpcKind kind : {FpcKind::kFeistel, FpcKind::kSwapOrNot,
                       FpcKind::kSometimesRecurse}) {
    for (size_t o : {2u, 4u, 6u}) {
      FpcSpec spec = FpcSpec::with_default_rounds(kind, o, 64);
      HashedOracle inner(spec.oracle_signature().m, spec.oracle_signature().n,
                         rng.next_u64());
      CountingOracle counted(inner);
      for (uint64_t x = 0; x < (uint64_t{1} << o); ++x) {
        counted.reset();
        Bits y = fpc_forward(spec, counted, Bits::from_u64(o, x));
        CHECK(counted.count() == expected_query_count(spec, y));
      }
    }
  }
}

TEST_CASE("spec and argument validation") {
  FpcSpec odd = FpcSpec::with_default_rounds(FpcKind::kSwapOrNot, 3, 64);
  odd.kind = FpcKind::kFeistel;
  CHECK_THROWS_AS(odd.validate(), std::domain_error);

  FpcSpec spec = FpcSpec::with_default_rounds(FpcKind::kSwapOrNot, 4, 64);
  RandomOracle wrong(10, 4, 1);
  CHECK_THROWS_AS(fpc_forward(spec, wrong, Bits(4)), std::invalid_argument);
  RandomOracle right(spec.oracle_signature().m, spec.oracle_signature().n, 1);
  CHECK_THROWS_AS(fpc_forward(spec, right, Bits(5)), std::invalid_argument);
}

TEST_CASE("query encoding is injective across header fields") {
  Bits a = encode_query(kTagSnRoundKey, 0, 1, Bits(4), 4);
  Bits b = encode_query(kTagSnRoundKey, 0, 2, Bits(4), 4);
  Bits c = encode_query(kTagSnSwapBit, 0, 1, Bits(4), 4);
  Bits d = encode_query(kTagSnRoundKey, 1, 1, Bits(4), 4);
  CHECK(a.width() == 36);
  CHECK(a != b);
  CHECK(a != c);
  CHECK(a != d);
  // Layout is pinned bit-exactly: tag 0x02, level 0, round 1, payload 0000.
  CHECK(encode_query(kTagSnRoundKey, 0, 1, Bits(4), 4).to_hex() == "020000010");
}
