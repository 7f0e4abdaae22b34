#include <stdexcept>
#include <fstream>

#include "doctest.h"
#include "qsprp/harness.hpp"
#include "qsprp/prg.hpp"

using namespace qsprp;

namespace {
const PrgInstance kDup8{PrgKind::kDupDegenerate, 8};
const PrgInstance kSecure128{PrgKind::kSecure, 128};
}  // namespace

TEST_CASE("duplicating generator is the identity pair") {
  Bits seed = Bits::from_hex(8, "ab");
  auto [left, right] = prg_expand(kDup8, seed);
  CHECK(left == seed);
  CHECK(right == seed);
  CHECK(prg_stream(kDup8, seed, 16).to_hex() == "abab");
}

TEST_CASE("secure expansion is deterministic") {
  Bits seed(128);  // all zero
  auto a = prg_expand(kSecure128, seed);
  auto b = prg_expand(kSecure128, seed);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(a.first != a.second);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(prg_expand(kSecure128, Bits(64)), std::invalid_argument);
  CHECK_THROWS_AS(prg_stream(kSecure128, Bits(128), 0), std::invalid_argument);
  CHECK_THROWS_AS(prg_stream(PrgInstance{PrgKind::kSecure, 4}, Bits(4), 8),
                  std::invalid_argument);
}

TEST_CASE("prefix property for all nbits pairs up to 4*lambda") {
  for (PrgKind kind :
       {PrgKind::kSecure, PrgKind::kToyWeak, PrgKind::kDupDegenerate}) {
    PrgInstance g{kind, 8};
    Bits seed = Bits::from_hex(8, "5c");
    Bits longest = prg_stream(g, seed, 32);
    for (size_t n = 1; n <= 32; ++n) {
      CHECK(prg_stream(g, seed, n) == longest.prefix(n));
    }
  }
}

TEST_CASE("toy generator fails the monobit/chi2 battery, secure passes") {
  PrgInstance toy{PrgKind::kToyWeak, 16};
  PrgInstance secure{PrgKind::kSecure, 16};
  Bits seed = Bits::from_hex(16, "1234");
  const size_t nbits = 1 << 15;
  Bits toy_stream = prg_stream(toy, seed, nbits);
  Bits secure_stream = prg_stream(secure, seed, nbits);
  const double threshold = harness::chi2_quantile(0.999, 255);
  const bool toy_fails = std::abs(harness::monobit_zscore(toy_stream)) > 4.0 ||
                         harness::byte_chi2(toy_stream) > threshold;
  CHECK(toy_fails);
  CHECK(std::abs(harness::monobit_zscore(secure_stream)) < 4.0);
  CHECK(harness::byte_chi2(secure_stream) < threshold);
}

TEST_CASE("golden vectors pin the secure generator") {
  std::ifstream in(std::string(QSPRP_DATA_DIR) + "/prg_golden.txt");
  REQUIRE(in.good());
  std::string seed_hex, out_hex;
  int lines = 0;
  while (in >> seed_hex >> out_hex) {
    ++lines;
    Bits seed = Bits::from_hex(128, seed_hex);
    Bits expected = Bits::from_hex(4 * out_hex.size(), out_hex);
    CHECK(prg_stream(kSecure128, seed, expected.width()) == expected);
  }
  CHECK(lines >= 2);
}
