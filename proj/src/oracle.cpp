#include "qsprp/oracle.hpp"

#include <stdexcept>

namespace qsprp {

OracleFunction::OracleFunction(size_t m, size_t n) : m_(m), n_(n) {
  if (n == 0) throw std::invalid_argument("oracle output width must be >= 1");
}

Bits OracleFunction::eval(const Bits& x) const {
  if (x.width() != m_) {
    throw std::invalid_argument("oracle query width mismatch");
  }
  Bits y = do_eval(x);
  if (y.width() != n_) {
    throw std::logic_error("oracle backing produced wrong output width");
  }
  return y;
}

uint64_t OracleFunction::eval_u64(uint64_t x) const {
  if (m_ > 64 || n_ > 64) {
    throw std::invalid_argument("oracle eval_u64 requires m, n <= 64");
  }
  if (m_ < 64 && (x >> m_) != 0) {
    throw std::invalid_argument("oracle query width mismatch");
  }
  return do_eval_u64(x);
}

uint64_t OracleFunction::do_eval_u64(uint64_t x) const {
  return eval(Bits::from_u64(m_, x)).to_u64();
}

ConstantOracle::ConstantOracle(size_t m, const Bits& value)
    : OracleFunction(m, value.width()), value_(value) {}

RandomOracle::RandomOracle(size_t m, size_t n, uint64_t seed)
    : OracleFunction(m, n), rng_(seed) {}

Bits RandomOracle::do_eval(const Bits& x) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = memo_.find(x);
  if (it != memo_.end()) return it->second;
  Bits y = rng_.bits(output_bits());
  memo_.emplace(x, y);
  return y;
}

TableOracle::TableOracle(size_t m, size_t n, std::vector<Bits> table)
    : OracleFunction(m, n), table_(std::move(table)) {
  if (m > 24) throw std::invalid_argument("TableOracle: domain too large");
  if (table_.size() != (size_t{1} << m)) {
    throw std::invalid_argument("TableOracle: table size != 2^m");
  }
  for (const Bits& y : table_) {
    if (y.width() != n) {
      throw std::invalid_argument("TableOracle: entry width mismatch");
    }
  }
}

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Bits HashedOracle::do_eval(const Bits& x) const {
  uint64_t h = splitmix64(key_ ^ 0x6a09e667f3bcc908ULL);
  for (uint8_t b : x.bytes()) h = splitmix64(h ^ b);
  h = splitmix64(h ^ x.width());
  Bits out(output_bits());
  uint64_t word = 0;
  for (size_t i = 0; i < output_bits(); ++i) {
    if (i % 64 == 0) {
      word = splitmix64(h ^ (i / 64 + 1));
    }
    out.set_bit(i, (word >> (i % 64)) & 1);
  }
  return out;
}

// Allocation-free replay of do_eval for m, n <= 64: hashes the same byte
// encoding and reads the output word in the same bit order.
uint64_t HashedOracle::do_eval_u64(uint64_t x) const {
  const size_t m = input_bits();
  const size_t n = output_bits();
  const size_t nbytes = (m + 7) / 8;
  const uint64_t shifted = nbytes == 0 ? 0 : x << (nbytes * 8 - m);
  uint64_t h = splitmix64(key_ ^ 0x6a09e667f3bcc908ULL);
  for (size_t i = 0; i < nbytes; ++i) {
    h = splitmix64(h ^ static_cast<uint8_t>(shifted >> (8 * (nbytes - 1 - i))));
  }
  h = splitmix64(h ^ m);
  const uint64_t word = splitmix64(h ^ 1);
  uint64_t out = 0;
  for (size_t i = 0; i < n; ++i) {
    out = (out << 1) | ((word >> i) & 1);
  }
  return out;
}

}  // namespace qsprp
