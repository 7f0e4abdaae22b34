#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace qsprp {

// Fixed-width bit string. Bit 0 is the most significant bit; storage is
// left-aligned (bit i lives in byte i/8 at mask 0x80 >> (i%8)) and unused
// low-order bits of the last byte are kept zero.
class Bits {
 public:
  Bits() = default;
  explicit Bits(size_t width) : width_(width), bytes_((width + 7) / 8, 0) {}

  // Value is right-aligned: from_u64(3, 5) is the bit string 101.
  // Values wider than `width` are rejected.
  static Bits from_u64(size_t width, uint64_t value);
  // Parses exactly ceil(width/4) lowercase/uppercase hex digits.
  static Bits from_hex(size_t width, std::string_view hex);
  static Bits from_bytes(size_t width, const uint8_t* data, size_t len);

  size_t width() const { return width_; }
  bool empty() const { return width_ == 0; }

  bool bit(size_t i) const;
  void set_bit(size_t i, bool v);

  uint64_t to_u64() const;  // width must be <= 64
  std::string to_hex() const;

  Bits prefix(size_t n) const { return slice(0, n); }
  Bits slice(size_t pos, size_t len) const;
  Bits concat(const Bits& other) const;
  // Same value, left-padded with zeros to the given width.
  Bits zero_extend(size_t new_width) const;

  Bits operator^(const Bits& other) const;
  bool operator==(const Bits& other) const {
    return width_ == other.width_ && bytes_ == other.bytes_;
  }
  bool operator!=(const Bits& other) const { return !(*this == other); }
  // Unsigned comparison; widths must match.
  bool operator<(const Bits& other) const;

  const std::vector<uint8_t>& bytes() const { return bytes_; }

 private:
  size_t width_ = 0;
  std::vector<uint8_t> bytes_;

  void mask_tail();
};

// Deterministic seeded randomness used for key generation, random oracles,
// permutation sampling and measurement outcomes.
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }
  // Unbiased value in [0, n).
  uint64_t below(uint64_t n);
  bool coin() { return (next_u64() >> 63) != 0; }
  double uniform01();
  Bits bits(size_t width);
  // Derives an independent child source; used to fan out per-trial seeds.
  RandomSource fork();

 private:
  std::mt19937_64 gen_;
};

}  // namespace qsprp

template <>
struct std::hash<qsprp::Bits> {
  size_t operator()(const qsprp::Bits& b) const noexcept {
    uint64_t h = 1469598103934665603ULL ^ b.width();
    for (uint8_t byte : b.bytes()) {
      h ^= byte;
      h *= 1099511628211ULL;
    }
    return static_cast<size_t>(h);
  }
};
