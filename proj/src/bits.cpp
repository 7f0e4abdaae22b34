#include "qsprp/bits.hpp"

#include <cstring>
#include <stdexcept>

namespace qsprp {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

constexpr char kHexDigits[] = "0123456789abcdef";

}  // namespace

void Bits::mask_tail() {
  if (width_ % 8 != 0 && !bytes_.empty()) {
    bytes_.back() &= static_cast<uint8_t>(0xff << (8 - width_ % 8));
  }
}

Bits Bits::from_u64(size_t width, uint64_t value) {
  if (width > 64) throw std::invalid_argument("Bits::from_u64: width > 64");
  if (width < 64 && (value >> width) != 0) {
    throw std::invalid_argument("Bits::from_u64: value does not fit width");
  }
  Bits b(width);
  const size_t nbytes = b.bytes_.size();
  const uint64_t shifted = value << (nbytes * 8 - width);
  for (size_t i = 0; i < nbytes; ++i) {
    b.bytes_[i] = static_cast<uint8_t>(shifted >> (8 * (nbytes - 1 - i)));
  }
  return b;
}

Bits Bits::from_hex(size_t width, std::string_view hex) {
  const size_t digits = (width + 3) / 4;
  if (hex.size() != digits) {
    throw std::invalid_argument("Bits::from_hex: expected " +
                                std::to_string(digits) + " hex digits");
  }
  const size_t pad = 4 * digits - width;
  Bits b(width);
  for (size_t j = 0; j < digits; ++j) {
    int v = hex_digit(hex[j]);
    if (v < 0) throw std::invalid_argument("Bits::from_hex: bad hex digit");
    for (size_t k = 0; k < 4; ++k) {
      const size_t pos = 4 * j + k;  // position including the implicit pad
      const bool bit = (v >> (3 - k)) & 1;
      if (pos < pad) {
        if (bit) {
          throw std::invalid_argument("Bits::from_hex: value exceeds width");
        }
        continue;
      }
      b.set_bit(pos - pad, bit);
    }
  }
  return b;
}

Bits Bits::from_bytes(size_t width, const uint8_t* data, size_t len) {
  if (len != (width + 7) / 8) {
    throw std::invalid_argument("Bits::from_bytes: length mismatch");
  }
  Bits b(width);
  std::memcpy(b.bytes_.data(), data, len);
  b.mask_tail();
  return b;
}

bool Bits::bit(size_t i) const {
  if (i >= width_) throw std::out_of_range("Bits::bit: index out of range");
  return (bytes_[i >> 3] >> (7 - (i & 7))) & 1;
}

void Bits::set_bit(size_t i, bool v) {
  if (i >= width_) throw std::out_of_range("Bits::set_bit: index out of range");
  const uint8_t mask = static_cast<uint8_t>(0x80 >> (i & 7));
  if (v) {
    bytes_[i >> 3] |= mask;
  } else {
    bytes_[i >> 3] &= static_cast<uint8_t>(~mask);
  }
}

uint64_t Bits::to_u64() const {
  if (width_ > 64) throw std::invalid_argument("Bits::to_u64: width > 64");
  uint64_t v = 0;
  for (uint8_t byte : bytes_) v = (v << 8) | byte;
  return width_ == 0 ? 0 : v >> (bytes_.size() * 8 - width_);
}

std::string Bits::to_hex() const {
  const size_t digits = (width_ + 3) / 4;
  const size_t pad = 4 * digits - width_;
  std::string out(digits, '0');
  for (size_t j = 0; j < digits; ++j) {
    int v = 0;
    for (size_t k = 0; k < 4; ++k) {
      const size_t pos = 4 * j + k;
      v <<= 1;
      if (pos >= pad && bit(pos - pad)) v |= 1;
    }
    out[j] = kHexDigits[v];
  }
  return out;
}

Bits Bits::slice(size_t pos, size_t len) const {
  if (pos + len > width_) {
    throw std::out_of_range("Bits::slice: range out of bounds");
  }
  Bits out(len);
  const size_t shift = pos % 8;
  const size_t base = pos / 8;
  for (size_t j = 0; j < out.bytes_.size(); ++j) {
    uint8_t v = static_cast<uint8_t>(bytes_[base + j] << shift);
    if (shift != 0 && base + j + 1 < bytes_.size()) {
      v |= bytes_[base + j + 1] >> (8 - shift);
    }
    out.bytes_[j] = v;
  }
  out.mask_tail();
  return out;
}

Bits Bits::concat(const Bits& other) const {
  Bits out(width_ + other.width_);
  std::memcpy(out.bytes_.data(), bytes_.data(), bytes_.size());
  const size_t shift = width_ % 8;
  const size_t base = width_ / 8;
  if (shift == 0) {
    std::memcpy(out.bytes_.data() + base, other.bytes_.data(),
                other.bytes_.size());
  } else {
    for (size_t j = 0; j < other.bytes_.size(); ++j) {
      out.bytes_[base + j] |= other.bytes_[j] >> shift;
      if (base + j + 1 < out.bytes_.size()) {
        out.bytes_[base + j + 1] |=
            static_cast<uint8_t>(other.bytes_[j] << (8 - shift));
      }
    }
  }
  out.mask_tail();
  return out;
}

Bits Bits::zero_extend(size_t new_width) const {
  if (new_width < width_) {
    throw std::invalid_argument("Bits::zero_extend: narrower than value");
  }
  return Bits(new_width - width_).concat(*this);
}

Bits Bits::operator^(const Bits& other) const {
  if (width_ != other.width_) {
    throw std::invalid_argument("Bits::operator^: width mismatch");
  }
  Bits out = *this;
  for (size_t i = 0; i < bytes_.size(); ++i) out.bytes_[i] ^= other.bytes_[i];
  return out;
}

bool Bits::operator<(const Bits& other) const {
  if (width_ != other.width_) {
    throw std::invalid_argument("Bits::operator<: width mismatch");
  }
  // Left-aligned big-endian storage makes lexicographic order numeric.
  return bytes_ < other.bytes_;
}

uint64_t RandomSource::below(uint64_t n) {
  if (n == 0) throw std::invalid_argument("RandomSource::below: n == 0");
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

double RandomSource::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Bits RandomSource::bits(size_t width) {
  Bits b(width);
  for (size_t i = 0; i < width; i += 64) {
    uint64_t word = next_u64();
    for (size_t j = i; j < width && j < i + 64; ++j) {
      b.set_bit(j, (word >> (j - i)) & 1);
    }
  }
  return b;
}

RandomSource RandomSource::fork() { return RandomSource(next_u64()); }

}  // namespace qsprp
