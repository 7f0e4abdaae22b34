#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "qsprp/bits.hpp"

namespace qsprp {

// A deterministic total function {0,1}^m -> {0,1}^n: the object the
// converters query. Instances must answer the same input with the same
// output for their whole lifetime.
class OracleFunction {
 public:
  virtual ~OracleFunction() = default;

  size_t input_bits() const { return m_; }
  size_t output_bits() const { return n_; }

  Bits eval(const Bits& x) const;
  // Integer fast path for m, n <= 64. Agrees bit-for-bit with eval(): the
  // default implementation routes through it, and overrides must preserve
  // that equality.
  uint64_t eval_u64(uint64_t x) const;

 protected:
  OracleFunction(size_t m, size_t n);
  virtual Bits do_eval(const Bits& x) const = 0;
  virtual uint64_t do_eval_u64(uint64_t x) const;

 private:
  size_t m_;
  size_t n_;
};

class ConstantOracle : public OracleFunction {
 public:
  ConstantOracle(size_t m, const Bits& value);

 protected:
  Bits do_eval(const Bits&) const override { return value_; }

 private:
  Bits value_;
};

// Truly random function sampled lazily: each fresh input gets independent
// uniform output bits, memoized so repeats agree. Thread-safe.
class RandomOracle : public OracleFunction {
 public:
  RandomOracle(size_t m, size_t n, uint64_t seed);

 protected:
  Bits do_eval(const Bits& x) const override;

 private:
  mutable std::mutex mu_;
  mutable RandomSource rng_;
  mutable std::unordered_map<Bits, Bits> memo_;
};

// Explicit truth table over a small domain (m <= 24).
class TableOracle : public OracleFunction {
 public:
  TableOracle(size_t m, size_t n, std::vector<Bits> table);

 protected:
  Bits do_eval(const Bits& x) const override { return table_[x.to_u64()]; }

 private:
  std::vector<Bits> table_;
};

// Arbitrary user-supplied deterministic function.
class CallbackOracle : public OracleFunction {
 public:
  CallbackOracle(size_t m, size_t n, std::function<Bits(const Bits&)> fn)
      : OracleFunction(m, n), fn_(std::move(fn)) {}

 protected:
  Bits do_eval(const Bits& x) const override { return fn_(x); }

 private:
  std::function<Bits(const Bits&)> fn_;
};

// Counts queries passing through to an underlying oracle; used by the
// query-budget tests and the experiment harness.
class CountingOracle : public OracleFunction {
 public:
  explicit CountingOracle(const OracleFunction& inner)
      : OracleFunction(inner.input_bits(), inner.output_bits()), inner_(inner) {}

  uint64_t count() const { return count_; }
  void reset() { count_ = 0; }

 protected:
  Bits do_eval(const Bits& x) const override {
    ++count_;
    return inner_.eval(x);
  }
  uint64_t do_eval_u64(uint64_t x) const override {
    ++count_;
    return inner_.eval_u64(x);
  }

 private:
  const OracleFunction& inner_;
  mutable uint64_t count_ = 0;
};

// Stateless random-looking oracle: output bits come from a keyed mix of the
// input. Cheap stand-in for RandomOracle where only determinism and
// per-instance arbitrariness matter (bijectivity sweeps at larger domains).
class HashedOracle : public OracleFunction {
 public:
  HashedOracle(size_t m, size_t n, uint64_t key)
      : OracleFunction(m, n), key_(key) {}

 protected:
  Bits do_eval(const Bits& x) const override;
  uint64_t do_eval_u64(uint64_t x) const override;

 private:
  uint64_t key_;
};

}  // namespace qsprp
