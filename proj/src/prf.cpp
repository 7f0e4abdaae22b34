#include "qsprp/prf.hpp"

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace qsprp {

void PrfParams::validate() const {
  validate_lambda(prg.lambda);
  if (n < 1) throw std::invalid_argument("PrfParams: n must be >= 1");
  if (m > kMaxPrfIoBits || n > kMaxPrfIoBits) {
    throw std::invalid_argument("PrfParams: m, n must be <= 2^16");
  }
}

Bits prf_eval(const PrfKey& key, const PrfParams& params, const Bits& x) {
  params.validate();
  if (key.k.width() != params.prg.lambda) {
    throw std::invalid_argument("prf_eval: key length != lambda");
  }
  if (x.width() != params.m) {
    throw std::invalid_argument("prf_eval: input length != m");
  }
  Bits s = key.k;
  for (size_t i = 0; i < params.m; ++i) {
    auto [left, right] = prg_expand(params.prg, s);
    s = x.bit(i) ? right : left;
  }
  return prg_stream(params.prg, s, params.n);
}

namespace {

// PRF-backed oracle with a node cache: seeds for already-walked input
// prefixes are kept, so queries sharing long prefixes (the converter's
// tag/level/round header) only descend the new suffix.
class PrfOracle : public OracleFunction {
 public:
  PrfOracle(const PrfKey& key, const PrfParams& params)
      : OracleFunction(params.m, params.n), key_(key), params_(params) {
    params_.validate();
    if (key_.k.width() != params_.prg.lambda) {
      throw std::invalid_argument("prf_as_oracle: key length != lambda");
    }
  }

 protected:
  Bits do_eval(const Bits& x) const override {
    std::lock_guard<std::mutex> lock(mu_);
    if (params_.m <= 64) return eval_narrow(x);
    return eval_wide(x);
  }

  // Queries cluster by their high bits (converters prefix a fixed header),
  // so the integer-path memo is paged: one map lookup picks the page, the
  // low bits index into it directly.
  uint64_t do_eval_u64(uint64_t xv) const override {
    std::lock_guard<std::mutex> lock(mu_);
    auto& page = out_pages_[xv >> kPageBits];
    if (!page) page = std::make_unique<OutPage>();
    const size_t off = xv & (kPageSize - 1);
    if (page->present[off >> 6] & (uint64_t{1} << (off & 63))) {
      return page->val[off];
    }
    const Bits* seed = walk_narrow(xv);
    const uint64_t y = prg_stream(params_.prg, *seed, params_.n).to_u64();
    page->val[off] = y;
    page->present[off >> 6] |= uint64_t{1} << (off & 63);
    return y;
  }

 private:
  // Inputs fit a machine word, so the memo and the per-depth node caches can
  // be keyed by integers instead of Bits.
  Bits eval_narrow(const Bits& x) const {
    const uint64_t xv = x.to_u64();
    auto it = memo_u64_.find(xv);
    if (it != memo_u64_.end()) return it->second;
    const Bits* seed = walk_narrow(xv);
    return memo_u64_.emplace(xv, prg_stream(params_.prg, *seed, params_.n))
        .first->second;
  }

  // GGM walk along the m-bit input xv, reusing and extending the per-depth
  // node caches. Returns the leaf seed (a stable reference into the cache).
  const Bits* walk_narrow(uint64_t xv) const {
    const size_t m = params_.m;
    if (nodes_u64_.empty()) nodes_u64_.resize(m + 1);
    size_t depth = m;
    const Bits* seed = &key_.k;
    for (; depth > 0; --depth) {
      auto cached = nodes_u64_[depth].find(xv >> (m - depth));
      if (cached != nodes_u64_[depth].end()) {
        seed = &cached->second;
        break;
      }
    }
    for (size_t i = depth; i < m; ++i) {
      auto [left, right] = prg_expand(params_.prg, *seed);
      const bool go_right = (xv >> (m - 1 - i)) & 1;
      seed = &nodes_u64_[i + 1]
                  .emplace(xv >> (m - i - 1),
                           go_right ? std::move(right) : std::move(left))
                  .first->second;
    }
    return seed;
  }

  Bits eval_wide(const Bits& x) const {
    auto it = memo_.find(x);
    if (it != memo_.end()) return it->second;

    // Find the deepest cached prefix, then walk down from there.
    size_t depth = x.width();
    Bits seed = key_.k;
    for (; depth > 0; --depth) {
      auto cached = nodes_.find(x.prefix(depth));
      if (cached != nodes_.end()) {
        seed = cached->second;
        break;
      }
    }
    for (size_t i = depth; i < x.width(); ++i) {
      auto [left, right] = prg_expand(params_.prg, seed);
      seed = x.bit(i) ? right : left;
      nodes_.emplace(x.prefix(i + 1), seed);
    }
    Bits y = prg_stream(params_.prg, seed, params_.n);
    memo_.emplace(x, y);
    return y;
  }

  PrfKey key_;
  PrfParams params_;
  mutable std::mutex mu_;
  mutable std::unordered_map<uint64_t, Bits> memo_u64_;
  mutable std::unordered_map<uint64_t, uint64_t> out_u64_;
  mutable std::vector<std::unordered_map<uint64_t, Bits>> nodes_u64_;
  mutable std::unordered_map<Bits, Bits> memo_;
  mutable std::unordered_map<Bits, Bits> nodes_;
};

class AdaptedOracle : public OracleFunction {
 public:
  AdaptedOracle(const PrfKey& key, const PrfParams& params, size_t m_small,
                size_t n_small, const Bits& pad)
      : OracleFunction(m_small, n_small),
        inner_(std::make_unique<PrfOracle>(key, params)),
        n_small_(n_small),
        pad_(pad) {}

 protected:
  Bits do_eval(const Bits& x) const override {
    return inner_->eval(pad_.concat(x)).prefix(n_small_);
  }

 private:
  std::unique_ptr<PrfOracle> inner_;
  size_t n_small_;
  Bits pad_;
};

}  // namespace

std::unique_ptr<OracleFunction> prf_as_oracle(const PrfKey& key,
                                              const PrfParams& params) {
  return std::make_unique<PrfOracle>(key, params);
}

std::unique_ptr<OracleFunction> prf_adapt(const PrfKey& key,
                                          const PrfParams& params,
                                          size_t m_small, size_t n_small,
                                          const Bits& pad) {
  params.validate();
  if (m_small > params.m || n_small > params.n || n_small == 0) {
    throw std::invalid_argument("prf_adapt: dimensions out of range");
  }
  if (pad.width() != params.m - m_small) {
    throw std::invalid_argument("prf_adapt: pad length != m - m_small");
  }
  return std::make_unique<AdaptedOracle>(key, params, m_small, n_small, pad);
}

}  // namespace qsprp
