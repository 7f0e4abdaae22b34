#include "qsprp/qsim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qsprp {
namespace qsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

uint64_t register_value(const StateVector& psi, Register reg, size_t index) {
  switch (reg) {
    case Register::kX:
      return index >> (psi.wy + psi.wz);
    case Register::kY:
      return (index >> psi.wz) & ((uint64_t{1} << psi.wy) - 1);
    case Register::kZ:
      return index & ((uint64_t{1} << psi.wz) - 1);
  }
  throw std::invalid_argument("bad register");
}

}  // namespace

StateVector StateVector::basis(int wx, int wy, int wz, uint64_t x, uint64_t y,
                               uint64_t z) {
  if (wx < 0 || wy < 0 || wz < 0 || wx + wy + wz > kMaxStateBits) {
    throw std::invalid_argument("StateVector: register widths out of range");
  }
  if ((wx < 64 && (x >> wx) != 0) || (wy < 64 && (y >> wy) != 0) ||
      (wz < 64 && (z >> wz) != 0)) {
    throw std::invalid_argument("StateVector: basis label out of range");
  }
  StateVector psi;
  psi.wx = wx;
  psi.wy = wy;
  psi.wz = wz;
  psi.amp.assign(size_t{1} << (wx + wy + wz), {0.0, 0.0});
  psi.amp[psi.index(x, y, z)] = {1.0, 0.0};
  return psi;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amp) s += std::norm(a);
  return std::sqrt(s);
}

int StateVector::register_width(Register r) const {
  switch (r) {
    case Register::kX:
      return wx;
    case Register::kY:
      return wy;
    case Register::kZ:
      return wz;
  }
  throw std::invalid_argument("bad register");
}

void QuantumOracle::validate() const {
  if (in_bits < 0 || out_bits < 1 || in_bits + out_bits > kMaxStateBits) {
    throw std::invalid_argument("QuantumOracle: widths out of range");
  }
  if (table.size() != (size_t{1} << in_bits)) {
    throw std::invalid_argument("QuantumOracle: table size != 2^in_bits");
  }
  for (uint64_t v : table) {
    if (out_bits < 64 && (v >> out_bits) != 0) {
      throw std::invalid_argument("QuantumOracle: entry exceeds output width");
    }
  }
}

void apply_oracle_fn(StateVector& psi,
                     const std::function<uint64_t(uint64_t)>& fn) {
  const uint64_t nx = uint64_t{1} << psi.wx;
  const uint64_t ny = uint64_t{1} << psi.wy;
  const uint64_t nz = uint64_t{1} << psi.wz;
  const uint64_t ymask = ny - 1;
  for (uint64_t x = 0; x < nx; ++x) {
    const uint64_t v = fn(x) & ymask;
    if (v == 0) continue;
    // y -> y ^ v is an involution: swap each amplitude pair once.
    for (uint64_t y = 0; y < ny; ++y) {
      const uint64_t y2 = y ^ v;
      if (y2 < y) continue;
      for (uint64_t z = 0; z < nz; ++z) {
        std::swap(psi.amp[psi.index(x, y, z)], psi.amp[psi.index(x, y2, z)]);
      }
    }
  }
}

void apply_oracle(StateVector& psi, const QuantumOracle& oracle) {
  oracle.validate();
  if (oracle.in_bits != psi.wx || oracle.out_bits != psi.wy) {
    throw std::invalid_argument("apply_oracle: register width mismatch");
  }
  apply_oracle_fn(psi, [&](uint64_t x) { return oracle.table[x]; });
}

void apply_hadamard(StateVector& psi, Register reg, int bit) {
  if (reg != Register::kX && reg != Register::kZ) {
    throw std::invalid_argument("apply_hadamard: register must be x or z");
  }
  const int w = psi.register_width(reg);
  if (bit < 0 || bit >= w) {
    throw std::out_of_range("apply_hadamard: bit index out of range");
  }
  // Bit 0 of a register is its most significant index bit.
  const int shift = reg == Register::kX ? psi.wy + psi.wz + (psi.wx - 1 - bit)
                                        : psi.wz - 1 - bit;
  const size_t stride = size_t{1} << shift;
  for (size_t base = 0; base < psi.amp.size(); base += 2 * stride) {
    for (size_t i = base; i < base + stride; ++i) {
      const auto a = psi.amp[i];
      const auto b = psi.amp[i + stride];
      psi.amp[i] = (a + b) * kInvSqrt2;
      psi.amp[i + stride] = (a - b) * kInvSqrt2;
    }
  }
}

uint64_t measure(StateVector& psi, Register reg, RandomSource& rng) {
  const int w = psi.register_width(reg);
  std::vector<double> prob(size_t{1} << w, 0.0);
  for (size_t i = 0; i < psi.amp.size(); ++i) {
    prob[register_value(psi, reg, i)] += std::norm(psi.amp[i]);
  }
  double total = 0.0;
  for (double p : prob) total += p;
  double u = rng.uniform01() * total;
  uint64_t outcome = prob.size() - 1;
  for (size_t v = 0; v < prob.size(); ++v) {
    if (u < prob[v]) {
      outcome = v;
      break;
    }
    u -= prob[v];
  }
  const double scale = 1.0 / std::sqrt(prob[outcome]);
  for (size_t i = 0; i < psi.amp.size(); ++i) {
    if (register_value(psi, reg, i) == outcome) {
      psi.amp[i] *= scale;
    } else {
      psi.amp[i] = {0.0, 0.0};
    }
  }
  return outcome;
}

uint64_t classical_query(StateVector& psi, const QuantumOracle& oracle,
                         RandomSource& rng) {
  const uint64_t x = measure(psi, Register::kX, rng);
  apply_oracle(psi, oracle);
  return x;
}

std::vector<Gate> parse_circuit(std::string_view text) {
  std::vector<Gate> gates;
  std::istringstream lines{std::string(text)};
  std::string line;
  auto parse_register = [](const std::string& token) {
    if (token == "x") return Register::kX;
    if (token == "y") return Register::kY;
    if (token == "z") return Register::kZ;
    throw std::invalid_argument("circuit: bad register '" + token + "'");
  };
  while (std::getline(lines, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string op;
    if (!(in >> op)) continue;
    Gate gate{};
    if (op == "h") {
      std::string reg;
      if (!(in >> reg >> gate.bit)) {
        throw std::invalid_argument("circuit: 'h' needs register and bit");
      }
      gate.kind = Gate::Kind::kHadamard;
      gate.reg = parse_register(reg);
    } else if (op == "oracle" || op == "cquery") {
      std::string dir;
      if (!(in >> dir) || (dir != "fwd" && dir != "inv")) {
        throw std::invalid_argument("circuit: '" + op + "' needs fwd|inv");
      }
      gate.kind = op == "oracle" ? Gate::Kind::kOracle
                                 : Gate::Kind::kClassicalQuery;
      gate.inverse_oracle = dir == "inv";
    } else if (op == "measure") {
      std::string reg;
      if (!(in >> reg)) {
        throw std::invalid_argument("circuit: 'measure' needs a register");
      }
      gate.kind = Gate::Kind::kMeasure;
      gate.reg = parse_register(reg);
    } else {
      throw std::invalid_argument("circuit: unknown gate '" + op + "'");
    }
    std::string extra;
    if (in >> extra) throw std::invalid_argument("circuit: trailing tokens");
    gates.push_back(gate);
  }
  return gates;
}

CircuitResult run_circuit(StateVector initial, const std::vector<Gate>& gates,
                          const std::function<uint64_t(uint64_t)>& forward,
                          const std::function<uint64_t(uint64_t)>& inverse,
                          RandomSource& rng) {
  CircuitResult result{std::move(initial), {}};
  for (const Gate& gate : gates) {
    switch (gate.kind) {
      case Gate::Kind::kHadamard:
        apply_hadamard(result.state, gate.reg, gate.bit);
        break;
      case Gate::Kind::kOracle:
        apply_oracle_fn(result.state, gate.inverse_oracle ? inverse : forward);
        break;
      case Gate::Kind::kClassicalQuery:
        result.measurements.push_back(measure(result.state, Register::kX, rng));
        apply_oracle_fn(result.state, gate.inverse_oracle ? inverse : forward);
        break;
      case Gate::Kind::kMeasure:
        result.measurements.push_back(measure(result.state, gate.reg, rng));
        break;
    }
  }
  return result;
}

CircuitResult simulate_from_truth_table(
    const std::vector<uint64_t>& forward_table,
    const std::vector<uint64_t>& inverse_table, int domain_bits,
    StateVector initial, const std::vector<Gate>& gates, RandomSource& rng) {
  const size_t size = size_t{1} << domain_bits;
  if (forward_table.size() != size || inverse_table.size() != size) {
    throw std::invalid_argument("simulate_from_truth_table: table size");
  }
  for (size_t x = 0; x < size; ++x) {
    if (forward_table[x] >= size || inverse_table[forward_table[x]] != x) {
      throw std::invalid_argument(
          "simulate_from_truth_table: tables are not mutually inverse "
          "bijections");
    }
  }
  if (initial.wx != domain_bits || initial.wy != domain_bits) {
    throw std::invalid_argument(
        "simulate_from_truth_table: register widths != domain bits");
  }
  return run_circuit(
      std::move(initial), gates, [&](uint64_t x) { return forward_table[x]; },
      [&](uint64_t x) { return inverse_table[x]; }, rng);
}

namespace {

// Reduced row-echelon basis over GF(2), rows as bitmasks.
class Gf2Basis {
 public:
  bool insert(uint64_t v) {
    for (uint64_t row : rows_) {
      v = std::min(v, v ^ row);
    }
    if (v == 0) return false;
    for (uint64_t& row : rows_) {
      if (std::min(row, row ^ v) != row) row ^= v;
    }
    rows_.push_back(v);
    return true;
  }

  int rank() const { return static_cast<int>(rows_.size()); }

  // Unique nonzero vector orthogonal to the row space; requires rank w-1.
  uint64_t nullspace_vector(int w) const {
    uint64_t pivots = 0;
    for (uint64_t row : rows_) {
      pivots |= uint64_t{1} << (63 - __builtin_clzll(row));
    }
    int free_bit = -1;
    for (int b = 0; b < w; ++b) {
      if (!((pivots >> b) & 1)) {
        free_bit = b;
        break;
      }
    }
    uint64_t s = uint64_t{1} << free_bit;
    for (uint64_t row : rows_) {
      const int pivot = 63 - __builtin_clzll(row);
      if ((row >> free_bit) & 1) s |= uint64_t{1} << pivot;
    }
    return s;
  }

 private:
  std::vector<uint64_t> rows_;
};

}  // namespace

std::optional<uint64_t> simon_find_period(const QuantumOracle& g, int max_runs,
                                          RandomSource& rng,
                                          SimonTranscript* transcript) {
  g.validate();
  const int w = g.in_bits;
  if (w < 1) throw std::invalid_argument("simon_find_period: empty domain");
  Gf2Basis basis;
  SimonTranscript local;
  SimonTranscript& t = transcript ? *transcript : local;
  t = SimonTranscript{};

  for (int run = 0; run < max_runs; ++run) {
    StateVector psi = StateVector::basis(w, g.out_bits, 0);
    for (int b = 0; b < w; ++b) apply_hadamard(psi, Register::kX, b);
    apply_oracle(psi, g);
    for (int b = 0; b < w; ++b) apply_hadamard(psi, Register::kX, b);
    const uint64_t v = measure(psi, Register::kX, rng);
    t.measured.push_back(v);
    basis.insert(v);
    t.rank_history.push_back(basis.rank());
    if (basis.rank() == w) return std::nullopt;  // no nonzero period fits
    if (basis.rank() == w - 1) {
      t.period = basis.nullspace_vector(w);
      return t.period;
    }
  }
  return std::nullopt;
}

KmResult km_feistel_distinguisher(
    const std::function<uint64_t(uint64_t)>& perm_forward,
    const std::function<uint64_t(uint64_t)>& perm_inverse, int half_width,
    uint64_t alpha, uint64_t beta, RandomSource& rng) {
  if (half_width < 1 || half_width > 10) {
    throw std::invalid_argument("km_feistel_distinguisher: h must be in 1..10");
  }
  const uint64_t hmask = (uint64_t{1} << half_width) - 1;
  if (alpha > hmask || beta > hmask || alpha == beta) {
    throw std::invalid_argument(
        "km_feistel_distinguisher: constants must be distinct h-bit values");
  }
  // Strong-PRP interface sanity: both directions must agree.
  for (int i = 0; i < 4; ++i) {
    const uint64_t p = rng.below(uint64_t{1} << (2 * half_width));
    if (perm_inverse(perm_forward(p)) != p) {
      throw std::invalid_argument(
          "km_feistel_distinguisher: oracles are not mutually inverse");
    }
  }

  const int w = 1 + half_width;
  QuantumOracle g;
  g.in_bits = w;
  g.out_bits = half_width;
  g.table.resize(size_t{1} << w);
  for (uint64_t t = 0; t < g.table.size(); ++t) {
    const uint64_t b = t >> half_width;
    const uint64_t x = t & hmask;
    const uint64_t c = b ? beta : alpha;
    const uint64_t ct = perm_forward((x << half_width) | c);
    g.table[t] = ((ct >> half_width) & hmask) ^ c;
  }

  KmResult result;
  result.period = simon_find_period(g, 20 * w, rng, &result.transcript);
  if (result.period && *result.period != 0) {
    bool verified = true;
    for (int i = 0; i < 10; ++i) {
      const uint64_t t = rng.below(uint64_t{1} << w);
      if (g.table[t] != g.table[t ^ *result.period]) {
        verified = false;
        break;
      }
    }
    if (verified) result.verdict = Verdict::kFeistelLike;
  }
  return result;
}

}  // namespace qsim
}  // namespace qsprp
