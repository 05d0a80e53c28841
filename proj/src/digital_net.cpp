#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>

#include "unidisc/parallel.hpp"
#include "unidisc/pointsets.hpp"

namespace unidisc {

namespace {

struct JoeKuoEntry {
  int degree;
  unsigned coefficients;
  std::array<std::uint32_t, 5> initial;
};

// Primitive-polynomial degree, inner coefficients and initial direction
// numbers for Sobol dimensions 2..7.
constexpr std::array<JoeKuoEntry, 6> kJoeKuo{{
    {1, 0, {1, 0, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0, 0}},
    {3, 1, {1, 3, 1, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0}},
    {4, 1, {1, 1, 3, 3, 0}},
    {4, 4, {1, 3, 5, 13, 0}},
}};

std::vector<std::uint64_t> sobol_columns(const JoeKuoEntry& e, int r) {
  const int s = e.degree;
  std::vector<std::uint64_t> m(static_cast<std::size_t>(std::max(r, s)) + 1, 0);
  for (int k = 1; k <= s; ++k) m[k] = e.initial[k - 1];
  for (int k = s + 1; k <= r; ++k) {
    std::uint64_t v = m[k - s] ^ (m[k - s] << s);
    for (int i = 1; i < s; ++i) {
      if ((e.coefficients >> (s - 1 - i)) & 1u) v ^= m[k - i] << i;
    }
    m[k] = v;
  }
  std::vector<std::uint64_t> cols(static_cast<std::size_t>(r));
  for (int k = 1; k <= r; ++k) cols[k - 1] = m[k] << (r - k);
  return cols;
}

// Incremental GF(2) basis over r-bit masks, keyed by leading bit.
class Gf2Basis {
 public:
  explicit Gf2Basis(int bits) : rows_(static_cast<std::size_t>(bits), 0) {}

  bool insert(std::uint64_t v) {
    while (v != 0) {
      const int lead = 63 - std::countl_zero(v);
      if (rows_[lead] == 0) {
        rows_[lead] = v;
        return true;
      }
      v ^= rows_[lead];
    }
    return false;
  }

 private:
  std::vector<std::uint64_t> rows_;
};

std::uint64_t parity(std::uint64_t v) { return static_cast<std::uint64_t>(std::popcount(v) & 1); }

}  // namespace

DigitalNet::DigitalNet(int d, int r, std::vector<std::vector<std::uint64_t>> columns,
                       std::optional<int> declared_t)
    : d_(d), r_(r), columns_(std::move(columns)), declared_t_(declared_t) {
  if (d < 1 || d > kMaxNetDim) throw std::out_of_range("net dimension must be in [1, 8]");
  if (r < 0 || r > kMaxNetExponent) throw std::out_of_range("net exponent must be in [0, 30]");
  if (static_cast<int>(columns_.size()) != d) throw std::invalid_argument("need one matrix per axis");
  const std::uint64_t limit = std::uint64_t{1} << r;
  rows_.assign(static_cast<std::size_t>(d), std::vector<std::uint64_t>(static_cast<std::size_t>(r), 0));
  for (int j = 0; j < d; ++j) {
    if (static_cast<int>(columns_[j].size()) != r) throw std::invalid_argument("matrix must be r x r");
    for (int k = 0; k < r; ++k) {
      const std::uint64_t col = columns_[j][k];
      if (col >= limit) throw std::invalid_argument("matrix column has more than r bits");
      for (int b = 0; b < r; ++b) {
        if ((col >> (r - 1 - b)) & 1u) rows_[j][b] |= std::uint64_t{1} << k;
      }
    }
  }
}

std::uint64_t DigitalNet::numerator(std::uint64_t i, int axis) const {
  std::uint64_t v = 0;
  const auto& cols = columns_[axis];
  for (int k = 0; i != 0; ++k, i >>= 1) {
    if (i & 1u) v ^= cols[k];
  }
  return v;
}

bool DigitalNet::has_full_rank(const std::vector<int>& shape) const {
  if (static_cast<int>(shape.size()) != d_) throw std::invalid_argument("shape dimension mismatch");
  int total = 0;
  for (int k : shape) {
    if (k < 0 || k > r_) return false;
    total += k;
  }
  if (total > r_) return false;
  Gf2Basis basis(r_);
  for (int j = 0; j < d_; ++j) {
    for (int b = 0; b < shape[j]; ++b) {
      if (!basis.insert(rows_[j][b])) return false;
    }
  }
  return true;
}

int DigitalNet::quality() const {
  for (int level = 1; level <= r_; ++level) {
    for (const auto& s : enumerate_compositions(level, d_)) {
      if (!has_full_rank(s.s)) return r_ - level + 1;
    }
  }
  return 0;
}

std::vector<std::uint64_t> DigitalNet::indices_in_box(const std::vector<int>& shape,
                                                      const std::vector<std::uint64_t>& cell,
                                                      std::size_t limit) const {
  if (static_cast<int>(shape.size()) != d_ || static_cast<int>(cell.size()) != d_) {
    throw std::invalid_argument("box dimension mismatch");
  }
  // Reduced row echelon form of [row | rhs], pivot = leading bit.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> echelon;
  auto reduce = [&](std::uint64_t& mask, std::uint64_t& rhs) {
    for (const auto& [m, v] : echelon) {
      const int lead = 63 - std::countl_zero(m);
      if ((mask >> lead) & 1u) {
        mask ^= m;
        rhs ^= v;
      }
    }
  };
  for (int j = 0; j < d_; ++j) {
    const int k = shape[j];
    if (k < 0 || k > r_) throw std::out_of_range("box resolution out of range");
    if (k < 64 && (cell[j] >> k) != 0) throw std::out_of_range("box index out of range");
    for (int b = 0; b < k; ++b) {
      std::uint64_t mask = rows_[j][b];
      std::uint64_t rhs = (cell[j] >> (k - 1 - b)) & 1u;
      reduce(mask, rhs);
      if (mask == 0) {
        if (rhs != 0) return {};
        continue;
      }
      const int lead = 63 - std::countl_zero(mask);
      for (auto& [m, v] : echelon) {
        if ((m >> lead) & 1u) {
          m ^= mask;
          v ^= rhs;
        }
      }
      echelon.emplace_back(mask, rhs);
    }
  }
  std::uint64_t pivots = 0;
  for (const auto& [m, v] : echelon) pivots |= std::uint64_t{1} << (63 - std::countl_zero(m));
  std::vector<int> free_bits;
  for (int b = 0; b < r_; ++b) {
    if (!((pivots >> b) & 1u)) free_bits.push_back(b);
  }
  std::vector<std::uint64_t> out;
  const std::uint64_t combos = std::uint64_t{1} << free_bits.size();
  for (std::uint64_t c = 0; c < combos && out.size() < limit; ++c) {
    std::uint64_t x = 0;
    for (std::size_t f = 0; f < free_bits.size(); ++f) {
      if ((c >> f) & 1u) x |= std::uint64_t{1} << free_bits[f];
    }
    for (const auto& [m, v] : echelon) {
      const int lead = 63 - std::countl_zero(m);
      if (v ^ parity(m & x & ~(std::uint64_t{1} << lead))) x |= std::uint64_t{1} << lead;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PointSet DigitalNet::points() const {
  if (r_ > kMaxMaterializedExponent) {
    throw std::length_error("net with 2^" + std::to_string(r_) + " points is too large to list");
  }
  Gf2Basis basis(r_);
  int rank = 0;
  for (const auto& rows : rows_) {
    for (std::uint64_t row : rows) rank += basis.insert(row) ? 1 : 0;
  }
  if (rank < r_) throw std::runtime_error("degenerate generator matrices produce duplicate points");
  const std::uint64_t m = size();
  std::vector<std::uint64_t> nums(m * static_cast<std::uint64_t>(d_));
  // Gray-code order: consecutive indices differ in one bit, one XOR per axis.
  std::vector<std::uint64_t> cur(static_cast<std::size_t>(d_), 0);
  for (std::uint64_t g = 0; g < m; ++g) {
    if (g > 0) {
      const int bit = std::countr_zero(g);
      for (int j = 0; j < d_; ++j) cur[j] ^= columns_[j][bit];
    }
    const std::uint64_t i = g ^ (g >> 1);
    for (int j = 0; j < d_; ++j) nums[i * static_cast<std::uint64_t>(d_) + j] = cur[j];
  }
  return PointSet::dyadic(d_, r_, std::move(nums), Domain::unit_cube);
}

DigitalNet default_generator_matrices(int d, int r) {
  if (d < 1 || d > kMaxNetDim) throw std::out_of_range("net dimension must be in [1, 8]");
  if (r < 0 || r > kMaxNetExponent) throw std::out_of_range("net exponent must be in [0, 30]");
  std::vector<std::vector<std::uint64_t>> cols(static_cast<std::size_t>(d));
  for (int k = 0; k < r; ++k) cols[0].push_back(std::uint64_t{1} << k);
  if (d >= 2) {
    for (int k = 0; k < r; ++k) cols[1].push_back(std::uint64_t{1} << (r - 1 - k));
  }
  for (int j = 2; j < d; ++j) cols[j] = sobol_columns(kJoeKuo[j - 2], r);
  std::optional<int> declared;
  if (d <= 2) declared = 0;
  return DigitalNet(d, r, std::move(cols), declared);
}

PointSet net_points(const DigitalNet& net) { return net.points(); }

NetCheck verify_net(const PointSet& points, int t) {
  if (!points.is_dyadic()) throw std::invalid_argument("net verification needs exact dyadic coordinates");
  const std::size_t m = points.size();
  if (m == 0 || !std::has_single_bit(m)) throw std::invalid_argument("net must have 2^r points");
  const int r = std::countr_zero(m);
  if (t < 0 || t > r) throw std::out_of_range("t must lie in [0, r]");
  const int level = r - t;
  if (level > 28) throw std::out_of_range("net too large for exhaustive verification");
  const int d = points.dim();
  const int exponent = points.exponent();
  const auto shapes = enumerate_compositions(level, d);
  const std::uint64_t expected = std::uint64_t{1} << t;
  std::vector<std::optional<DyadicBoxRef>> failures(shapes.size());
  parallel_for(shapes.size(), [&](std::size_t si) {
    const auto& shape = shapes[si].s;
    std::vector<std::uint64_t> counts(std::size_t{1} << level, 0);
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t key = 0;
      for (int j = 0; j < d; ++j) {
        const int k = shape[j];
        const std::uint64_t v = points.numerator(i, j);
        const std::uint64_t lead = k <= exponent ? v >> (exponent - k) : v << (k - exponent);
        key = (key << k) | lead;
      }
      ++counts[key];
    }
    for (std::uint64_t key = 0; key < counts.size(); ++key) {
      if (counts[key] == expected) continue;
      DyadicBoxRef box{shape, std::vector<std::uint64_t>(static_cast<std::size_t>(d)), counts[key]};
      std::uint64_t rest = key;
      for (int j = d - 1; j >= 0; --j) {
        box.cell[j] = rest & ((std::uint64_t{1} << shape[j]) - 1);
        rest >>= shape[j];
      }
      failures[si] = std::move(box);
      return;
    }
  });
  NetCheck check;
  check.t = t;
  for (auto& f : failures) {
    if (f) {
      check.pass = false;
      check.witness = std::move(f);
      break;
    }
  }
  return check;
}

int minimal_t(const PointSet& points) {
  const int r = std::countr_zero(points.size());
  for (int t = 0; t < r; ++t) {
    if (verify_net(points, t).pass) return t;
  }
  (void)verify_net(points, r);  // validates the input
  return r;
}

nlohmann::json to_json(const DyadicBoxRef& box) {
  return {{"shape", box.shape}, {"cell", box.cell}, {"count", box.count}};
}

nlohmann::json to_json(const NetCheck& check) {
  nlohmann::json j{{"pass", check.pass}, {"t", check.t}};
  j["witness"] = check.witness ? to_json(*check.witness) : nlohmann::json(nullptr);
  return j;
}

}  // namespace unidisc
