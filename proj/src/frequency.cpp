#include "unidisc/frequency.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace unidisc {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw std::overflow_error("frequency set cardinality overflows 64 bits");
  }
  return a * b;
}

void append_compositions(int remaining, int axis, SubspaceIndex& current,
                         std::vector<SubspaceIndex>& out) {
  const int d = current.dim();
  if (axis == d - 1) {
    current.s[axis] = remaining;
    out.push_back(current);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    current.s[axis] = v;
    append_compositions(remaining - v, axis + 1, current, out);
  }
}

}  // namespace

FrequencyBox::FrequencyBox(std::vector<int> degrees) : degrees_(std::move(degrees)) {
  if (degrees_.empty()) throw std::invalid_argument("frequency box needs d >= 1");
  for (int n : degrees_) {
    if (n < 0) throw std::invalid_argument("frequency box degree must be nonnegative");
    if (n >= (1 << kMaxLevel)) throw std::out_of_range("frequency box degree too large");
  }
  (void)cardinality();  // overflow guard
}

std::uint64_t FrequencyBox::cardinality() const {
  std::uint64_t c = 1;
  for (int n : degrees_) c = checked_mul(c, 2 * static_cast<std::uint64_t>(n) + 1);
  return c;
}

std::uint64_t FrequencyBox::volume_index() const {
  std::uint64_t v = 1;
  for (int n : degrees_) v = checked_mul(v, static_cast<std::uint64_t>(std::max(n, 1)));
  return v;
}

bool FrequencyBox::contains(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != dim()) return false;
  for (int j = 0; j < dim(); ++j) {
    if (k[j] < -degrees_[j] || k[j] > degrees_[j]) return false;
  }
  return true;
}

std::size_t FrequencyBox::offset(std::span<const int> k) const {
  std::size_t off = 0;
  for (int j = 0; j < dim(); ++j) {
    off = off * static_cast<std::size_t>(extent(j)) + static_cast<std::size_t>(k[j] + degrees_[j]);
  }
  return off;
}

Frequency FrequencyBox::frequency_at(std::size_t offset) const {
  Frequency k(degrees_.size());
  for (int j = dim() - 1; j >= 0; --j) {
    const auto e = static_cast<std::size_t>(extent(j));
    k[j] = static_cast<int>(offset % e) - degrees_[j];
    offset /= e;
  }
  return k;
}

std::vector<Frequency> FrequencyBox::frequencies() const {
  const std::uint64_t total = cardinality();
  std::vector<Frequency> out;
  out.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) out.push_back(frequency_at(i));
  return out;
}

int SubspaceIndex::level() const {
  int n = 0;
  for (int v : s) n += v;
  return n;
}

FrequencyBox box_of_s(const SubspaceIndex& s) {
  std::vector<int> degrees;
  degrees.reserve(s.s.size());
  for (int v : s.s) {
    if (v < 0) throw std::invalid_argument("subspace level must be nonnegative");
    if (v > kMaxLevel) throw std::out_of_range("2^s_j exceeds the supported integer range");
    degrees.push_back((1 << v) - 1);
  }
  return FrequencyBox(std::move(degrees));
}

FrequencyBox dyadic_box(const SubspaceIndex& s) {
  std::vector<int> degrees;
  for (int v : s.s) {
    if (v < 0) throw std::invalid_argument("subspace level must be nonnegative");
    if (v >= kMaxLevel) throw std::out_of_range("2^s_j exceeds the supported integer range");
    degrees.push_back(1 << v);
  }
  return FrequencyBox(std::move(degrees));
}

std::vector<SubspaceIndex> enumerate_compositions(int n, int d) {
  if (n < 0) throw std::invalid_argument("level n must be nonnegative");
  if (d < 1) throw std::invalid_argument("dimension d must be positive");
  (void)binomial(n + d - 1, d - 1);
  std::vector<SubspaceIndex> out;
  SubspaceIndex current{std::vector<int>(static_cast<std::size_t>(d), 0)};
  append_compositions(n, 0, current, out);
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (c > std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("binomial coefficient overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(c);
}

bool HyperbolicCross::contains(std::span<const int> k) const {
  const Frequency key(k.begin(), k.end());
  return std::binary_search(frequencies.begin(), frequencies.end(), key);
}

HyperbolicCross hyperbolic_cross(int n, int d) {
  HyperbolicCross cross;
  cross.n = n;
  cross.d = d;
  for (const auto& s : enumerate_compositions(n, d)) {
    const FrequencyBox box = box_of_s(s);
    const std::uint64_t total = box.cardinality();
    for (std::uint64_t i = 0; i < total; ++i) cross.frequencies.push_back(box.frequency_at(i));
  }
  std::sort(cross.frequencies.begin(), cross.frequencies.end());
  cross.frequencies.erase(std::unique(cross.frequencies.begin(), cross.frequencies.end()),
                          cross.frequencies.end());
  return cross;
}

nlohmann::json to_json(const FrequencyBox& box) {
  return {{"kind", "box"}, {"N", box.degrees()}};
}

nlohmann::json to_json(const HyperbolicCross& cross) {
  return {{"kind", "cross"}, {"n", cross.n}, {"d", cross.d}, {"freqs", cross.frequencies}};
}

std::string frequency_set_from_json(const nlohmann::json& j, FrequencyBox& box,
                                    HyperbolicCross& cross) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "box") {
    box = FrequencyBox(j.at("N").get<std::vector<int>>());
  } else if (kind == "cross") {
    cross.n = j.at("n").get<int>();
    cross.d = j.at("d").get<int>();
    if (j.contains("freqs")) {
      cross.frequencies = j.at("freqs").get<std::vector<Frequency>>();
      std::sort(cross.frequencies.begin(), cross.frequencies.end());
    } else {
      cross = hyperbolic_cross(cross.n, cross.d);
    }
  } else {
    throw std::invalid_argument("unknown frequency set kind: " + kind);
  }
  return kind;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("not an integer: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

}  // namespace unidisc
