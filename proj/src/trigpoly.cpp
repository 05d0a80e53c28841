#include "unidisc/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "unidisc/parallel.hpp"

namespace unidisc {

namespace {

// e^{i k x} for k = -n..n, index k + n. Re-anchored every 32 steps so the
// recurrence error stays at a few ulps.
void fill_exponentials(int n, double x, std::vector<Complex>& out) {
  out.resize(2 * static_cast<std::size_t>(n) + 1);
  out[n] = 1.0;
  const Complex step = std::polar(1.0, x);
  Complex cur = 1.0;
  for (int k = 1; k <= n; ++k) {
    cur = (k % 32 == 0) ? std::polar(1.0, k * x) : cur * step;
    out[n + k] = cur;
    out[n - k] = std::conj(cur);
  }
}

double reduce_angle(double x) { return std::remainder(x, kTwoPi); }

FrequencyBox enclosing_box(int d, const std::vector<Frequency>& freqs) {
  std::vector<int> deg(static_cast<std::size_t>(d), 0);
  for (const auto& k : freqs) {
    for (int j = 0; j < d; ++j) deg[j] = std::max(deg[j], std::abs(k[j]));
  }
  return FrequencyBox(std::move(deg));
}

int kernel_degree(KernelKind kind, int n) {
  switch (kind) {
    case KernelKind::dirichlet:
      if (n < 0) throw std::invalid_argument("Dirichlet kernel order must be >= 0");
      return n;
    case KernelKind::fejer:
      if (n < 1) throw std::invalid_argument("Fejer kernel order must be >= 1");
      return n - 1;
    case KernelKind::vallee_poussin:
      if (n < 1) throw std::invalid_argument("de la Vallee Poussin kernel order must be >= 1");
      return 2 * n - 1;
  }
  return 0;
}

double kernel_coefficient(KernelKind kind, int n, int k) {
  const double a = std::abs(k);
  switch (kind) {
    case KernelKind::dirichlet:
      return a <= n ? 1.0 : 0.0;
    case KernelKind::fejer:
      return a < n ? 1.0 - a / n : 0.0;
    case KernelKind::vallee_poussin: {
      const double two = a < 2 * n ? 2.0 * (1.0 - a / (2.0 * n)) : 0.0;
      const double one = a < n ? 1.0 - a / n : 0.0;
      return two - one;
    }
  }
  return 0.0;
}

// Contracts a dense coefficient block against per-axis exponentials,
// innermost (fastest) axis first.
Complex contract_dense(const FrequencyBox& box, const std::vector<Complex>& coeffs,
                       const std::vector<std::vector<Complex>>& exps,
                       std::vector<Complex>& scratch) {
  const int d = box.dim();
  std::size_t len = coeffs.size();
  scratch.assign(coeffs.begin(), coeffs.end());
  for (int j = d - 1; j >= 0; --j) {
    const auto e = static_cast<std::size_t>(box.extent(j));
    const std::size_t outer = len / e;
    const auto& w = exps[j];
    for (std::size_t o = 0; o < outer; ++o) {
      Complex acc = 0.0;
      const Complex* row = scratch.data() + o * e;
      for (std::size_t i = 0; i < e; ++i) acc += row[i] * w[i];
      scratch[o] = acc;
    }
    len = outer;
  }
  return scratch[0];
}

}  // namespace

TrigPolynomial::TrigPolynomial(FrequencyBox box, std::vector<Complex> coeffs)
    : d_(box.dim()), dense_(true), box_(std::move(box)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != box_.cardinality()) {
    throw std::invalid_argument("coefficient count does not match the frequency box");
  }
}

TrigPolynomial::TrigPolynomial(int d, std::vector<Frequency> freqs, std::vector<Complex> coeffs)
    : d_(d), dense_(false) {
  if (d < 1) throw std::invalid_argument("polynomial dimension must be positive");
  if (freqs.size() != coeffs.size()) {
    throw std::invalid_argument("frequency and coefficient counts differ");
  }
  for (const auto& k : freqs) {
    if (static_cast<int>(k.size()) != d) throw std::invalid_argument("frequency has wrong dimension");
  }
  std::vector<std::size_t> order(freqs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return freqs[a] < freqs[b]; });
  freqs_.reserve(freqs.size());
  coeffs_.reserve(coeffs.size());
  for (std::size_t i : order) {
    if (!freqs_.empty() && freqs_.back() == freqs[i]) {
      throw std::invalid_argument("duplicate frequency in sparse polynomial");
    }
    freqs_.push_back(std::move(freqs[i]));
    coeffs_.push_back(coeffs[i]);
  }
  box_ = enclosing_box(d, freqs_);
}

TrigPolynomial TrigPolynomial::zero(const FrequencyBox& box) {
  return TrigPolynomial(box, std::vector<Complex>(box.cardinality(), 0.0));
}

TrigPolynomial TrigPolynomial::constant(int d, Complex value) {
  return TrigPolynomial(FrequencyBox(std::vector<int>(static_cast<std::size_t>(d), 0)), {value});
}

TrigPolynomial TrigPolynomial::monomial(const Frequency& k, Complex value) {
  std::vector<int> deg;
  for (int v : k) deg.push_back(std::abs(v));
  FrequencyBox box(std::move(deg));
  std::vector<Complex> c(box.cardinality(), 0.0);
  c[box.offset(k)] = value;
  return TrigPolynomial(std::move(box), std::move(c));
}

Frequency TrigPolynomial::frequency(std::size_t index) const {
  return dense_ ? box_.frequency_at(index) : freqs_[index];
}

Complex TrigPolynomial::coefficient(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != d_) throw std::invalid_argument("frequency has wrong dimension");
  if (dense_) return box_.contains(k) ? coeffs_[box_.offset(k)] : Complex{0.0};
  const Frequency key(k.begin(), k.end());
  auto it = std::lower_bound(freqs_.begin(), freqs_.end(), key);
  if (it == freqs_.end() || *it != key) return 0.0;
  return coeffs_[static_cast<std::size_t>(it - freqs_.begin())];
}

Complex TrigPolynomial::operator()(std::span<const double> x) const {
  EvalBuffers buffers;
  return evaluate_with(x, buffers);
}

Complex TrigPolynomial::evaluate_with(std::span<const double> x, EvalBuffers& buffers) const {
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("point dimension mismatch");
  auto& exps = buffers.exponentials;
  exps.resize(static_cast<std::size_t>(d_));
  for (int j = 0; j < d_; ++j) fill_exponentials(box_.degree(j), x[j], exps[j]);
  if (dense_) return contract_dense(box_, coeffs_, exps, buffers.scratch);
  Complex acc = 0.0;
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    Complex term = coeffs_[i];
    for (int j = 0; j < d_; ++j) term *= exps[j][freqs_[i][j] + box_.degree(j)];
    acc += term;
  }
  return acc;
}

TrigPolynomial TrigPolynomial::to_dense() const {
  if (dense_) return *this;
  std::vector<Complex> c(box_.cardinality(), 0.0);
  for (std::size_t i = 0; i < freqs_.size(); ++i) c[box_.offset(freqs_[i])] = coeffs_[i];
  return TrigPolynomial(box_, std::move(c));
}

TrigPolynomial TrigPolynomial::scaled(Complex factor) const {
  TrigPolynomial g = *this;
  for (auto& c : g.coeffs_) c *= factor;
  return g;
}

Complex evaluate(const TrigPolynomial& f, std::span<const double> x) { return f(x); }

std::vector<Complex> evaluate_flat(const TrigPolynomial& f, std::span<const double> coords) {
  const auto d = static_cast<std::size_t>(f.dim());
  if (d == 0 || coords.size() % d != 0) throw std::invalid_argument("point dimension mismatch");
  const std::size_t m = coords.size() / d;
  std::vector<Complex> out(m);
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (m + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    TrigPolynomial::EvalBuffers buffers;
    const std::size_t end = std::min(m, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) out[i] = f.evaluate_with(coords.subspan(i * d, d), buffers);
  });
  return out;
}

std::vector<Complex> evaluate(const TrigPolynomial& f, const PointSet& points) {
  if (points.dim() != f.dim()) throw std::invalid_argument("point dimension mismatch");
  const std::vector<double> coords = points.torus_coordinates();
  return evaluate_flat(f, coords);
}

std::vector<Complex> evaluate_tensor_grid(const TrigPolynomial& f,
                                          const std::vector<std::vector<double>>& axis_nodes) {
  const int d = f.dim();
  if (static_cast<int>(axis_nodes.size()) != d) throw std::invalid_argument("grid dimension mismatch");
  const TrigPolynomial dense = f.to_dense();
  const FrequencyBox& box = dense.bounding_box();
  // shape[j] is the current extent of axis j; axes < j are already nodes.
  std::vector<std::size_t> shape(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) shape[j] = static_cast<std::size_t>(box.extent(j));
  std::vector<Complex> cur = dense.coefficients();
  std::vector<Complex> weights;
  for (int j = 0; j < d; ++j) {
    const std::size_t e = shape[j];
    const std::size_t mj = axis_nodes[j].size();
    std::size_t outer = 1;
    for (int a = 0; a < j; ++a) outer *= shape[a];
    std::size_t inner = 1;
    for (int a = j + 1; a < d; ++a) inner *= shape[a];
    weights.resize(mj * e);
    std::vector<Complex> row;
    for (std::size_t m = 0; m < mj; ++m) {
      fill_exponentials(box.degree(j), axis_nodes[j][m], row);
      std::copy(row.begin(), row.end(), weights.begin() + static_cast<std::ptrdiff_t>(m * e));
    }
    std::vector<Complex> next(outer * mj * inner, 0.0);
    parallel_for(outer * mj, [&](std::size_t om) {
      const std::size_t o = om / mj;
      const std::size_t m = om % mj;
      Complex* dst = next.data() + (o * mj + m) * inner;
      const Complex* w = weights.data() + m * e;
      for (std::size_t k = 0; k < e; ++k) {
        const Complex* src = cur.data() + (o * e + k) * inner;
        const Complex wk = w[k];
        for (std::size_t i = 0; i < inner; ++i) dst[i] += wk * src[i];
      }
    });
    cur = std::move(next);
    shape[j] = mj;
  }
  return cur;
}

std::vector<std::vector<double>> equispaced_nodes(std::span<const int> counts) {
  std::vector<std::vector<double>> nodes;
  for (int m : counts) {
    if (m < 1) throw std::invalid_argument("grid needs at least one node per axis");
    std::vector<double> axis(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) axis[i] = kTwoPi * i / m;
    nodes.push_back(std::move(axis));
  }
  return nodes;
}

TrigPolynomial tensor_kernel(KernelKind kind, std::span<const int> orders) {
  std::vector<int> deg;
  std::vector<std::vector<double>> axis;
  for (int n : orders) {
    const int g = kernel_degree(kind, n);
    deg.push_back(g);
    std::vector<double> c;
    for (int k = -g; k <= g; ++k) c.push_back(kernel_coefficient(kind, n, k));
    axis.push_back(std::move(c));
  }
  FrequencyBox box(std::move(deg));
  std::vector<Complex> coeffs(box.cardinality());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Frequency k = box.frequency_at(i);
    double v = 1.0;
    for (int j = 0; j < box.dim(); ++j) v *= axis[j][k[j] + box.degree(j)];
    coeffs[i] = v;
  }
  return TrigPolynomial(std::move(box), std::move(coeffs));
}

TrigPolynomial dirichlet(int n) {
  const int o[] = {n};
  return tensor_kernel(KernelKind::dirichlet, o);
}

TrigPolynomial fejer(int n) {
  const int o[] = {n};
  return tensor_kernel(KernelKind::fejer, o);
}

TrigPolynomial vallee_poussin(int n) {
  const int o[] = {n};
  return tensor_kernel(KernelKind::vallee_poussin, o);
}

double dirichlet_value(int n, double x) {
  const double t = reduce_angle(x);
  const double s = std::sin(t / 2);
  if (std::abs(s) < 1e-13) return 2.0 * n + 1.0;
  return std::sin((n + 0.5) * t) / s;
}

double fejer_value(int n, double x) {
  if (n < 1) throw std::invalid_argument("Fejer kernel order must be >= 1");
  const double t = reduce_angle(x);
  const double s = std::sin(t / 2);
  if (std::abs(s) < 1e-13) return n;
  const double num = std::sin(n * t / 2);
  return num * num / (n * s * s);
}

double vallee_poussin_value(int n, double x) {
  return 2.0 * fejer_value(2 * n, x) - fejer_value(n, x);
}

double kernel_value(KernelKind kind, int n, double x) {
  switch (kind) {
    case KernelKind::dirichlet: return dirichlet_value(n, x);
    case KernelKind::fejer: return fejer_value(n, x);
    case KernelKind::vallee_poussin: return vallee_poussin_value(n, x);
  }
  return 0.0;
}

double tensor_kernel_value(KernelKind kind, std::span<const int> orders,
                           std::span<const double> x) {
  if (orders.size() != x.size()) throw std::invalid_argument("point dimension mismatch");
  double v = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) v *= kernel_value(kind, orders[j], x[j]);
  return v;
}

TrigPolynomial translate(const TrigPolynomial& f, std::span<const double> w) {
  if (static_cast<int>(w.size()) != f.dim()) throw std::invalid_argument("shift dimension mismatch");
  const FrequencyBox& box = f.bounding_box();
  std::vector<std::vector<Complex>> exps(w.size());
  for (int j = 0; j < f.dim(); ++j) fill_exponentials(box.degree(j), -w[j], exps[j]);
  std::vector<Complex> c = f.coefficients();
  std::vector<Frequency> freqs;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Frequency k = f.frequency(i);
    for (int j = 0; j < f.dim(); ++j) c[i] *= exps[j][k[j] + box.degree(j)];
    if (!f.is_dense()) freqs.push_back(k);
  }
  if (f.is_dense()) return TrigPolynomial(box, std::move(c));
  return TrigPolynomial(f.dim(), std::move(freqs), std::move(c));
}

TrigPolynomial random_poly(const FrequencyBox& box, std::uint64_t seed, SampleKind kind) {
  std::mt19937_64 rng(seed);
  if (kind == SampleKind::gaussian) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    std::vector<Complex> c(box.cardinality());
    for (auto& v : c) {
      const double re = normal(rng);
      const double im = normal(rng);
      v = Complex(re, im);
    }
    return TrigPolynomial(box, std::move(c));
  }
  std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
  std::vector<double> w(static_cast<std::size_t>(box.dim()));
  for (double& x : w) x = uniform(rng);
  return translate(tensor_kernel(KernelKind::dirichlet, box.degrees()), w);
}

double torus_distance(double a, double b) {
  const double diff = std::abs(std::remainder(a - b, kTwoPi));
  return std::min(diff, kTwoPi - diff);
}

nlohmann::json to_json(const TrigPolynomial& f) {
  nlohmann::json freqs = nlohmann::json::array();
  nlohmann::json coeffs = nlohmann::json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    freqs.push_back(f.frequency(i));
    coeffs.push_back({f.coefficients()[i].real(), f.coefficients()[i].imag()});
  }
  return {{"d", f.dim()}, {"freqs", std::move(freqs)}, {"coeffs", std::move(coeffs)}};
}

TrigPolynomial trig_polynomial_from_json(const nlohmann::json& j) {
  const auto freqs = j.at("freqs").get<std::vector<Frequency>>();
  const auto& raw = j.at("coeffs");
  if (raw.size() != freqs.size()) throw std::invalid_argument("frequency and coefficient counts differ");
  int d = j.contains("d") ? j.at("d").get<int>() : (freqs.empty() ? 0 : static_cast<int>(freqs[0].size()));
  std::vector<Complex> coeffs;
  for (const auto& c : raw) {
    if (c.size() != 2) throw std::invalid_argument("coefficient must be [re, im]");
    coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
  }
  if (freqs.empty()) return TrigPolynomial::constant(d, 0.0);
  TrigPolynomial sparse(d, freqs, coeffs);
  // A list that enumerates its whole enclosing box in row-major order is dense.
  const FrequencyBox& box = sparse.bounding_box();
  if (box.cardinality() == freqs.size()) {
    bool in_order = true;
    for (std::size_t i = 0; i < freqs.size() && in_order; ++i) in_order = box.frequency_at(i) == freqs[i];
    if (in_order) return TrigPolynomial(box, std::move(coeffs));
  }
  return sparse;
}

const char* to_string(SampleKind kind) {
  return kind == SampleKind::gaussian ? "gaussian" : "spike";
}

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::dirichlet: return "dirichlet";
    case KernelKind::fejer: return "fejer";
    case KernelKind::vallee_poussin: return "vallee_poussin";
  }
  return "?";
}

}  // namespace unidisc
