#include "unidisc/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace unidisc {

namespace {

double abs_power(std::complex<double> v, double q) {
  const double a = std::abs(v);
  if (q == 2.0) return a * a;
  if (q == 1.0) return a;
  return std::pow(a, q);
}

double grid_mean_power(const TrigPolynomial& f, const std::vector<int>& counts, double q) {
  const auto values = evaluate_tensor_grid(f, equispaced_nodes(counts));
  return mean_abs_power(values, q);
}

std::vector<int> counts_for(const TrigPolynomial& f, int (*per_axis)(int, int), int param) {
  std::vector<int> counts;
  for (int n : f.bounding_box().degrees()) counts.push_back(n == 0 ? 1 : per_axis(n, param));
  return counts;
}

void check_grid(const std::vector<int>& counts) {
  double total = 1.0;
  for (int c : counts) total *= c;
  if (total > 6.7e7) throw std::length_error("evaluation grid too large");
}

struct Search {
  Peak peak;
  std::vector<double> step;
};

// Coordinate pattern search for a local maximum of |f|. Stops once every
// step times the axis degree is below `tolerance`, so the phase error per
// axis is bounded independently of the degree.
void refine_peak(const TrigPolynomial& f, Search& s, double tolerance) {
  const int d = f.dim();
  TrigPolynomial::EvalBuffers buffers;
  std::vector<double> y;
  auto scaled_step = [&] {
    double largest = 0.0;
    for (int j = 0; j < d; ++j) largest = std::max(largest, s.step[j] * std::max(f.bounding_box().degree(j), 1));
    return largest;
  };
  for (int iter = 0; iter < 400 && scaled_step() >= tolerance; ++iter) {
    bool moved = false;
    for (int j = 0; j < d; ++j) {
      if (s.step[j] == 0.0) continue;
      for (double sign : {1.0, -1.0}) {
        y = s.peak.location;
        y[j] = std::fmod(y[j] + sign * s.step[j] + kTwoPi, kTwoPi);
        const double v = std::abs(f.evaluate_with(y, buffers));
        if (v > s.peak.value) {
          s.peak.value = v;
          s.peak.location.swap(y);
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      for (double& v : s.step) v *= 0.5;
    }
  }
}

// Index of each of the k largest entries of |values|, largest first.
std::vector<std::size_t> top_indices(const std::vector<std::complex<double>>& values, std::size_t k) {
  std::vector<double> mag(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mag[i] = std::norm(values[i]);
  std::vector<std::size_t> idx(values.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) { return mag[a] != mag[b] ? mag[a] > mag[b] : a < b; });
  idx.resize(k);
  return idx;
}

std::vector<double> grid_point(const std::vector<int>& counts, std::size_t flat) {
  std::vector<double> x(counts.size());
  for (int j = static_cast<int>(counts.size()) - 1; j >= 0; --j) {
    const auto c = static_cast<std::size_t>(counts[j]);
    x[j] = kTwoPi * static_cast<double>(flat % c) / static_cast<double>(c);
    flat /= c;
  }
  return x;
}

Peak peak_from_grid(const TrigPolynomial& f, const std::vector<int>& counts,
                    const std::vector<std::complex<double>>& values, std::size_t candidates) {
  // Every candidate is refined coarsely; only the best is finished.
  Search best;
  for (std::size_t i : top_indices(values, candidates)) {
    Search s;
    s.peak.location = grid_point(counts, i);
    s.peak.value = std::abs(values[i]);
    for (int c : counts) s.step.push_back(c == 1 ? 0.0 : kTwoPi / c / 2.0);
    refine_peak(f, s, 1e-3);
    if (s.peak.value > best.peak.value || best.peak.location.empty()) best = std::move(s);
  }
  refine_peak(f, best, 1e-9);
  return best.peak;
}

}  // namespace

double mean_abs_power(std::span<const std::complex<double>> values, double q) {
  if (values.empty()) throw std::invalid_argument("mean over an empty set");
  double sum = 0.0;
  for (const auto& v : values) sum += abs_power(v, q);
  return sum / static_cast<double>(values.size());
}

double discrete_norm_of_values(std::span<const std::complex<double>> values, double q) {
  if (values.empty()) throw std::invalid_argument("discrete norm over an empty point set");
  if (q < 1.0) throw std::invalid_argument("q must be at least 1");
  if (std::isinf(q)) {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
  return std::pow(mean_abs_power(values, q), 1.0 / q);
}

NormResult norm_l2_exact(const TrigPolynomial& f) {
  double sum = 0.0;
  for (const auto& c : f.coefficients()) sum += std::norm(c);
  NormResult r;
  r.value = std::sqrt(sum);
  r.q = 2.0;
  r.method = NormMethod::parseval;
  return r;
}

NormResult norm_lq_even_exact(const TrigPolynomial& f, int q) {
  if (q < 2 || q % 2 != 0) throw std::invalid_argument("exact grid norm needs an even q");
  const auto counts = counts_for(f, [](int n, int p) { return p * n + 1; }, q);
  check_grid(counts);
  NormResult r;
  r.value = std::pow(grid_mean_power(f, counts, q), 1.0 / q);
  r.q = q;
  r.method = NormMethod::exact_grid;
  return r;
}

NormResult norm_lq_quadrature(const TrigPolynomial& f, double q, int rho) {
  if (q < 1.0 || std::isinf(q)) throw std::invalid_argument("quadrature needs finite q >= 1");
  if (rho < 4) throw std::invalid_argument("oversampling factor must be at least 4");
  const auto coarse = counts_for(f, [](int n, int p) { return p * (2 * n + 1); }, rho);
  const auto fine = counts_for(f, [](int n, int p) { return p * (2 * n + 1); }, 2 * rho);
  check_grid(fine);
  const double v1 = std::pow(grid_mean_power(f, coarse, q), 1.0 / q);
  const double v2 = std::pow(grid_mean_power(f, fine, q), 1.0 / q);
  NormResult r;
  // The error of the finer rule decays at least like h^2 for |f|^q, so the
  // change between the rules bounds it.
  r.value = v2;
  r.q = q;
  r.method = NormMethod::quadrature;
  r.error_bound = std::abs(v1 - v2);
  return r;
}

NormResult norm_linf_certified(const TrigPolynomial& f, double delta, bool refine) {
  if (!(delta > 0.0 && delta <= 0.5)) throw std::invalid_argument("delta must lie in (0, 1/2]");
  const auto& deg = f.bounding_box().degrees();
  const int active = static_cast<int>(std::count_if(deg.begin(), deg.end(), [](int n) { return n > 0; }));
  std::vector<int> counts;
  for (int n : deg) {
    counts.push_back(n == 0 ? 1 : static_cast<int>(std::ceil(std::numbers::pi * active * n / delta)));
  }
  check_grid(counts);
  const auto values = evaluate_tensor_grid(f, equispaced_nodes(counts));
  std::size_t arg = 0;
  double grid_max = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    if (a > grid_max) {
      grid_max = a;
      arg = i;
    }
  }
  NormResult r;
  r.q = kInfinity;
  r.method = NormMethod::certified_sup;
  r.value = grid_max;
  r.argmax = grid_point(counts, arg);
  r.upper = grid_max / (1.0 - delta);
  if (refine && active > 0) {
    Peak p = peak_from_grid(f, counts, values, 1);
    if (p.value > r.value) {
      r.value = std::min(p.value, r.upper);
      r.argmax = std::move(p.location);
    }
  }
  r.error_bound = r.upper - r.value;
  return r;
}

Peak linf_peak(const TrigPolynomial& f) {
  std::vector<int> counts;
  for (int n : f.bounding_box().degrees()) counts.push_back(n == 0 ? 1 : 2 * (2 * n + 1));
  check_grid(counts);
  const auto values = evaluate_tensor_grid(f, equispaced_nodes(counts));
  return peak_from_grid(f, counts, values, 4);
}

NormResult discrete_norm(const TrigPolynomial& f, const PointSet& points, double q) {
  if (points.empty()) throw std::invalid_argument("discrete norm over an empty point set");
  const auto values = evaluate(f, points);
  NormResult r;
  r.value = discrete_norm_of_values(values, q);
  r.q = q;
  r.method = NormMethod::discrete;
  return r;
}

double lq_power(const TrigPolynomial& f, double q) {
  if (q < 1.0 || std::isinf(q)) throw std::invalid_argument("lq_power needs finite q >= 1");
  if (q == 2.0) {
    const double v = norm_l2_exact(f).value;
    return v * v;
  }
  const double rounded = std::round(q);
  if (rounded == q && static_cast<int>(rounded) % 2 == 0 && rounded <= 8.0) {
    return std::pow(norm_lq_even_exact(f, static_cast<int>(rounded)).value, q);
  }
  return std::pow(norm_lq_quadrature(f, q).value, q);
}

nlohmann::json to_json(const NormResult& r) {
  nlohmann::json j{{"value", r.value}, {"method", to_string(r.method)}, {"error_bound", r.error_bound}};
  if (std::isinf(r.q)) {
    j["q"] = "inf";
    j["upper"] = r.upper;
  } else {
    j["q"] = r.q;
  }
  return j;
}

const char* to_string(NormMethod method) {
  switch (method) {
    case NormMethod::parseval: return "parseval";
    case NormMethod::exact_grid: return "exact_grid";
    case NormMethod::quadrature: return "quadrature";
    case NormMethod::certified_sup: return "certified_sup";
    case NormMethod::discrete: return "discrete";
  }
  return "?";
}

}  // namespace unidisc
