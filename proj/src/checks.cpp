#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "unidisc/parallel.hpp"
#include "unidisc/universality.hpp"

namespace unidisc {

namespace {

// Kernel orders with zero degrees read as order one.
std::vector<int> kernel_orders(const FrequencyBox& box) {
  std::vector<int> orders;
  for (int n : box.degrees()) orders.push_back(std::max(n, 1));
  return orders;
}

double norm_of(const TrigPolynomial& f, double q) {
  if (std::isinf(q)) return linf_peak(f).value;
  return std::pow(lq_power(f, q), 1.0 / q);
}

double coefficient_norm(std::span<const double> a, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  for (double v : a) sum += std::pow(std::abs(v), q);
  return std::pow(sum / static_cast<double>(a.size()), 1.0 / q);
}

}  // namespace

KernelSumResult kernel_sum_check(const PointSet& input, const FrequencyBox& box, int x_samples,
                                 std::uint64_t seed) {
  const PointSet points = input.scale_to_torus();
  const int d = points.dim();
  if (box.dim() != d) throw std::invalid_argument("box dimension does not match the points");
  const auto profile = density_profile(points, box);
  const auto orders = kernel_orders(box);
  const auto coords = points.torus_coordinates();

  std::vector<double> xs;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
  for (int i = 0; i < x_samples * d; ++i) xs.push_back(uniform(rng));
  xs.insert(xs.end(), coords.begin(), coords.end());

  const std::size_t count = xs.size() / static_cast<std::size_t>(d);
  std::vector<double> sums(count);
  parallel_for(count, [&](std::size_t t) {
    const double* x = xs.data() + t * static_cast<std::size_t>(d);
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double prod = 1.0;
      for (int j = 0; j < d && prod != 0.0; ++j) {
        prod *= std::abs(vallee_poussin_value(orders[j], x[j] - coords[i * d + j]));
      }
      sum += prod;
    }
    sums[t] = sum;
  });

  KernelSumResult r;
  r.b_max = profile.max_count;
  r.volume_index = box.volume_index();
  const auto best = static_cast<std::size_t>(std::max_element(sums.begin(), sums.end()) - sums.begin());
  r.value = sums[best] / (static_cast<double>(r.b_max) * static_cast<double>(r.volume_index));
  r.argmax.assign(xs.begin() + static_cast<std::ptrdiff_t>(best * d),
                  xs.begin() + static_cast<std::ptrdiff_t>((best + 1) * d));
  return r;
}

double vp_operator_ratio(const PointSet& input, const FrequencyBox& box, double q,
                         std::span<const double> a, std::uint64_t b_max) {
  const PointSet points = input.scale_to_torus();
  const int d = points.dim();
  const std::size_t m = points.size();
  if (a.size() != m) throw std::invalid_argument("one coefficient per point is required");
  const auto orders = kernel_orders(box);
  const TrigPolynomial kernel = tensor_kernel(KernelKind::vallee_poussin, orders);
  const FrequencyBox& out_box = kernel.bounding_box();

  // Row-major sum over points of a_nu e^{-i(k, xi)}, built axis by axis.
  std::vector<Complex> acc(out_box.cardinality(), Complex{0.0, 0.0});
  std::vector<Complex> row;
  std::vector<Complex> next;
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i] == 0.0) continue;
    row.assign(1, Complex{a[i], 0.0});
    for (int j = 0; j < d; ++j) {
      const int deg = out_box.degree(j);
      const double xi = points.torus_coordinate(i, j);
      next.resize(row.size() * static_cast<std::size_t>(2 * deg + 1));
      std::size_t pos = 0;
      for (const Complex& v : row) {
        for (int k = -deg; k <= deg; ++k) next[pos++] = v * std::polar(1.0, -k * xi);
      }
      row.swap(next);
    }
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += row[k];
  }
  const auto& vhat = kernel.coefficients();
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] *= vhat[k] / static_cast<double>(m);
  const TrigPolynomial g(out_box, std::move(acc));

  const double cells = static_cast<double>(box.volume_index()) * std::ldexp(1.0, 2 * d);
  const double density = static_cast<double>(b_max) * cells / static_cast<double>(m);
  const double scale = std::isinf(q) ? density : std::pow(density, 1.0 - 1.0 / q);
  return norm_of(g, q) / (scale * coefficient_norm(a, q));
}

OperatorCheckResult vp_operator_check(const PointSet& input, const FrequencyBox& box, double q,
                                      int trials, std::uint64_t seed) {
  const PointSet points = input.scale_to_torus();
  const int d = points.dim();
  const std::size_t m = points.size();
  const auto orders = kernel_orders(box);
  OperatorCheckResult r;
  r.b_max = density_profile(points, box).max_count;
  r.trials = trials;
  std::vector<double> ratios(static_cast<std::size_t>(std::max(trials, 0)));
  parallel_for(ratios.size(), [&](std::size_t t) {
    std::mt19937_64 rng(mix_seed(seed, t));
    std::vector<double> a(m);
    const auto family = static_cast<CoefficientFamily>(t % 3);
    if (family == CoefficientFamily::gaussian) {
      std::normal_distribution<double> normal;
      for (double& v : a) v = normal(rng);
    } else if (family == CoefficientFamily::signs) {
      std::bernoulli_distribution coin;
      for (double& v : a) v = coin(rng) ? 1.0 : -1.0;
    } else {
      std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
      std::vector<double> x0(static_cast<std::size_t>(d));
      for (double& v : x0) v = uniform(rng);
      std::vector<double> diff(static_cast<std::size_t>(d));
      for (std::size_t i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) diff[j] = x0[j] - points.torus_coordinate(i, j);
        a[i] = tensor_kernel_value(KernelKind::vallee_poussin, orders, diff) < 0.0 ? -1.0 : 1.0;
      }
    }
    ratios[t] = vp_operator_ratio(points, box, q, a, r.b_max);
  });
  for (std::size_t t = 0; t < ratios.size(); ++t) {
    r.max_ratio = std::max(r.max_ratio, ratios[t]);
    switch (static_cast<CoefficientFamily>(t % 3)) {
      case CoefficientFamily::gaussian: r.max_gaussian = std::max(r.max_gaussian, ratios[t]); break;
      case CoefficientFamily::signs: r.max_signs = std::max(r.max_signs, ratios[t]); break;
      case CoefficientFamily::aligned: r.max_aligned = std::max(r.max_aligned, ratios[t]); break;
    }
  }
  return r;
}

OneSidedResult one_sided_check(const PointSet& input, const FrequencyBox& box, double q, int trials,
                               std::uint64_t seed) {
  const PointSet points = input.scale_to_torus();
  OneSidedResult r;
  r.b_max = density_profile(points, box).max_count;
  r.enough_points = points.size() >= box.cardinality();
  r.trials = trials;
  const auto coords = points.torus_coordinates();
  std::vector<double> ratios(static_cast<std::size_t>(std::max(trials, 0)));
  parallel_for(ratios.size(), [&](std::size_t t) {
    const SampleKind kind = t % 4 == 3 ? SampleKind::spike : SampleKind::gaussian;
    const TrigPolynomial f = random_poly(box, mix_seed(seed, t), kind);
    ratios[t] = discrete_norm_of_values(evaluate_flat(f, coords), q) / norm_of(f, q);
  });
  for (double v : ratios) r.max_ratio = std::max(r.max_ratio, v);
  return r;
}

PointSet snap_axis(const PointSet& points, const FrequencyBox& box, int axis) {
  const int d = points.dim();
  const auto cells = static_cast<std::uint64_t>(4 * std::max(box.degree(axis), 1));
  const bool power_of_two = (cells & (cells - 1)) == 0;
  if (points.is_dyadic() && power_of_two && cells <= (std::uint64_t{1} << points.exponent())) {
    const std::uint64_t keep = ~((std::uint64_t{1} << points.exponent()) / cells - 1);
    auto nums = points.numerators();
    for (std::size_t i = 0; i < points.size(); ++i) nums[i * d + axis] &= keep;
    return PointSet::dyadic(d, points.exponent(), std::move(nums), Domain::torus);
  }
  auto coords = points.torus_coordinates();
  const double width = kTwoPi / static_cast<double>(cells);
  for (std::size_t i = 0; i < points.size(); ++i) {
    double& x = coords[i * d + axis];
    double v = x / width;
    const double nearest = std::nearbyint(v);
    if (std::abs(v - nearest) <= 1e-9 * static_cast<double>(cells)) v = nearest;
    x = std::fmod(std::floor(v), static_cast<double>(cells)) * width;
  }
  return PointSet::floating(d, std::move(coords), Domain::torus);
}

SnapResult snap_compare(const PointSet& input, const SubspaceIndex& s, int margin, double q,
                        int trials, std::uint64_t seed) {
  if (std::isinf(q)) throw std::invalid_argument("snap comparison needs finite q");
  const PointSet points = input.scale_to_torus();
  const int d = points.dim();
  std::vector<int> degrees;
  for (int v : s.s) {
    if (v + margin < 2) throw std::invalid_argument("margin too small for the snapping grid");
    degrees.push_back(1 << (v + margin - 2));
  }
  const FrequencyBox grid_box(degrees);
  const FrequencyBox poly_box = dyadic_box(s);
  const auto profile = density_profile(points, grid_box);

  SnapResult r;
  r.uniform_cells = profile.uniform();
  r.b_max = profile.max_count;
  r.trials = trials;
  const auto base = points.torus_coordinates();
  std::vector<std::vector<double>> snapped;
  for (int j = 0; j < d; ++j) snapped.push_back(snap_axis(points, grid_box, j).torus_coordinates());

  std::vector<double> normalized(static_cast<std::size_t>(std::max(trials, 0)));
  std::vector<double> raw(normalized.size());
  parallel_for(normalized.size(), [&](std::size_t t) {
    const SampleKind kind = t % 4 == 3 ? SampleKind::spike : SampleKind::gaussian;
    const TrigPolynomial f = random_poly(poly_box, mix_seed(seed, t), kind);
    const double norm_q = lq_power(f, q);
    const auto at_points = evaluate_flat(f, base);
    for (int j = 0; j < d; ++j) {
      const auto at_snapped = evaluate_flat(f, snapped[j]);
      double sum = 0.0;
      for (std::size_t i = 0; i < at_points.size(); ++i) {
        sum += std::abs(std::pow(std::abs(at_points[i]), q) - std::pow(std::abs(at_snapped[i]), q));
      }
      const double change = sum / static_cast<double>(at_points.size()) / norm_q;
      const double ratio = static_cast<double>(1 << s.s[j]) / degrees[j];
      raw[t] = std::max(raw[t], change);
      normalized[t] = std::max(normalized[t], change / ratio);
    }
  });
  for (std::size_t t = 0; t < raw.size(); ++t) {
    r.max_raw = std::max(r.max_raw, raw[t]);
    r.max_normalized = std::max(r.max_normalized, normalized[t]);
  }
  return r;
}

nlohmann::json to_json(const KernelSumResult& r) {
  return {{"value", r.value}, {"argmax", r.argmax}, {"b_max", r.b_max}, {"volume_index", r.volume_index}};
}

nlohmann::json to_json(const OperatorCheckResult& r) {
  return {{"max_ratio", r.max_ratio},     {"max_gaussian", r.max_gaussian},
          {"max_signs", r.max_signs},     {"max_aligned", r.max_aligned},
          {"b_max", r.b_max},             {"trials", r.trials}};
}

nlohmann::json to_json(const OneSidedResult& r) {
  return {{"max_ratio", r.max_ratio},
          {"b_max", r.b_max},
          {"enough_points", r.enough_points},
          {"trials", r.trials}};
}

nlohmann::json to_json(const SnapResult& r) {
  return {{"max_normalized", r.max_normalized},
          {"max_raw", r.max_raw},
          {"uniform_cells", r.uniform_cells},
          {"b_max", r.b_max},
          {"trials", r.trials}};
}

}  // namespace unidisc
