#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "unidisc/point_set.hpp"
#include "unidisc/trigpoly.hpp"

namespace unidisc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class NormMethod { parseval, exact_grid, quadrature, certified_sup, discrete };

/// ||f||_q with respect to the normalized measure on [0, 2 pi)^d.
struct NormResult {
  double value = 0.0;
  double q = 2.0;
  NormMethod method = NormMethod::parseval;
  /// Zero for exact methods. For the sup norm, upper - value.
  double error_bound = 0.0;
  /// Certified upper end of the sup-norm bracket [value, upper].
  double upper = 0.0;
  /// Point where the sup-norm lower value is attained.
  std::vector<double> argmax;
};

NormResult norm_l2_exact(const TrigPolynomial& f);

/// Exact for even q: |f|^q has per-axis degree q N_j, so the mean over
/// q N_j + 1 equispaced nodes per axis is its constant coefficient.
NormResult norm_lq_even_exact(const TrigPolynomial& f, int q);

/// Mean of |f|^q over 2 rho (2 N_j + 1) nodes per axis; error_bound is the
/// change against the rho grid.
NormResult norm_lq_quadrature(const TrigPolynomial& f, double q, int rho = 4);

/// Grid maximum M with spacing h_j such that sum_j N_j h_j / 2 <= delta.
/// Since |f(x) - f(y)| <= sum N_j |x_j - y_j| ||f||_inf, the sup norm lies
/// in [M, M / (1 - delta)]. With `refine`, the lower value is raised by a
/// local search from the best nodes; it stays an attained value.
NormResult norm_linf_certified(const TrigPolynomial& f, double delta = 0.1, bool refine = true);

struct Peak {
  double value = 0.0;
  std::vector<double> location;
};

/// An attained value of |f| near its maximum: best nodes of a grid with
/// 2 (2 N_j + 1) nodes per axis, then coordinate pattern search.
Peak linf_peak(const TrigPolynomial& f);

/// ((1/m) sum |f(xi)|^q)^{1/q}, or max |f(xi)| for q = inf.
NormResult discrete_norm(const TrigPolynomial& f, const PointSet& points, double q);
/// Same from precomputed values; values summed in index order.
double discrete_norm_of_values(std::span<const std::complex<double>> values, double q);
/// (1/m) sum |v|^q in index order.
double mean_abs_power(std::span<const std::complex<double>> values, double q);

/// ||f||_q^q (q finite) by the exact route when available, else quadrature.
double lq_power(const TrigPolynomial& f, double q);

nlohmann::json to_json(const NormResult& r);
const char* to_string(NormMethod method);

}  // namespace unidisc
