#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kd::quadrature {

/// Composite Gauss-Legendre: `panels` equal sub-intervals, `points` nodes each.
struct Rule {
  std::size_t panels = 67;
  std::size_t points = 3;

  std::size_t nodes() const { return panels * points; }
};

struct Nodes {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
Nodes gauss_legendre(std::size_t n);

/// Composite nodes on [lo, hi].
Nodes composite(const Rule& rule, double lo, double hi);

using Integrand = std::function<double(std::span<const double>)>;

struct Result {
  double value = 0.0;
  /// |value - value at half the panel count|; a conservative error indicator.
  double error_estimate = 0.0;
};

/// Tensor-product integral over the box prod [lo_i, hi_i], dimension <= 3.
double integrate_box(const Integrand& f, std::span<const double> lo, std::span<const double> hi, const Rule& rule);

Result integrate_box_with_error(const Integrand& f, std::span<const double> lo, std::span<const double> hi,
                                const Rule& rule);

}  // namespace kd::quadrature
