#include "keydist/quadrature.hpp"

#include "keydist/errors.hpp"

#include <cmath>
#include <numbers>

namespace kd::quadrature {

Nodes gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
  Nodes out;
  out.x.resize(n);
  out.w.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    out.x[i] = -z;
    out.x[n - 1 - i] = z;
    out.w[i] = out.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n == 1) {
    out.x[0] = 0.0;
    out.w[0] = 2.0;
  }
  return out;
}

Nodes composite(const Rule& rule, double lo, double hi) {
  if (rule.panels == 0) throw DomainError("quadrature rule needs at least one panel");
  if (!(hi > lo)) throw DomainError("quadrature window must have hi > lo");
  const Nodes base = gauss_legendre(rule.points);
  const double width = (hi - lo) / static_cast<double>(rule.panels);
  Nodes out;
  out.x.reserve(rule.nodes());
  out.w.reserve(rule.nodes());
  for (std::size_t p = 0; p < rule.panels; ++p) {
    const double a = lo + width * static_cast<double>(p);
    for (std::size_t i = 0; i < base.x.size(); ++i) {
      out.x.push_back(a + 0.5 * width * (base.x[i] + 1.0));
      out.w.push_back(0.5 * width * base.w[i]);
    }
  }
  return out;
}

double integrate_box(const Integrand& f, std::span<const double> lo, std::span<const double> hi, const Rule& rule) {
  const std::size_t d = lo.size();
  if (d == 0 || d > 3 || hi.size() != d) throw DomainError("tensor quadrature supports dimensions 1..3");
  std::vector<Nodes> axes;
  for (std::size_t i = 0; i < d; ++i) axes.push_back(composite(rule, lo[i], hi[i]));

  const std::size_t n = rule.nodes();
  double total = 0.0;
  std::vector<double> point(d);
  std::size_t count = 1;
  for (std::size_t i = 0; i < d; ++i) count *= n;
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::size_t rem = flat;
    double weight = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t k = rem % n;
      rem /= n;
      point[i] = axes[i].x[k];
      weight *= axes[i].w[k];
    }
    total += weight * f(point);
  }
  return total;
}

Result integrate_box_with_error(const Integrand& f, std::span<const double> lo, std::span<const double> hi,
                                const Rule& rule) {
  Result r;
  r.value = integrate_box(f, lo, hi, rule);
  Rule coarse = rule;
  coarse.panels = std::max<std::size_t>(1, rule.panels / 2);
  r.error_estimate = std::abs(r.value - integrate_box(f, lo, hi, coarse));
  return r;
}

}  // namespace kd::quadrature
