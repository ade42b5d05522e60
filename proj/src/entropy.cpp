#include "keydist/entropy.hpp"

#include "keydist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace kd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_order(DivergenceOrder order) {
  if (!(order.alpha >= 0.0)) throw DomainError("divergence order must be >= 0");
}

double log_base(double x, double base) { return std::log(x) / std::log(base); }

bool identical(const FiniteDistribution& a, const FiniteDistribution& b) {
  if (a.is_exact() && b.is_exact()) return a.exact_weights() == b.exact_weights();
  return a.weights() == b.weights();
}

// Nonnegative (standard-sign) divergence in base b.
double standard_divergence(const std::vector<double>& f, const std::vector<double>& g, double alpha, double b) {
  const std::size_t n = f.size();
  if (alpha == 0.0) {
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (f[i] > 0.0) mass += g[i];
    return mass > 0.0 ? -log_base(mass, b) : kInf;
  }
  if (std::abs(alpha - 1.0) < 1e-9) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (f[i] == 0.0) continue;
      if (g[i] == 0.0) return kInf;
      total += f[i] * std::log(f[i] / g[i]);
    }
    return std::max(0.0, total) / std::log(b);
  }
  if (alpha > 1e9) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (f[i] == 0.0) continue;
      if (g[i] == 0.0) return kInf;
      best = std::max(best, f[i] / g[i]);
    }
    return log_base(best, b);
  }
  if (alpha == 0.5) {
    double bc = 0.0;
    for (std::size_t i = 0; i < n; ++i) bc += std::sqrt(f[i] * g[i]);
    return bc > 0.0 ? -2.0 * log_base(bc, b) : kInf;
  }
  if (alpha == 2.0) {
    double ratio = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (f[i] == 0.0) continue;
      if (g[i] == 0.0) return kInf;
      ratio += f[i] * f[i] / g[i];
    }
    return log_base(ratio, b);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (f[i] == 0.0) continue;
    if (g[i] == 0.0) {
      if (alpha > 1.0) return kInf;
      continue;
    }
    s += std::exp(alpha * std::log(f[i]) + (1.0 - alpha) * std::log(g[i]));
  }
  if (s == 0.0) return kInf;
  return log_base(s, b) / (alpha - 1.0);
}

std::vector<double> sorted_support_weights(const FiniteDistribution& f) {
  std::vector<double> w;
  for (double v : f.weights())
    if (v > 0.0) w.push_back(v);
  return w;
}

}  // namespace

double renyi_divergence(const FiniteDistribution& f, const FiniteDistribution& f_plus, DivergenceOrder order,
                        const Alphabet& base, DivergenceSign sign) {
  check_order(order);
  if (f.size() != f_plus.size()) throw ValidationError("divergence needs distributions on the same alphabet");
  if (base.size < 2) throw ValidationError("log base |A| must be >= 2");
  if (identical(f, f_plus)) return 0.0;
  const double d = standard_divergence(f.weights(), f_plus.weights(), order.alpha, static_cast<double>(base.size));
  return sign == DivergenceSign::standard ? d : -d;
}

double kl_divergence(const FiniteDistribution& f, const FiniteDistribution& f_plus, double base) {
  if (f.size() != f_plus.size()) throw ValidationError("divergence needs distributions on the same alphabet");
  if (identical(f, f_plus)) return 0.0;
  return standard_divergence(f.weights(), f_plus.weights(), 1.0, base);
}

Rational pinsker_lower_bound(const FiniteDistribution& f, const FiniteDistribution& f_plus) {
  Rational l1 = exact_trace_distance(f, f_plus);
  return l1 * l1 / 2;
}

double renyi_entropy(const FiniteDistribution& f, DivergenceOrder order, EntropyMode mode) {
  if (mode == EntropyMode::strict && f.alphabet().power != 1)
    throw ValidationError("strict Rényi entropy needs |X| = |A| (power 1); use relaxed mode for A^m");
  return renyi_entropy(f, order, static_cast<double>(f.size()));
}

double renyi_entropy(const FiniteDistribution& f, DivergenceOrder order, double base) {
  check_order(order);
  if (!(base > 1.0)) throw DomainError("entropy log base must exceed 1");
  const std::vector<double> w = sorted_support_weights(f);
  const double a = order.alpha;
  if (a == 0.0) return log_base(static_cast<double>(w.size()), base);
  if (order.is_one()) {
    double h = 0.0;
    for (double v : w) h -= v * std::log(v);
    return std::max(0.0, h) / std::log(base);
  }
  if (order.is_infinite()) return min_entropy(f, base);
  if (w.size() == 1) return 0.0;
  double s = 0.0;
  for (double v : w) s += std::exp(a * std::log(v));
  return std::max(0.0, log_base(s, base) / (1.0 - a));
}

double min_entropy(const FiniteDistribution& f) { return min_entropy(f, static_cast<double>(f.alphabet().size)); }

double min_entropy(const FiniteDistribution& f, double base) {
  if (!(base > 1.0)) throw DomainError("entropy log base must exceed 1");
  const double pmax = f.max_weight();
  return pmax >= 1.0 ? 0.0 : -log_base(pmax, base);
}

double shannon_entropy_nats(const FiniteDistribution& f) {
  double h = 0.0;
  for (double v : f.weights())
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

// ---------------------------------------------------------------------------
// Continuous densities

void ContinuousDensity::validate() const {
  if (!pdf) throw ValidationError("continuous density has no evaluator");
  if (dim == 0 || dim > 3) throw ValidationError("continuous densities support dimensions 1..3");
  if (lo.size() != dim || hi.size() != dim) throw ValidationError("integration window does not match dimension");
  for (std::size_t i = 0; i < dim; ++i)
    if (!(hi[i] > lo[i])) throw ValidationError("integration window must have hi > lo");
}

ContinuousDensity ContinuousDensity::normal(double mean, double sd) {
  if (!(sd > 0.0)) throw DomainError("normal density needs sd > 0");
  ContinuousDensity d;
  d.pdf = [mean, sd](std::span<const double> x) {
    const double z = (x[0] - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
  };
  d.lo = {mean - 8.0 * sd};
  d.hi = {mean + 8.0 * sd};
  d.rule = {67, 3};
  return d;
}

ContinuousDensity ContinuousDensity::uniform(double lo, double hi) {
  if (!(hi > lo)) throw DomainError("uniform density needs hi > lo");
  ContinuousDensity d;
  const double h = 1.0 / (hi - lo);
  d.pdf = [lo, hi, h](std::span<const double> x) { return (x[0] >= lo && x[0] <= hi) ? h : 0.0; };
  d.lo = {lo};
  d.hi = {hi};
  return d;
}

DifferentialEntropy differential_entropy(const ContinuousDensity& f) {
  f.validate();
  const auto mass = quadrature::integrate_box(f.pdf, f.lo, f.hi, f.rule);
  if (std::abs(mass - 1.0) > f.tolerance)
    throw ValidationError("density integrates to " + std::to_string(mass) + " over its window");
  auto integrand = [&f](std::span<const double> x) {
    const double v = f(x);
    return v > 0.0 ? -v * std::log(v) : 0.0;
  };
  const auto r = quadrature::integrate_box_with_error(integrand, f.lo, f.hi, f.rule);
  return {r.value, r.error_estimate, mass};
}

// ---------------------------------------------------------------------------
// AEP

double aep_estimate(const FiniteDistribution& f, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("AEP estimate needs n >= 1");
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(f.weights().begin(), f.weights().end());
  std::vector<std::size_t> counts(f.size(), 0);
  for (std::size_t i = 0; i < n; ++i) ++counts[pick(rng)];
  // Group symbols by weight so equiprobable sources give -ln p with no rounding.
  std::map<double, std::size_t> by_weight;
  for (std::size_t s = 0; s < counts.size(); ++s)
    if (counts[s] > 0) by_weight[f[s]] += counts[s];
  double estimate = 0.0;
  for (const auto& [w, c] : by_weight)
    estimate += (static_cast<double>(c) / static_cast<double>(n)) * -std::log(w);
  return estimate;
}

double aep_estimate(const ContinuousDensity& f, std::size_t n, std::uint64_t seed) {
  f.validate();
  if (f.dim != 1) throw DomainError("inverse-CDF sampling is implemented for 1-D densities");
  if (n == 0) throw DomainError("AEP estimate needs n >= 1");
  constexpr std::size_t kCells = 20000;
  const double lo = f.lo[0];
  const double width = (f.hi[0] - lo) / static_cast<double>(kCells);
  const auto gl = quadrature::gauss_legendre(3);
  std::vector<double> cdf(kCells + 1, 0.0);
  for (std::size_t c = 0; c < kCells; ++c) {
    const double a = lo + width * static_cast<double>(c);
    double m = 0.0;
    for (std::size_t k = 0; k < gl.x.size(); ++k) {
      const double x = a + 0.5 * width * (gl.x[k] + 1.0);
      m += 0.5 * width * gl.w[k] * f(std::span<const double>(&x, 1));
    }
    cdf[c + 1] = cdf[c] + m;
  }
  const double total = cdf.back();
  if (!(total > 0.0)) throw ValidationError("density has no mass on its window");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = uni(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t c = static_cast<std::size_t>(std::distance(cdf.begin(), it));
    c = std::clamp<std::size_t>(c, 1, kCells) - 1;
    const double cell_mass = cdf[c + 1] - cdf[c];
    const double frac = cell_mass > 0.0 ? (u - cdf[c]) / cell_mass : 0.5;
    const double x = lo + width * (static_cast<double>(c) + frac);
    const double fx = f(std::span<const double>(&x, 1));
    acc += -std::log(std::max(fx, std::numeric_limits<double>::min()));
  }
  return acc / static_cast<double>(n);
}

namespace {
template <class Density>
std::vector<AepPoint> convergence_of(const Density& f, std::uint64_t seed) {
  std::vector<AepPoint> out;
  for (std::size_t n : {std::size_t{100}, std::size_t{1000}, std::size_t{10000}}) out.push_back({n, aep_estimate(f, n, seed)});
  return out;
}
}  // namespace

std::vector<AepPoint> aep_convergence(const FiniteDistribution& f, std::uint64_t seed) { return convergence_of(f, seed); }
std::vector<AepPoint> aep_convergence(const ContinuousDensity& f, std::uint64_t seed) { return convergence_of(f, seed); }

}  // namespace kd
