#include "keydist/semigroup.hpp"

#include "keydist/errors.hpp"
#include "keydist/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace kd {

// ---------------------------------------------------------------------------
// CovSpec

double CovSpec::rho(std::size_t i, std::size_t j) const {
  if (i == j) return 1.0;
  if (i > j) std::swap(i, j);
  const std::size_t d = dim();
  // Offset of row i in the packed upper triangle.
  const std::size_t offset = i * d - i * (i + 1) / 2;
  return correlations.at(offset + (j - i - 1));
}

Eigen::VectorXd CovSpec::mu() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < mean.size(); ++i) m(static_cast<Eigen::Index>(i)) = mean[i];
  return m;
}

void CovSpec::validate() const {
  const std::size_t d = dim();
  if (d == 0) throw ValidationError("covariance needs dimension >= 1");
  if (correlations.size() != d * (d - 1) / 2)
    throw ValidationError("expected " + std::to_string(d * (d - 1) / 2) + " correlations for d = " + std::to_string(d));
  if (!mean.empty() && mean.size() != d) throw ValidationError("mean has the wrong dimension");
  for (double v : variances)
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("variances must be finite and > 0");
  for (double r : correlations)
    if (!(r > -1.0 && r < 1.0)) throw ValidationError("correlations must lie in (-1, 1)");
  if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("time scale t must be > 0");
  Eigen::LLT<Eigen::MatrixXd> llt(assemble_sigma(*this));
  if (llt.info() != Eigen::Success) throw ValidationError("Sigma is not positive definite");
}

CovSpec CovSpec::identity(std::size_t d, double t) {
  CovSpec s;
  s.variances.assign(d, 1.0);
  s.correlations.assign(d * (d - 1) / 2, 0.0);
  s.t = t;
  return s;
}

CovSpec random_cov_spec(std::size_t d, std::uint64_t seed, double t) {
  if (d == 0) throw DomainError("covariance needs dimension >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> var(0.5, 2.0);
  std::normal_distribution<double> n01;
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd v(n, n + 1);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= n; ++j) v(i, j) = n01(rng);
  v.rowwise().normalize();
  const Eigen::MatrixXd c = v * v.transpose();
  CovSpec s;
  s.variances.clear();
  for (std::size_t i = 0; i < d; ++i) s.variances.push_back(var(rng));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) s.correlations.push_back(c(i, j));
  s.t = t;
  s.validate();
  return s;
}

Eigen::MatrixXd assemble_sigma(const CovSpec& spec) {
  const auto d = static_cast<Eigen::Index>(spec.dim());
  Eigen::MatrixXd s(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      s(i, j) = i == j ? spec.variances[ui]
                       : spec.rho(ui, uj) * std::sqrt(spec.variances[ui] * spec.variances[uj]);
    }
  return s;
}

// ---------------------------------------------------------------------------
// Determinants

double det_closed_form(const CovSpec& spec) {
  const auto& v = spec.variances;
  const std::size_t d = spec.dim();
  if (d == 2) return v[0] * v[1] * (1.0 - spec.rho(0, 1) * spec.rho(0, 1));
  if (d == 3) {
    const double a = spec.rho(0, 1), b = spec.rho(0, 2), c = spec.rho(1, 2);
    return v[0] * v[1] * v[2] * (1.0 - a * a - b * b - c * c + 2.0 * a * b * c);
  }
  if (d == 4) {
    const double r12 = spec.rho(0, 1), r13 = spec.rho(0, 2), r14 = spec.rho(0, 3);
    const double r23 = spec.rho(1, 2), r24 = spec.rho(1, 3), r34 = spec.rho(2, 3);
    const double poly = 1.0 - r12 * r12 - r13 * r13 - r14 * r14 - r23 * r23 - r24 * r24 - r34 * r34 +
                        r12 * r12 * r34 * r34 + r13 * r13 * r24 * r24 + r14 * r14 * r23 * r23 +
                        2.0 * (r12 * r13 * r23 + r12 * r14 * r24 + r13 * r14 * r34 + r23 * r24 * r34) -
                        2.0 * (r13 * r14 * r23 * r24 + r12 * r14 * r23 * r34 + r12 * r13 * r24 * r34);
    return v[0] * v[1] * v[2] * v[3] * poly;
  }
  throw DomainError("closed-form determinants exist for d in {2, 3, 4}");
}

double table_det4_as_printed(const CovSpec& spec) {
  if (spec.dim() != 4) throw DomainError("the tabulated quartic form is for d = 4");
  const auto& v = spec.variances;
  const double r12 = spec.rho(0, 1), r13 = spec.rho(0, 2), r14 = spec.rho(0, 3);
  const double r23 = spec.rho(1, 2), r24 = spec.rho(1, 3), r34 = spec.rho(2, 3);
  const double poly = 1.0 - r12 * r12 - r13 * r13 - r14 * r14 - r23 * r23 - r24 * r24 - r34 * r34 +
                      r12 * r12 * r34 * r34 + r13 * r13 * r24 * r24 + r14 * r14 * r23 * r23 +
                      2.0 * (r12 * r13 * r23 + r12 * r14 * r24 + r13 * r14 * r34 + r23 * r24 * r34) -
                      2.0 * (r13 * r14 * r23 * r24 + r12 * r14 * r23 * r24 + r12 * r13 * r23 * r34);
  return v[0] * v[1] * v[2] * v[3] * poly;
}

double det_permutation(const Eigen::MatrixXd& a) {
  const auto n = static_cast<std::size_t>(a.rows());
  if (a.rows() != a.cols()) throw ValidationError("determinant needs a square matrix");
  if (n > 8) throw CapExceeded("permutation expansion is capped at 8 x 8");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  double total = 0.0;
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    double prod = inversions % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) prod *= a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(perm[k]));
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

SigmaReport build_sigma(const CovSpec& spec) {
  spec.validate();
  SigmaReport r;
  r.sigma = assemble_sigma(spec);
  r.det_lu = r.sigma.partialPivLu().determinant();
  const std::size_t d = spec.dim();
  if (d >= 2 && d <= 4) r.det_closed_form = det_closed_form(spec);
  if (d <= 8) r.det_permutation = det_permutation(r.sigma);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.sigma);
  r.eigenvalues = es.eigenvalues();
  r.det_spectral = r.eigenvalues.prod();
  const double scale = std::max(std::abs(r.det_lu), 1e-300);
  for (const auto& other : {r.det_closed_form, r.det_permutation, std::optional<double>(r.det_spectral)})
    if (other && std::abs(*other - r.det_lu) > 1e-10 * scale)
      throw std::logic_error("determinant paths disagree beyond 1e-10");
  return r;
}

// ---------------------------------------------------------------------------
// Inverses

Eigen::MatrixXd inverse_sigma(const CovSpec& spec) {
  spec.validate();
  const Eigen::MatrixXd s = assemble_sigma(spec);
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  return llt.solve(Eigen::MatrixXd::Identity(s.rows(), s.cols()));
}

Eigen::MatrixXd inverse_sigma_closed_form(const CovSpec& spec) {
  spec.validate();
  const auto& v = spec.variances;
  const std::size_t d = spec.dim();
  if (d == 2) {
    const double r = spec.rho(0, 1);
    const double c = std::sqrt(v[0] * v[1]);
    Eigen::MatrixXd m(2, 2);
    m << v[1], -r * c, -r * c, v[0];
    return m / (v[0] * v[1] * (1.0 - r * r));
  }
  if (d == 3) {
    const double r12 = spec.rho(0, 1), r13 = spec.rho(0, 2), r23 = spec.rho(1, 2);
    const double s12 = std::sqrt(v[0] * v[1]), s13 = std::sqrt(v[0] * v[2]), s23 = std::sqrt(v[1] * v[2]);
    Eigen::MatrixXd m(3, 3);
    m(0, 0) = (1.0 - r23 * r23) * v[1] * v[2];
    m(1, 1) = (1.0 - r13 * r13) * v[0] * v[2];
    m(2, 2) = (1.0 - r12 * r12) * v[0] * v[1];
    m(0, 1) = m(1, 0) = (r13 * r23 - r12) * v[2] * s12;
    m(0, 2) = m(2, 0) = (r12 * r23 - r13) * v[1] * s13;
    m(1, 2) = m(2, 1) = (r12 * r13 - r23) * v[0] * s23;
    const double det = v[0] * v[1] * v[2] * (1.0 - r12 * r12 - r13 * r13 - r23 * r23 + 2.0 * r12 * r13 * r23);
    return m / det;
  }
  throw DomainError("closed-form inverses exist for d in {2, 3}");
}

// ---------------------------------------------------------------------------
// Kernel

double gaussian_pdf(std::span<const double> x, std::span<const double> mean, const Eigen::MatrixXd& cov) {
  const auto d = cov.rows();
  if (static_cast<Eigen::Index>(x.size()) != d || static_cast<Eigen::Index>(mean.size()) != d)
    throw ValidationError("point and covariance dimensions differ");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw ValidationError("covariance is not positive definite");
  Eigen::VectorXd diff(d);
  for (Eigen::Index i = 0; i < d; ++i) diff(i) = x[static_cast<std::size_t>(i)] - mean[static_cast<std::size_t>(i)];
  const Eigen::VectorXd w = llt.matrixL().solve(diff);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
  const double log_norm = 0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + log_det);
  return std::exp(-0.5 * w.squaredNorm() - log_norm);
}

double kernel_pdf(std::span<const double> x, const CovSpec& spec) {
  const Eigen::VectorXd mu = spec.mu();
  return gaussian_pdf(x, std::span<const double>(mu.data(), static_cast<std::size_t>(mu.size())),
                      spec.t * assemble_sigma(spec));
}

double kernel_mass(const CovSpec& spec, const quadrature::Rule& rule) {
  spec.validate();
  const double half = 8.0 * std::sqrt(spec.t * *std::max_element(spec.variances.begin(), spec.variances.end()));
  const Eigen::VectorXd mu = spec.mu();
  std::vector<double> lo, hi;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    lo.push_back(mu(i) - half);
    hi.push_back(mu(i) + half);
  }
  const Eigen::MatrixXd cov = spec.t * assemble_sigma(spec);
  const std::vector<double> m(mu.data(), mu.data() + mu.size());
  return quadrature::integrate_box([&](std::span<const double> x) { return gaussian_pdf(x, m, cov); }, lo, hi, rule);
}

// ---------------------------------------------------------------------------
// P_t

namespace {

// Standard-normal-weighted tensor grid on [-window, window]^d.
struct ZGrid {
  std::size_t d = 1;
  std::vector<double> z;  // 1-D nodes
  std::vector<double> w;  // 1-D weights times phi(z)
  std::vector<bool> outer;  // node lies in an outermost panel
  double peak_weight = 0.0;
};

ZGrid make_grid(std::size_t d, const ApplyOptions& o) {
  if (d == 0 || d > 3) throw DomainError("quadrature P_t supports dimensions 1..3; use Monte Carlo beyond");
  ZGrid g;
  g.d = d;
  const auto nodes = quadrature::composite(o.rule, -o.window, o.window);
  const double panel = 2.0 * o.window / static_cast<double>(o.rule.panels);
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    g.z.push_back(nodes.x[i]);
    g.w.push_back(nodes.w[i] * std::exp(-0.5 * nodes.x[i] * nodes.x[i]) / std::sqrt(2.0 * std::numbers::pi));
    g.outer.push_back(std::abs(nodes.x[i]) > o.window - panel);
  }
  return g;
}

Eigen::MatrixXd cholesky_factor(const CovSpec& spec) {
  spec.validate();
  Eigen::LLT<Eigen::MatrixXd> llt(assemble_sigma(spec));
  return llt.matrixL();
}

double quadrature_point(const TestFunction& f, double t, const Eigen::MatrixXd& l, const ZGrid& g,
                        std::span<const double> x) {
  const std::size_t d = g.d;
  const std::size_t n = g.z.size();
  std::size_t count = 1;
  for (std::size_t i = 0; i < d; ++i) count *= n;
  const double st = std::sqrt(t);
  std::vector<double> y(d), z(d);
  double total = 0.0, peak = 0.0, outer_peak = 0.0;
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::size_t rem = flat;
    double w = 1.0;
    bool outer = false;
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t k = rem % n;
      rem /= n;
      z[i] = g.z[k];
      w *= g.w[k];
      outer = outer || g.outer[k];
    }
    for (std::size_t i = 0; i < d; ++i) {
      double acc = x[i];
      for (std::size_t j = 0; j <= i; ++j)
        acc += st * l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * z[j];
      y[i] = acc;
    }
    const double v = w * f(y);
    total += v;
    const double a = std::abs(v);
    peak = std::max(peak, a);
    if (outer) outer_peak = std::max(outer_peak, a);
  }
  // Integrable test functions are negligible where the Gaussian weight is.
  if (!std::isfinite(total) || (outer_peak > 1e-10 && outer_peak >= 1e-3 * peak))
    throw DomainError("integrand does not decay inside the Gaussian window; P_t f looks divergent");
  return total;
}

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Averages f(x + sum_k sqrt(times[k]) L z_k) over independent z_k.
McEstimate monte_carlo_point(const TestFunction& f, const std::vector<double>& times, const Eigen::MatrixXd& l,
                             std::span<const double> x, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw DomainError("Monte Carlo needs at least 2 samples");
  const std::size_t d = x.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  std::vector<double> y(d), z(d);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < d; ++i) y[i] = x[i];
    for (double t : times) {
      const double st = std::sqrt(t);
      for (auto& v : z) v = n01(rng);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) y[i] += st * l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * z[j];
    }
    const double v = f(y);
    const double delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

void check_points(const CovSpec& spec, const std::vector<std::vector<double>>& points) {
  for (const auto& p : points)
    if (p.size() != spec.dim()) throw ValidationError("query point has the wrong dimension");
}

void apply_one(const TestFunction& f, double t, const Eigen::MatrixXd& l, const ZGrid* grid,
               const std::vector<std::vector<double>>& points, const ApplyOptions& o, std::size_t i,
               ApplyResult& out) {
  const auto& x = points[i];
  if (t == 0.0) {
    out.values[i] = f(x);
    return;
  }
  if (o.method == ApplyMethod::quadrature) {
    out.values[i] = quadrature_point(f, t, l, *grid, x);
  } else {
    const auto est = monte_carlo_point(f, {t}, l, x, o.samples, parallel::mix_seed(o.seed, i));
    out.values[i] = est.mean;
    out.std_errors[i] = est.std_error;
  }
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("semigroup time must be >= 0");
}

}  // namespace

ApplyResult serial::apply(const TestFunction& f, double t, const CovSpec& spec,
                          const std::vector<std::vector<double>>& points, const ApplyOptions& options) {
  check_time(t);
  check_points(spec, points);
  const Eigen::MatrixXd l = cholesky_factor(spec);
  std::optional<ZGrid> grid;
  if (options.method == ApplyMethod::quadrature && t > 0.0) grid = make_grid(spec.dim(), options);
  ApplyResult out{std::vector<double>(points.size(), 0.0), std::vector<double>(points.size(), 0.0)};
  for (std::size_t i = 0; i < points.size(); ++i) apply_one(f, t, l, grid ? &*grid : nullptr, points, options, i, out);
  return out;
}

ApplyResult apply(const TestFunction& f, double t, const CovSpec& spec, const std::vector<std::vector<double>>& points,
                  const ApplyOptions& options) {
  check_time(t);
  check_points(spec, points);
  const Eigen::MatrixXd l = cholesky_factor(spec);
  std::optional<ZGrid> grid;
  if (options.method == ApplyMethod::quadrature && t > 0.0) grid = make_grid(spec.dim(), options);
  ApplyResult out{std::vector<double>(points.size(), 0.0), std::vector<double>(points.size(), 0.0)};
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      apply_one(f, t, l, grid ? &*grid : nullptr, points, options, static_cast<std::size_t>(i), out);
    } catch (const std::exception& e) {
#pragma omp critical(kd_apply_error)
      {
        failed = true;
        message = e.what();
      }
    }
  }
  if (failed) throw DomainError(message);
  return out;
}

SemigroupCheck check_semigroup(const TestFunction& f, double s, double t, const CovSpec& spec,
                               const std::vector<std::vector<double>>& points, const ApplyOptions& options) {
  check_time(s);
  check_time(t);
  check_points(spec, points);
  SemigroupCheck r;
  r.deviations.assign(points.size(), 0.0);
  r.std_errors.assign(points.size(), 0.0);

  if (options.method == ApplyMethod::quadrature) {
    const ApplyResult direct = apply(f, s + t, spec, points, options);
    const Eigen::MatrixXd l = cholesky_factor(spec);
    const std::optional<ZGrid> inner_grid =
        t > 0.0 ? std::optional<ZGrid>(make_grid(spec.dim(), options)) : std::nullopt;
    // Serial inner evaluation; the outer apply parallelizes over its nodes' points.
    TestFunction pt_f = [&](std::span<const double> y) {
      return t > 0.0 ? quadrature_point(f, t, l, *inner_grid, y) : f(y);
    };
    const ApplyResult composed = apply(pt_f, s, spec, points, options);
    for (std::size_t i = 0; i < points.size(); ++i) r.deviations[i] = std::abs(composed.values[i] - direct.values[i]);
  } else {
    const Eigen::MatrixXd l = cholesky_factor(spec);
    const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const std::uint64_t base = parallel::mix_seed(options.seed, ui);
      const auto composed = monte_carlo_point(f, {s, t}, l, points[ui], options.samples, parallel::mix_seed(base, 0));
      const auto direct = monte_carlo_point(f, {s + t}, l, points[ui], options.samples, parallel::mix_seed(base, 1));
      r.deviations[ui] = std::abs(composed.mean - direct.mean);
      r.std_errors[ui] = std::hypot(composed.std_error, direct.std_error);
    }
    for (std::size_t i = 0; i < points.size(); ++i)
      if (r.std_errors[i] > 0.0) r.max_z = std::max(r.max_z, r.deviations[i] / r.std_errors[i]);
  }
  for (double v : r.deviations) r.max_deviation = std::max(r.max_deviation, v);
  return r;
}

// ---------------------------------------------------------------------------
// Contraction

std::vector<NamedFunction> contraction_battery() {
  return {
      {"gaussian-bump", [](std::span<const double> x) { return std::exp(-x[0] * x[0]); }},
      {"triangle", [](std::span<const double> x) { return std::max(0.0, 1.0 - std::abs(x[0])); }},
      {"oscillating", [](std::span<const double> x) { return std::cos(3.0 * x[0]) * std::exp(-0.5 * x[0] * x[0]); }},
      {"signed-tent", [](std::span<const double> x) { return x[0] * std::max(0.0, 2.0 - std::abs(x[0])); }},
      {"shifted-bump", [](std::span<const double> x) { return 2.0 * std::exp(-2.0 * (x[0] - 1.5) * (x[0] - 1.5)); }},
  };
}

ContractionReport check_contraction(const TestFunction& f, double t, const CovSpec& spec, double half_width, double tol) {
  if (spec.dim() != 1) throw DomainError("contraction checks run in d = 1");
  const auto nodes = quadrature::composite({static_cast<std::size_t>(8.0 * half_width), 5}, -half_width, half_width);
  std::vector<std::vector<double>> points;
  for (double x : nodes.x) points.push_back({x});
  ApplyOptions o;
  o.rule = {32, 5};
  const ApplyResult pt = apply(f, t, spec, points, o);
  ContractionReport r;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double fx = std::abs(f(points[i]));
    const double px = std::abs(pt.values[i]);
    r.sup_f = std::max(r.sup_f, fx);
    r.sup_pt = std::max(r.sup_pt, px);
    r.l1_f += nodes.w[i] * fx;
    r.l1_pt += nodes.w[i] * px;
  }
  r.sup_holds = r.sup_pt <= r.sup_f + tol;
  r.l1_holds = r.l1_pt <= r.l1_f + tol;
  return r;
}

}  // namespace kd
