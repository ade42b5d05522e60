#pragma once

#include "keydist/quadrature.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kd {

/// Gaussian covariance t * Sigma with Sigma_ii = variances[i] and
/// Sigma_ij = rho_ij sqrt(Sigma_ii Sigma_jj). Correlations are listed for
/// i < j in row order: (1,2), (1,3), ..., (1,d), (2,3), ...
struct CovSpec {
  std::vector<double> variances{1.0};
  std::vector<double> correlations;
  double t = 1.0;
  std::vector<double> mean;

  std::size_t dim() const { return variances.size(); }
  double rho(std::size_t i, std::size_t j) const;
  /// Mean vector, zero-filled when `mean` is empty.
  Eigen::VectorXd mu() const;
  void validate() const;

  static CovSpec identity(std::size_t d, double t = 1.0);
};

/// Random positive-definite spec: variances in [1/2, 2] and the correlation
/// matrix of d + 1 random directions.
CovSpec random_cov_spec(std::size_t d, std::uint64_t seed, double t = 1.0);

/// Sigma as assembled (without the factor t).
Eigen::MatrixXd assemble_sigma(const CovSpec& spec);

struct SigmaReport {
  Eigen::MatrixXd sigma;
  double det_lu = 0.0;
  /// Closed form for d in {2, 3, 4}.
  std::optional<double> det_closed_form;
  /// Sum over permutations, d <= 8.
  std::optional<double> det_permutation;
  /// Ascending eigenvalues; their product is a third determinant path.
  Eigen::VectorXd eigenvalues;
  double det_spectral = 0.0;
};

/// Assembles Sigma and its determinant by LU, the eigenvalues, the closed forms and the
/// permutation expansion. Disagreement beyond 1e-10 (relative) is a logic_error.
SigmaReport build_sigma(const CovSpec& spec);

/// det Sigma from the variances and correlations, d in {2, 3, 4}.
double det_closed_form(const CovSpec& spec);
/// The d = 4 polynomial exactly as tabulated in the source, including its two
/// misplaced quartic terms. Kept to document the discrepancy; not used.
double table_det4_as_printed(const CovSpec& spec);
/// sum_sigma sgn(sigma) prod_k A_{k,sigma(k)}.
double det_permutation(const Eigen::MatrixXd& a);

/// Sigma^-1 by Cholesky.
Eigen::MatrixXd inverse_sigma(const CovSpec& spec);
/// The cofactor closed forms for d in {2, 3}.
Eigen::MatrixXd inverse_sigma_closed_form(const CovSpec& spec);

/// Density of N(mu, t Sigma) at x.
double kernel_pdf(std::span<const double> x, const CovSpec& spec);

/// Integral of kernel_pdf over mu +- 8 sqrt(t max Sigma_ii), d <= 3.
double kernel_mass(const CovSpec& spec, const quadrature::Rule& rule = {67, 3});

using TestFunction = std::function<double(std::span<const double>)>;

enum class ApplyMethod { quadrature, monte_carlo };

struct ApplyOptions {
  ApplyMethod method = ApplyMethod::quadrature;
  /// Per-dimension rule on the standardized window [-window, window].
  quadrature::Rule rule{16, 5};
  double window = 8.0;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
};

struct ApplyResult {
  std::vector<double> values;
  /// Monte-Carlo standard errors; zeros for quadrature.
  std::vector<double> std_errors;
};

/// (P_t f)(x) = E[f(x + sqrt(t) L z)], Sigma = L L^T, z ~ N(0, I), at each
/// query point. The kernel is centered: `mean` only enters kernel_pdf. Heat
/// mode is CovSpec::identity. Quadrature needs d <= 3; Monte Carlo uses a
/// seed derived per query point. Throws DomainError when the quadrature tail
/// carries non-negligible weight (a divergent integrand).
ApplyResult apply(const TestFunction& f, double t, const CovSpec& spec, const std::vector<std::vector<double>>& points,
                  const ApplyOptions& options = {});

struct SemigroupCheck {
  double max_deviation = 0.0;
  std::vector<double> deviations;
  /// Combined standard error per point (Monte Carlo only).
  std::vector<double> std_errors;
  /// max deviation / std error (Monte Carlo only).
  double max_z = 0.0;
};

/// max over points of |P_s(P_t f) - P_{s+t} f|. In quadrature mode the inner
/// P_t f is itself a quadrature; in Monte-Carlo mode the composition is
/// sampled as x + sqrt(s) L z1 + sqrt(t) L z2 with independent draws.
SemigroupCheck check_semigroup(const TestFunction& f, double s, double t, const CovSpec& spec,
                               const std::vector<std::vector<double>>& points, const ApplyOptions& options = {});

/// P_t of the N(a, s0 I) density is the N(a, s0 I + t Sigma) density.
double gaussian_pdf(std::span<const double> x, std::span<const double> mean, const Eigen::MatrixXd& cov);

struct NamedFunction {
  std::string name;
  TestFunction f;
};

/// One-dimensional test functions for the contraction checks.
std::vector<NamedFunction> contraction_battery();

struct ContractionReport {
  double sup_f = 0.0;
  double sup_pt = 0.0;
  double l1_f = 0.0;
  double l1_pt = 0.0;
  bool sup_holds = false;
  bool l1_holds = false;
};

/// sup and L1 norms of f and P_t f on [-half_width, half_width] (d = 1).
ContractionReport check_contraction(const TestFunction& f, double t, const CovSpec& spec, double half_width = 12.0,
                                    double tol = 1e-9);

namespace serial {
ApplyResult apply(const TestFunction& f, double t, const CovSpec& spec, const std::vector<std::vector<double>>& points,
                  const ApplyOptions& options = {});
}  // namespace serial

}  // namespace kd
