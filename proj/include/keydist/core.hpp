#pragma once

#include "keydist/rational.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace kd {

/// A base alphabet A together with the tensor power m; symbols of A^m are
/// indexed 0 .. size^power - 1 in base-size digit order (most significant first).
struct Alphabet {
  unsigned size = 2;
  unsigned power = 1;

  std::size_t symbols() const;
  void validate() const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

enum class Backend { exact, floating };

/// Probability vector over the symbols of an alphabet. The exact backend keeps
/// GMP rationals and checks normalization exactly; the floating backend checks
/// it to 1e-12. Both backends expose double weights.
class FiniteDistribution {
 public:
  static FiniteDistribution exact(Alphabet alphabet, std::vector<Rational> weights);
  static FiniteDistribution floating(Alphabet alphabet, std::vector<double> weights);
  static FiniteDistribution uniform(Alphabet alphabet);
  static FiniteDistribution point_mass(Alphabet alphabet, std::size_t symbol);

  Backend backend() const { return exact_.empty() ? Backend::floating : Backend::exact; }
  bool is_exact() const { return backend() == Backend::exact; }
  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return weights_.size(); }

  const std::vector<double>& weights() const { return weights_; }
  /// Throws ValidationError on the floating backend.
  const std::vector<Rational>& exact_weights() const;
  double operator[](std::size_t i) const { return weights_[i]; }

  double max_weight() const;
  Rational exact_max_weight() const;

 private:
  FiniteDistribution() = default;

  Alphabet alphabet_;
  std::vector<double> weights_;
  std::vector<Rational> exact_;
};

/// Exact distribution with integer weights drawn from [0, grain], normalized.
FiniteDistribution random_distribution(Alphabet alphabet, std::uint64_t seed, unsigned grain = 16);

inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-10;

/// Positive semidefinite operator with trace <= 1. Diagonal states keep only
/// their diagonal (optionally as exact rationals); dense states keep the full
/// Hermitian matrix. Eigenvalues in (-1e-10, 0) are clamped to zero.
class StateDensity {
 public:
  static StateDensity diagonal(std::vector<double> entries);
  static StateDensity diagonal(std::vector<Rational> entries);
  static StateDensity dense(const Eigen::MatrixXcd& matrix);
  static StateDensity from_distribution(const FiniteDistribution& dist);

  bool is_diagonal() const { return !dense_.has_value(); }
  bool is_exact() const { return is_diagonal() && !exact_.empty(); }
  std::size_t dim() const;

  double trace() const;
  Rational exact_trace() const;
  bool is_normalized(double tol = 1e-10) const;

  /// Diagonal entries; throws for dense states.
  const std::vector<double>& diagonal_entries() const;
  const std::vector<Rational>& exact_diagonal() const;

  Eigen::MatrixXcd matrix() const;
  /// Ascending eigenvalues (after clamping).
  Eigen::VectorXd eigenvalues() const;

  StateDensity scaled(double factor) const;
  StateDensity scaled(const Rational& factor) const;

 private:
  StateDensity() = default;

  std::vector<double> diag_;
  std::vector<Rational> exact_;
  std::optional<Eigen::MatrixXcd> dense_;
};

/// Schatten/L^p norm parameters. `per_symbol` applies the 1/|A| prefactor with
/// |A| = alphabet_size; it is never applied implicitly.
struct NormSpec {
  double p = 1.0;
  bool per_symbol = false;
  unsigned alphabet_size = 2;

  static NormSpec trace_norm() { return {}; }
  static NormSpec operator_norm() { return {std::numeric_limits<double>::infinity(), false, 2}; }
};

/// (sum_i sigma_i^p)^(1/p) over singular values; p = inf gives max sigma_i.
double schatten_norm(const Eigen::MatrixXcd& hermitian, const NormSpec& spec);
double schatten_norm(std::span<const double> diagonal, const NormSpec& spec);
double schatten_norm(const StateDensity& x, const NormSpec& spec);
double schatten_norm_of_difference(const StateDensity& a, const StateDensity& b, const NormSpec& spec);

/// ||a - b||_1 (the L1 distance, twice the total variation distance).
double trace_distance(const FiniteDistribution& a, const FiniteDistribution& b);
Rational exact_trace_distance(const FiniteDistribution& a, const FiniteDistribution& b);
double trace_distance(const StateDensity& a, const StateDensity& b);
double total_variation(const FiniteDistribution& a, const FiniteDistribution& b);

FiniteDistribution tensor(const FiniteDistribution& a, const FiniteDistribution& b);
StateDensity tensor(const StateDensity& a, const StateDensity& b);
StateDensity tensor_power(const StateDensity& a, unsigned n);

inline constexpr unsigned kDefaultTensorCap = 6;

/// (1 / (n |A|)) * || rho^(x)n - sigma^(x)n ||_1, the normalized n-fold tensor
/// distance. |A| defaults to the state dimension when alphabet_size is 0.
double normalized_tensor_distance(const StateDensity& rho, const StateDensity& sigma, unsigned n,
                                  unsigned alphabet_size = 0, unsigned cap = kDefaultTensorCap);

/// Kronecker product helper shared by the quantum module.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

bool is_hermitian(const Eigen::MatrixXcd& m, double tol = kHermitianTolerance);

}  // namespace kd
