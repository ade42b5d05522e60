#pragma once

#include "keydist/core.hpp"
#include "keydist/quadrature.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace kd {

/// Order alpha in [0, inf]. Orders with |alpha - 1| < 1e-9 are evaluated by
/// the Kullback-Leibler path and alpha > 1e9 by the max-ratio path.
struct DivergenceOrder {
  double alpha = 1.0;

  static DivergenceOrder infinity() { return {std::numeric_limits<double>::infinity()}; }
  bool is_infinite() const { return alpha > 1e9; }
  bool is_one() const { return std::abs(alpha - 1.0) < 1e-9; }
};

/// `standard`: D_alpha = 1/(alpha-1) log sum f^alpha f+^(1-alpha), nonnegative,
/// tends to +KL at alpha = 1. `definition`: the 1/(1-alpha) normalization,
/// i.e. exactly -D_alpha.
enum class DivergenceSign { standard, definition };

/// Order-alpha divergence of f from f_plus in base |A| = base.size. Returns
/// +inf (or -inf under the definition sign) when f is not absolutely
/// continuous with respect to f_plus and the order requires it.
double renyi_divergence(const FiniteDistribution& f, const FiniteDistribution& f_plus, DivergenceOrder order,
                        const Alphabet& base, DivergenceSign sign = DivergenceSign::standard);

/// KL(f || f_plus) in base `base`, using 0 ln(0/0) := 0.
double kl_divergence(const FiniteDistribution& f, const FiniteDistribution& f_plus, double base);

/// Pinsker lower bound ||f - f_plus||_1^2 / 2 on KL in nats, exact for rational inputs.
Rational pinsker_lower_bound(const FiniteDistribution& f, const FiniteDistribution& f_plus);

/// strict: only m = 1 alphabets (|X| = |A|); relaxed: base |A|^m.
enum class EntropyMode { strict, relaxed };

/// Rényi entropy with log base |X|, the number of symbols of f.
double renyi_entropy(const FiniteDistribution& f, DivergenceOrder order, EntropyMode mode = EntropyMode::strict);
double renyi_entropy(const FiniteDistribution& f, DivergenceOrder order, double base);

/// -log_|A| max_x P_x, with |A| the base alphabet size.
double min_entropy(const FiniteDistribution& f);
double min_entropy(const FiniteDistribution& f, double base);

/// Density on R^d (d <= 3) restricted to an integration window.
struct ContinuousDensity {
  std::function<double(std::span<const double>)> pdf;
  std::size_t dim = 1;
  std::vector<double> lo;
  std::vector<double> hi;
  quadrature::Rule rule{};
  double tolerance = 1e-6;

  double operator()(std::span<const double> x) const { return pdf(x); }
  void validate() const;

  static ContinuousDensity normal(double mean, double sd);
  static ContinuousDensity uniform(double lo, double hi);
};

struct DifferentialEntropy {
  double value = 0.0;
  double error_estimate = 0.0;
  double mass = 0.0;
};

/// -integral f ln f (nats). Throws ValidationError when the window mass is
/// off by more than the density's tolerance.
DifferentialEntropy differential_entropy(const ContinuousDensity& f);

/// -(1/n) sum ln f(X_i) over n i.i.d. draws (nats).
double aep_estimate(const FiniteDistribution& f, std::size_t n, std::uint64_t seed);
double aep_estimate(const ContinuousDensity& f, std::size_t n, std::uint64_t seed);

struct AepPoint {
  std::size_t n = 0;
  double estimate = 0.0;
};

/// Estimates at n = 10^2, 10^3, 10^4 with the same seed.
std::vector<AepPoint> aep_convergence(const FiniteDistribution& f, std::uint64_t seed);
std::vector<AepPoint> aep_convergence(const ContinuousDensity& f, std::uint64_t seed);

/// Shannon entropy in nats, the AEP target for discrete sources.
double shannon_entropy_nats(const FiniteDistribution& f);

}  // namespace kd
