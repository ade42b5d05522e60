#include "keydist/core.hpp"

#include "keydist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace kd {

namespace {

constexpr std::size_t kMaxSymbols = std::size_t{1} << 24;
constexpr double kFloatNormTolerance = 1e-12;

double lp_of(std::span<const double> magnitudes, double p) {
  if (std::isinf(p)) {
    double best = 0.0;
    for (double v : magnitudes) best = std::max(best, std::abs(v));
    return best;
  }
  if (p == 1.0) {
    double total = 0.0;
    for (double v : magnitudes) total += std::abs(v);
    return total;
  }
  // Scale by the largest entry so large p does not overflow.
  double scale = 0.0;
  for (double v : magnitudes) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double total = 0.0;
  for (double v : magnitudes) total += std::pow(std::abs(v) / scale, p);
  return scale * std::pow(total, 1.0 / p);
}

void check_norm_spec(const NormSpec& spec) {
  if (!(spec.p >= 1.0)) throw DomainError("Schatten norm requires p >= 1");
  if (spec.per_symbol && spec.alphabet_size == 0) throw DomainError("per-symbol prefactor needs |A| > 0");
}

double apply_prefactor(double value, const NormSpec& spec) {
  return spec.per_symbol ? value / static_cast<double>(spec.alphabet_size) : value;
}

}  // namespace

std::size_t Alphabet::symbols() const {
  std::size_t n = 1;
  for (unsigned i = 0; i < power; ++i) {
    n *= size;
    if (n > kMaxSymbols) throw CapExceeded("alphabet A^m exceeds 2^24 symbols");
  }
  return n;
}

void Alphabet::validate() const {
  if (size < 2) throw ValidationError("alphabet size must be >= 2");
  if (power < 1) throw ValidationError("alphabet power must be >= 1");
  (void)symbols();
}

// ---------------------------------------------------------------------------
// FiniteDistribution

FiniteDistribution FiniteDistribution::exact(Alphabet alphabet, std::vector<Rational> weights) {
  alphabet.validate();
  if (weights.size() != alphabet.symbols())
    throw ValidationError("distribution has " + std::to_string(weights.size()) + " weights, alphabet has " +
                          std::to_string(alphabet.symbols()) + " symbols");
  Rational total = 0;
  for (auto& w : weights) {
    w.canonicalize();
    if (w < 0) throw ValidationError("negative probability weight " + to_string(w));
    total += w;
  }
  if (total != 1) throw ValidationError("weights sum to " + to_string(total) + ", not 1");
  FiniteDistribution d;
  d.alphabet_ = alphabet;
  d.weights_.reserve(weights.size());
  for (const auto& w : weights) d.weights_.push_back(w.get_d());
  d.exact_ = std::move(weights);
  return d;
}

FiniteDistribution FiniteDistribution::floating(Alphabet alphabet, std::vector<double> weights) {
  alphabet.validate();
  if (weights.size() != alphabet.symbols())
    throw ValidationError("distribution has " + std::to_string(weights.size()) + " weights, alphabet has " +
                          std::to_string(alphabet.symbols()) + " symbols");
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw ValidationError("probability weights must be finite and >= 0");
    total += w;
  }
  if (std::abs(total - 1.0) > kFloatNormTolerance)
    throw ValidationError("weights sum to " + std::to_string(total) + ", not 1 within 1e-12");
  FiniteDistribution d;
  d.alphabet_ = alphabet;
  d.weights_ = std::move(weights);
  return d;
}

FiniteDistribution FiniteDistribution::uniform(Alphabet alphabet) {
  alphabet.validate();
  const std::size_t n = alphabet.symbols();
  return exact(alphabet, std::vector<Rational>(n, Rational(1, static_cast<unsigned long>(n))));
}

FiniteDistribution FiniteDistribution::point_mass(Alphabet alphabet, std::size_t symbol) {
  alphabet.validate();
  const std::size_t n = alphabet.symbols();
  if (symbol >= n) throw ValidationError("point mass symbol out of range");
  std::vector<Rational> w(n, Rational(0));
  w[symbol] = 1;
  return exact(alphabet, std::move(w));
}

FiniteDistribution random_distribution(Alphabet alphabet, std::uint64_t seed, unsigned grain) {
  alphabet.validate();
  if (grain == 0) throw DomainError("random distribution needs grain >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> pick(0, grain);
  const std::size_t n = alphabet.symbols();
  std::vector<unsigned> raw(n, 0);
  unsigned long total = 0;
  while (total == 0) {
    total = 0;
    for (auto& v : raw) {
      v = pick(rng);
      total += v;
    }
  }
  std::vector<Rational> w;
  w.reserve(n);
  for (unsigned v : raw) w.emplace_back(v, total);
  return FiniteDistribution::exact(alphabet, std::move(w));
}

const std::vector<Rational>& FiniteDistribution::exact_weights() const {
  if (!is_exact()) throw ValidationError("distribution uses the floating backend");
  return exact_;
}

double FiniteDistribution::max_weight() const { return *std::max_element(weights_.begin(), weights_.end()); }

Rational FiniteDistribution::exact_max_weight() const {
  const auto& w = exact_weights();
  return *std::max_element(w.begin(), w.end());
}

// ---------------------------------------------------------------------------
// StateDensity

StateDensity StateDensity::diagonal(std::vector<double> entries) {
  if (entries.empty()) throw ValidationError("state dimension must be >= 1");
  double total = 0.0;
  for (double& v : entries) {
    if (!std::isfinite(v)) throw ValidationError("non-finite state entry");
    if (v < -kPsdTolerance) throw ValidationError("state has negative eigenvalue " + std::to_string(v));
    if (v < 0.0) v = 0.0;
    total += v;
  }
  if (total > 1.0 + kPsdTolerance) throw ValidationError("state trace " + std::to_string(total) + " exceeds 1");
  StateDensity s;
  s.diag_ = std::move(entries);
  return s;
}

StateDensity StateDensity::diagonal(std::vector<Rational> entries) {
  if (entries.empty()) throw ValidationError("state dimension must be >= 1");
  Rational total = 0;
  for (auto& v : entries) {
    v.canonicalize();
    if (v < 0) throw ValidationError("state has negative eigenvalue " + to_string(v));
    total += v;
  }
  if (total > 1) throw ValidationError("state trace " + to_string(total) + " exceeds 1");
  StateDensity s;
  s.diag_.reserve(entries.size());
  for (const auto& v : entries) s.diag_.push_back(v.get_d());
  s.exact_ = std::move(entries);
  return s;
}

StateDensity StateDensity::dense(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) throw ValidationError("state must be a nonempty square matrix");
  if (!matrix.allFinite()) throw ValidationError("non-finite state entry");
  if (!is_hermitian(matrix)) throw ValidationError("state matrix is not Hermitian");
  Eigen::MatrixXcd h = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXd evals = es.eigenvalues();
  bool clamped = false;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals(i) < -kPsdTolerance) throw ValidationError("state has negative eigenvalue " + std::to_string(evals(i)));
    if (evals(i) < 0.0) {
      evals(i) = 0.0;
      clamped = true;
    }
  }
  if (evals.sum() > 1.0 + kPsdTolerance) throw ValidationError("state trace exceeds 1");
  StateDensity s;
  if (clamped)
    s.dense_ = es.eigenvectors() * evals.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
  else
    s.dense_ = std::move(h);
  return s;
}

StateDensity StateDensity::from_distribution(const FiniteDistribution& dist) {
  return dist.is_exact() ? diagonal(dist.exact_weights()) : diagonal(dist.weights());
}

std::size_t StateDensity::dim() const {
  return dense_ ? static_cast<std::size_t>(dense_->rows()) : diag_.size();
}

double StateDensity::trace() const {
  if (dense_) return dense_->trace().real();
  double t = 0.0;
  for (double v : diag_) t += v;
  return t;
}

Rational StateDensity::exact_trace() const { return sum(exact_diagonal()); }

bool StateDensity::is_normalized(double tol) const {
  if (is_exact()) return exact_trace() == 1;
  return std::abs(trace() - 1.0) <= tol;
}

const std::vector<double>& StateDensity::diagonal_entries() const {
  if (dense_) throw ValidationError("state is dense, not diagonal");
  return diag_;
}

const std::vector<Rational>& StateDensity::exact_diagonal() const {
  if (!is_exact()) throw ValidationError("state has no exact diagonal representation");
  return exact_;
}

Eigen::MatrixXcd StateDensity::matrix() const {
  if (dense_) return *dense_;
  Eigen::VectorXcd d(static_cast<Eigen::Index>(diag_.size()));
  for (std::size_t i = 0; i < diag_.size(); ++i) d(static_cast<Eigen::Index>(i)) = diag_[i];
  return d.asDiagonal();
}

Eigen::VectorXd StateDensity::eigenvalues() const {
  if (dense_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(*dense_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseMax(0.0);
  }
  std::vector<double> sorted = diag_;
  std::sort(sorted.begin(), sorted.end());
  return Eigen::Map<Eigen::VectorXd>(sorted.data(), static_cast<Eigen::Index>(sorted.size()));
}

StateDensity StateDensity::scaled(double factor) const {
  if (!(factor >= 0.0)) throw DomainError("states can only be scaled by nonnegative factors");
  if (dense_) return dense(*dense_ * factor);
  std::vector<double> d = diag_;
  for (double& v : d) v *= factor;
  return diagonal(std::move(d));
}

StateDensity StateDensity::scaled(const Rational& factor) const {
  if (!is_exact()) return scaled(factor.get_d());
  if (factor < 0) throw DomainError("states can only be scaled by nonnegative factors");
  std::vector<Rational> d = exact_;
  for (auto& v : d) v *= factor;
  return diagonal(std::move(d));
}

// ---------------------------------------------------------------------------
// Norms and distances

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double schatten_norm(const Eigen::MatrixXcd& hermitian, const NormSpec& spec) {
  check_norm_spec(spec);
  if (!is_hermitian(hermitian)) throw ValidationError("Schatten norm input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (hermitian + hermitian.adjoint()), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  return apply_prefactor(lp_of(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())), spec.p), spec);
}

double schatten_norm(std::span<const double> diagonal, const NormSpec& spec) {
  check_norm_spec(spec);
  return apply_prefactor(lp_of(diagonal, spec.p), spec);
}

double schatten_norm(const StateDensity& x, const NormSpec& spec) {
  if (x.is_diagonal()) return schatten_norm(std::span<const double>(x.diagonal_entries()), spec);
  return schatten_norm(x.matrix(), spec);
}

double schatten_norm_of_difference(const StateDensity& a, const StateDensity& b, const NormSpec& spec) {
  if (a.dim() != b.dim()) throw ValidationError("state dimensions differ");
  if (a.is_diagonal() && b.is_diagonal()) {
    const auto& da = a.diagonal_entries();
    const auto& db = b.diagonal_entries();
    std::vector<double> diff(da.size());
    for (std::size_t i = 0; i < da.size(); ++i) diff[i] = da[i] - db[i];
    return schatten_norm(std::span<const double>(diff), spec);
  }
  return schatten_norm(Eigen::MatrixXcd(a.matrix() - b.matrix()), spec);
}

double trace_distance(const FiniteDistribution& a, const FiniteDistribution& b) {
  if (a.size() != b.size()) throw ValidationError("distributions live on different alphabets");
  if (a.is_exact() && b.is_exact()) return exact_trace_distance(a, b).get_d();
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total;
}

Rational exact_trace_distance(const FiniteDistribution& a, const FiniteDistribution& b) {
  if (a.size() != b.size()) throw ValidationError("distributions live on different alphabets");
  const auto& wa = a.exact_weights();
  const auto& wb = b.exact_weights();
  Rational total = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) total += abs(wa[i] - wb[i]);
  return total;
}

double trace_distance(const StateDensity& a, const StateDensity& b) {
  return schatten_norm_of_difference(a, b, NormSpec::trace_norm());
}

double total_variation(const FiniteDistribution& a, const FiniteDistribution& b) { return 0.5 * trace_distance(a, b); }

// ---------------------------------------------------------------------------
// Tensor products

FiniteDistribution tensor(const FiniteDistribution& a, const FiniteDistribution& b) {
  Alphabet out = a.alphabet().size == b.alphabet().size
                     ? Alphabet{a.alphabet().size, a.alphabet().power + b.alphabet().power}
                     : Alphabet{static_cast<unsigned>(a.size() * b.size()), 1};
  if (a.is_exact() && b.is_exact()) {
    const auto& wa = a.exact_weights();
    const auto& wb = b.exact_weights();
    std::vector<Rational> w;
    w.reserve(wa.size() * wb.size());
    for (const auto& x : wa)
      for (const auto& y : wb) w.push_back(x * y);
    return FiniteDistribution::exact(out, std::move(w));
  }
  std::vector<double> w;
  w.reserve(a.size() * b.size());
  for (double x : a.weights())
    for (double y : b.weights()) w.push_back(x * y);
  // Products of normalized vectors can drift by a few ulps; renormalize within tolerance.
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return FiniteDistribution::floating(out, std::move(w));
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

StateDensity tensor(const StateDensity& a, const StateDensity& b) {
  if (a.is_exact() && b.is_exact()) {
    std::vector<Rational> d;
    d.reserve(a.dim() * b.dim());
    for (const auto& x : a.exact_diagonal())
      for (const auto& y : b.exact_diagonal()) d.push_back(x * y);
    return StateDensity::diagonal(std::move(d));
  }
  if (a.is_diagonal() && b.is_diagonal()) {
    std::vector<double> d;
    d.reserve(a.dim() * b.dim());
    for (double x : a.diagonal_entries())
      for (double y : b.diagonal_entries()) d.push_back(x * y);
    return StateDensity::diagonal(std::move(d));
  }
  return StateDensity::dense(kron(a.matrix(), b.matrix()));
}

StateDensity tensor_power(const StateDensity& a, unsigned n) {
  if (n == 0) throw DomainError("tensor power needs n >= 1");
  StateDensity out = a;
  for (unsigned i = 1; i < n; ++i) out = tensor(out, a);
  return out;
}

double normalized_tensor_distance(const StateDensity& rho, const StateDensity& sigma, unsigned n, unsigned alphabet_size,
                                  unsigned cap) {
  if (rho.dim() != sigma.dim()) throw ValidationError("state dimensions differ");
  if (n == 0) throw DomainError("tensor power needs n >= 1");
  if (n > cap) throw CapExceeded("tensor power " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  const bool diagonal = rho.is_diagonal() && sigma.is_diagonal();
  const double full_dim = std::pow(static_cast<double>(rho.dim()), n);
  if (full_dim > (diagonal ? 4096.0 : 512.0)) throw CapExceeded("tensor power dimension too large to enumerate");
  const unsigned a = alphabet_size == 0 ? static_cast<unsigned>(rho.dim()) : alphabet_size;
  const double distance = trace_distance(tensor_power(rho, n), tensor_power(sigma, n));
  return distance / (static_cast<double>(n) * a);
}

}  // namespace kd
