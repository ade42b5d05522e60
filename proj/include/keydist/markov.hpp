#pragma once

#include "keydist/rational.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace kd {

/// Polynomial in r with rational coefficients, lowest degree first. The zero
/// polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Rational& constant);  // NOLINT(google-explicit-constructor)
  Polynomial(int constant) : Polynomial(Rational(constant)) {}  // NOLINT(google-explicit-constructor)
  explicit Polynomial(std::vector<Rational> coeffs);

  static Polynomial monomial(const Rational& c, std::size_t degree);
  /// The polynomial r.
  static Polynomial variable() { return monomial(1, 1); }

  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  /// Coefficient of r^i (zero past the degree).
  Rational operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& leading() const { return c_.back(); }
  Polynomial monic() const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  Rational operator()(const Rational& r) const;
  std::complex<double> operator()(std::complex<double> r) const;
  Polynomial derivative() const;

  /// Ascending powers, e.g. "1 - 1/2*r + r^2".
  std::string to_string(char var = 'r') const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Quotient and remainder; b must be nonzero.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
/// a / b when b divides a; throws otherwise.
Polynomial exact_div(const Polynomial& a, const Polynomial& b);
/// Monic gcd (zero only when both inputs are zero).
Polynomial gcd(Polynomial a, Polynomial b);

/// num / den in lowest terms with a monic denominator.
class RationalFunction {
 public:
  RationalFunction(Polynomial num, Polynomial den = Polynomial(1));

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  /// Value at r; throws DomainError at a pole.
  Rational operator()(const Rational& r) const;
  /// First n Taylor coefficients at r = 0; needs den(0) != 0.
  std::vector<Rational> series(std::size_t n) const;

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// "num" when den = 1, else "(num)/(den)".
  std::string to_string(char var = 'r') const;

 private:
  Polynomial num_;
  Polynomial den_;
};

/// Row-stochastic matrix with exact rational entries.
class TransitionMatrix {
 public:
  static TransitionMatrix from_rows(std::vector<std::vector<Rational>> rows);

  std::size_t size() const { return rows_.size(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  const std::vector<std::vector<Rational>>& rows() const { return rows_; }

 private:
  TransitionMatrix() = default;
  std::vector<std::vector<Rational>> rows_;
};

using RationalMatrix = std::vector<std::vector<Rational>>;

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix matrix_power(const TransitionMatrix& p, unsigned n);

/// (P^n)_{i,j}.
Rational n_step(const TransitionMatrix& p, unsigned n, std::size_t i, std::size_t j);

/// theta^(0..n_max) for state i; theta^(0) = 0 and
/// P^n_ii = sum_{m=1}^{n} theta^(m) P^(n-m)_ii.
std::vector<Rational> first_return(const TransitionMatrix& p, std::size_t i, unsigned n_max);

/// det(I - rP) by fraction-free elimination over Q[r].
Polynomial resolvent_determinant(const TransitionMatrix& p);

/// Entry (i, j) of (I - rP)^-1 = C_ji(r) / det(I - rP).
RationalFunction resolvent(const TransitionMatrix& p, std::size_t i, std::size_t j);

/// Every entry of (I - rP)^-1, row-major. Entries are computed in parallel.
std::vector<RationalFunction> resolvent_matrix(const TransitionMatrix& p);

/// Theta_ii(r) = 1 - 1 / P_ii(r).
RationalFunction theta_gf(const TransitionMatrix& p, std::size_t i);

inline constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

/// Complex roots of a polynomial: companion-matrix eigenvalues refined by Newton steps.
std::vector<std::complex<double>> roots(const Polynomial& p);

/// Smallest root modulus of the denominator; infinity for polynomials.
double radius_of_convergence(const RationalFunction& f);

/// Coefficients of the product of two power series, truncated to n terms.
std::vector<Rational> series_product(const std::vector<Rational>& a, const std::vector<Rational>& b, std::size_t n);

bool is_irreducible(const TransitionMatrix& p);
/// gcd of the return times n <= 2 s^2 with P^n_ii > 0; 0 if state i never returns.
unsigned period(const TransitionMatrix& p, std::size_t i);

TransitionMatrix swap_chain();
TransitionMatrix lazy_chain();
/// Random chain with rational entries of denominator `grain`; `density` is
/// the chance that an off-diagonal entry may be nonzero.
TransitionMatrix random_chain(std::size_t n, std::uint64_t seed, unsigned grain = 6, double density = 0.7);

namespace serial {
std::vector<RationalFunction> resolvent_matrix(const TransitionMatrix& p);
}  // namespace serial

}  // namespace kd
