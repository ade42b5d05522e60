#include "keydist/markov.hpp"

#include "keydist/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace kd {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(const Rational& constant) {
  if (constant != 0) c_.push_back(constant);
}

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
  for (auto& v : c_) v.canonicalize();
  trim();
}

Polynomial Polynomial::monomial(const Rational& c, std::size_t degree) {
  std::vector<Rational> v(degree + 1, Rational(0));
  v[degree] = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  Polynomial out = *this;
  const Rational lead = leading();
  for (auto& v : out.c_) v /= lead;
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& v : out.c_) v = -v;
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(c));
}

Rational Polynomial::operator()(const Rational& r) const {
  Rational acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * r + c_[i];
  return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> r) const {
  std::complex<double> acc = 0.0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * r + c_[i].get_d();
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
  return Polynomial(std::move(d));
}

std::string Polynomial::to_string(char var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    const bool negative = c_[i] < 0;
    const Rational mag = abs(c_[i]);
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    if (i == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << "*";
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Rational> rem = a.coeffs();
  const long db = b.degree();
  const long da = a.degree();
  if (da < db) return {Polynomial(), a};
  std::vector<Rational> quot(static_cast<std::size_t>(da - db + 1), Rational(0));
  const Rational& lead = b.leading();
  for (long i = da - db; i >= 0; --i) {
    const Rational f = rem[static_cast<std::size_t>(i + db)] / lead;
    quot[static_cast<std::size_t>(i)] = f;
    if (f == 0) continue;
    for (long j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i + j)] -= f * b[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial exact_div(const Polynomial& a, const Polynomial& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw DomainError("polynomial division is not exact");
  return q;
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction::RationalFunction(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw DomainError("rational function with zero denominator");
  if (num.is_zero()) {
    num_ = Polynomial();
    den_ = Polynomial(1);
    return;
  }
  const Polynomial g = gcd(num, den);
  num = exact_div(num, g);
  den = exact_div(den, g);
  const Rational lead = den.leading();
  num_ = num * Polynomial(1 / lead);
  den_ = den * Polynomial(1 / lead);
}

Rational RationalFunction::operator()(const Rational& r) const {
  const Rational d = den_(r);
  if (d == 0) throw DomainError("rational function has a pole at " + kd::to_string(r));
  return num_(r) / d;
}

std::vector<Rational> RationalFunction::series(std::size_t n) const {
  const Rational d0 = den_[0];
  if (d0 == 0) throw DomainError("rational function has a pole at 0; no Taylor series");
  std::vector<Rational> c(n, Rational(0));
  for (std::size_t k = 0; k < n; ++k) {
    Rational acc = num_[k];
    const std::size_t top = std::min<std::size_t>(k, static_cast<std::size_t>(std::max<long>(den_.degree(), 0)));
    for (std::size_t m = 1; m <= top; ++m) acc -= den_[m] * c[k - m];
    c[k] = acc / d0;
  }
  return c;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.num_.is_zero()) throw DomainError("division by the zero rational function");
  return {a.num_ * b.den_, a.den_ * b.num_};
}

std::string RationalFunction::to_string(char var) const {
  if (den_ == Polynomial(1)) return num_.to_string(var);
  return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
}

// ---------------------------------------------------------------------------
// Transition matrices

TransitionMatrix TransitionMatrix::from_rows(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) throw ValidationError("transition matrix needs at least one state");
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw ValidationError("transition matrix is not square");
    Rational total = 0;
    for (auto& v : rows[i]) {
      v.canonicalize();
      if (v < 0 || v > 1) throw ValidationError("transition probability " + to_string(v) + " outside [0, 1]");
      total += v;
    }
    if (total != 1) throw ValidationError("row " + std::to_string(i) + " sums to " + to_string(total));
  }
  TransitionMatrix p;
  p.rows_ = std::move(rows);
  return p;
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t n = a.size(), m = b.front().size(), inner = b.size();
  RationalMatrix c(n, std::vector<Rational>(m, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

RationalMatrix matrix_power(const TransitionMatrix& p, unsigned n) {
  const std::size_t s = p.size();
  RationalMatrix result(s, std::vector<Rational>(s, Rational(0)));
  for (std::size_t i = 0; i < s; ++i) result[i][i] = 1;
  RationalMatrix base = p.rows();
  while (n > 0) {
    if (n & 1u) result = multiply(result, base);
    n >>= 1u;
    if (n > 0) base = multiply(base, base);
  }
  return result;
}

Rational n_step(const TransitionMatrix& p, unsigned n, std::size_t i, std::size_t j) {
  if (i >= p.size() || j >= p.size()) throw ValidationError("state index out of range");
  return matrix_power(p, n)[i][j];
}

namespace {

// P^n_{i,i} for n = 0..n_max by propagating row i.
std::vector<Rational> return_probabilities(const TransitionMatrix& p, std::size_t i, unsigned n_max) {
  const std::size_t s = p.size();
  std::vector<Rational> row(s, Rational(0));
  row[i] = 1;
  std::vector<Rational> out{Rational(1)};
  for (unsigned n = 1; n <= n_max; ++n) {
    std::vector<Rational> next(s, Rational(0));
    for (std::size_t k = 0; k < s; ++k) {
      if (row[k] == 0) continue;
      for (std::size_t j = 0; j < s; ++j) next[j] += row[k] * p(k, j);
    }
    row = std::move(next);
    out.push_back(row[i]);
  }
  return out;
}

}  // namespace

std::vector<Rational> first_return(const TransitionMatrix& p, std::size_t i, unsigned n_max) {
  if (i >= p.size()) throw ValidationError("state index out of range");
  if (n_max < 1) throw DomainError("first_return needs n_max >= 1");
  const auto pii = return_probabilities(p, i, n_max);
  std::vector<Rational> theta(n_max + 1, Rational(0));
  for (unsigned n = 1; n <= n_max; ++n) {
    Rational acc = pii[n];
    for (unsigned m = 1; m < n; ++m) acc -= theta[m] * pii[n - m];
    theta[n] = acc;
  }
  return theta;
}

// ---------------------------------------------------------------------------
// Resolvent by fraction-free elimination
//
// Bareiss: with M^(0) = A and M^(-1)_{kk} = 1,
//   M^(k+1)_{ij} = (M^(k)_{kk} M^(k)_{ij} - M^(k)_{ik} M^(k)_{kj}) / M^(k-1)_{k-1,k-1},
// every division exact in Q[r]. The last pivot is det A (up to row swaps).

namespace {

using PolyMatrix = std::vector<std::vector<Polynomial>>;

Polynomial bareiss_det(PolyMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return Polynomial(1);
  bool negate = false;
  Polynomial prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == n) return {};
      std::swap(a[k], a[swap_row]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = exact_div(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev);
      a[i][k] = Polynomial();
    }
    prev = a[k][k];
  }
  return negate ? -a[n - 1][n - 1] : a[n - 1][n - 1];
}

PolyMatrix one_minus_rp(const TransitionMatrix& p) {
  const std::size_t n = p.size();
  PolyMatrix a(n, std::vector<Polynomial>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Polynomial entry = Polynomial::monomial(-p(i, j), 1);
      if (i == j) entry = entry + Polynomial(1);
      a[i][j] = entry;
    }
  return a;
}

PolyMatrix minor_of(const PolyMatrix& a, std::size_t row, std::size_t col) {
  PolyMatrix m;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i == row) continue;
    std::vector<Polynomial> r;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (j != col) r.push_back(a[i][j]);
    m.push_back(std::move(r));
  }
  return m;
}

// Cofactor C_{row,col} of A.
Polynomial cofactor(const PolyMatrix& a, std::size_t row, std::size_t col) {
  Polynomial d = bareiss_det(minor_of(a, row, col));
  return (row + col) % 2 == 0 ? d : -d;
}

}  // namespace

Polynomial resolvent_determinant(const TransitionMatrix& p) { return bareiss_det(one_minus_rp(p)); }

RationalFunction resolvent(const TransitionMatrix& p, std::size_t i, std::size_t j) {
  if (i >= p.size() || j >= p.size()) throw ValidationError("state index out of range");
  const PolyMatrix a = one_minus_rp(p);
  // Inverse = adjugate / det, and the adjugate is the transposed cofactor matrix.
  return {cofactor(a, j, i), bareiss_det(a)};
}

std::vector<RationalFunction> serial::resolvent_matrix(const TransitionMatrix& p) {
  const PolyMatrix a = one_minus_rp(p);
  const Polynomial det = bareiss_det(a);
  const std::size_t n = p.size();
  std::vector<RationalFunction> out;
  out.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.emplace_back(cofactor(a, j, i), det);
  return out;
}

std::vector<RationalFunction> resolvent_matrix(const TransitionMatrix& p) {
  const PolyMatrix a = one_minus_rp(p);
  const Polynomial det = bareiss_det(a);
  const std::size_t n = p.size();
  std::vector<RationalFunction> out(n * n, RationalFunction(Polynomial()));
  const auto entries = static_cast<std::ptrdiff_t>(n * n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t e = 0; e < entries; ++e) {
    const std::size_t i = static_cast<std::size_t>(e) / n, j = static_cast<std::size_t>(e) % n;
    out[static_cast<std::size_t>(e)] = RationalFunction(cofactor(a, j, i), det);
  }
  return out;
}

RationalFunction theta_gf(const TransitionMatrix& p, std::size_t i) {
  const RationalFunction pii = resolvent(p, i, i);
  return RationalFunction(1) - RationalFunction(1) / pii;
}

// ---------------------------------------------------------------------------
// Roots and radii

std::vector<std::complex<double>> roots(const Polynomial& p) {
  const long deg = p.degree();
  if (deg < 1) return {};
  const Polynomial m = p.monic();
  const auto n = static_cast<Eigen::Index>(deg);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -m[static_cast<std::size_t>(i)].get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  const Polynomial dm = m.derivative();
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()(i);
    for (int it = 0; it < 50; ++it) {
      const std::complex<double> fz = m(z), dz = dm(z);
      if (std::abs(dz) == 0.0) break;
      const std::complex<double> step = fz / dz;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    out.push_back(z);
  }
  return out;
}

double radius_of_convergence(const RationalFunction& f) {
  const auto rs = roots(f.den());
  if (rs.empty()) return kInfiniteRadius;
  double best = kInfiniteRadius;
  for (const auto& z : rs) best = std::min(best, std::abs(z));
  return best;
}

std::vector<Rational> series_product(const std::vector<Rational>& a, const std::vector<Rational>& b, std::size_t n) {
  std::vector<Rational> c(n, Rational(0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m <= k; ++m)
      if (m < a.size() && k - m < b.size()) c[k] += a[m] * b[k - m];
  return c;
}

// ---------------------------------------------------------------------------
// Chain structure

bool is_irreducible(const TransitionMatrix& p) {
  const std::size_t n = p.size();
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v)
        if (!seen[v] && p(u, v) != 0) {
          seen[v] = true;
          stack.push_back(v);
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
  }
  return true;
}

unsigned period(const TransitionMatrix& p, std::size_t i) {
  if (i >= p.size()) throw ValidationError("state index out of range");
  const auto horizon = static_cast<unsigned>(2 * p.size() * p.size());
  const std::size_t n = p.size();
  // Reachability only; exact weights are irrelevant here.
  std::vector<bool> row(n, false);
  row[i] = true;
  unsigned g = 0;
  for (unsigned step = 1; step <= horizon; ++step) {
    std::vector<bool> next(n, false);
    for (std::size_t k = 0; k < n; ++k)
      if (row[k])
        for (std::size_t j = 0; j < n; ++j)
          if (p(k, j) != 0) next[j] = true;
    row = std::move(next);
    if (row[i]) g = std::gcd(g, step);
  }
  return g;
}

TransitionMatrix swap_chain() { return TransitionMatrix::from_rows({{0, 1}, {1, 0}}); }

TransitionMatrix lazy_chain() {
  const Rational h(1, 2);
  return TransitionMatrix::from_rows({{h, h}, {h, h}});
}

TransitionMatrix random_chain(std::size_t n, std::uint64_t seed, unsigned grain, double density) {
  if (n == 0) throw DomainError("random chain needs at least one state");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<unsigned> weight(1, grain);
  std::vector<std::vector<Rational>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<unsigned> raw(n, 0);
    unsigned total = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (keep(rng)) {
        raw[j] = weight(rng);
        total += raw[j];
      }
    if (total == 0) {
      raw[(i + 1) % n] = 1;
      total = 1;
    }
    for (std::size_t j = 0; j < n; ++j) {
      Rational v(raw[j], total);
      v.canonicalize();
      rows[i].push_back(v);
    }
  }
  return TransitionMatrix::from_rows(std::move(rows));
}

}  // namespace kd
