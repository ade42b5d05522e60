#include "keydist/errors.hpp"
#include "keydist/markov.hpp"

#include <doctest.h>

#include <cmath>

using kd::Polynomial;
using kd::Rational;
using kd::RationalFunction;
using kd::TransitionMatrix;

namespace {

using Rows = std::vector<std::vector<Rational>>;

// Plain triple-loop power, kept separate from the library's multiply.
Rows naive_power(const TransitionMatrix& p, unsigned n) {
  const std::size_t s = p.size();
  Rows out(s, std::vector<Rational>(s, Rational(0)));
  for (std::size_t i = 0; i < s; ++i) out[i][i] = 1;
  for (unsigned step = 0; step < n; ++step) {
    Rows next(s, std::vector<Rational>(s, Rational(0)));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t k = 0; k < s; ++k)
        for (std::size_t j = 0; j < s; ++j) next[i][j] += out[i][k] * p(k, j);
    out = next;
  }
  return out;
}

// First-return probabilities by path enumeration through states other than i.
std::vector<Rational> taboo_first_return(const TransitionMatrix& p, std::size_t i, unsigned n_max) {
  const std::size_t s = p.size();
  std::vector<Rational> out(n_max + 1, Rational(0));
  std::vector<Rational> mass(s, Rational(0));  // mass on j != i after leaving i and avoiding i
  for (std::size_t j = 0; j < s; ++j)
    if (j == i) out[1] = p(i, i);
    else mass[j] = p(i, j);
  for (unsigned n = 2; n <= n_max; ++n) {
    std::vector<Rational> next(s, Rational(0));
    for (std::size_t a = 0; a < s; ++a) {
      if (a == i || mass[a] == 0) continue;
      for (std::size_t b = 0; b < s; ++b)
        if (b == i) out[n] += mass[a] * p(a, b);
        else next[b] += mass[a] * p(a, b);
    }
    mass = next;
  }
  return out;
}

TransitionMatrix chain(Rows rows) { return TransitionMatrix::from_rows(std::move(rows)); }

}  // namespace

TEST_CASE("polynomial arithmetic") {
  const Polynomial r = Polynomial::variable();
  const Polynomial a = 1 - r;
  const Polynomial b = 1 + r;
  CHECK(a * b == 1 - r * r);
  const auto [q, rem] = kd::divmod(1 - r * r, a);
  CHECK(q == b);
  CHECK(rem.is_zero());
  CHECK(kd::gcd((1 - r) * (2 + r), (1 - r) * (3 - r)) == (r - 1));
  CHECK(Polynomial().degree() == -1);
  CHECK((1 - Polynomial(Rational(1, 2)) * r + r * r).to_string() == "1 - 1/2*r + r^2");
  CHECK((r * r * r).derivative() == Polynomial(3) * r * r);
}

TEST_CASE("rational functions normalize") {
  const Polynomial r = Polynomial::variable();
  const RationalFunction f((1 - r) * (1 + r), (1 - r) * 2);
  CHECK(f.den() == Polynomial(1));
  CHECK(f.num() == (1 + r) * Rational(1, 2));
  CHECK(f(Rational(1)) == 1);
  const RationalFunction g(1, 1 - r);
  CHECK_THROWS_AS(g(Rational(1)), kd::DomainError);
  const auto s = g.series(5);
  for (const auto& c : s) CHECK(c == 1);
  CHECK((g * RationalFunction(1 - r)) == RationalFunction(1));
}

TEST_CASE("transition matrix validation") {
  CHECK_THROWS_AS(chain({{Rational(1, 2), Rational(1, 3)}, {0, 1}}), kd::ValidationError);
  CHECK_THROWS_AS(chain({{Rational(3, 2), Rational(-1, 2)}, {0, 1}}), kd::ValidationError);
  CHECK_THROWS_AS(chain({{1, 0}}), kd::ValidationError);
}

TEST_CASE("n-step probabilities") {
  const auto swap = kd::swap_chain();
  CHECK(kd::n_step(swap, 0, 0, 0) == 1);
  CHECK(kd::n_step(swap, 0, 1, 0) == 0);
  CHECK(kd::n_step(swap, 2, 0, 0) == 1);
  const auto p = kd::random_chain(3, 12);
  const auto brute = naive_power(p, 5);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(kd::n_step(p, 5, i, j) == brute[i][j]);
}

TEST_CASE("first returns") {
  const auto swap = kd::swap_chain();
  const auto fr = kd::first_return(swap, 0, 8);
  for (unsigned n = 0; n <= 8; ++n) CHECK(fr[n] == (n == 2 ? 1 : 0));
  const auto absorbing = chain({{1, 0}, {Rational(1, 2), Rational(1, 2)}});
  CHECK(kd::first_return(absorbing, 0, 3)[1] == 1);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto p = kd::random_chain(2 + s % 4, 40 + s);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto a = kd::first_return(p, i, 10);
      CHECK(a[1] == p(i, i));
      CHECK(a == taboo_first_return(p, i, 10));
    }
  }
}

TEST_CASE("resolvent examples") {
  const Polynomial r = Polynomial::variable();
  const auto one = chain({{1}});
  CHECK(kd::resolvent(one, 0, 0) == RationalFunction(1, 1 - r));
  CHECK(kd::theta_gf(one, 0) == RationalFunction(r));
  const auto swap = kd::swap_chain();
  CHECK(kd::resolvent(swap, 0, 0) == RationalFunction(1, 1 - r * r));
  CHECK(kd::theta_gf(swap, 0) == RationalFunction(r * r));
  CHECK(kd::theta_gf(swap, 0).to_string() == "r^2");
  const auto lazy = kd::lazy_chain();
  const auto p00 = kd::resolvent(lazy, 0, 0);
  CHECK(p00 == RationalFunction(1 - Polynomial(Rational(1, 2)) * r, 1 - r));
  const auto coeffs = p00.series(11);
  for (unsigned n = 0; n <= 10; ++n) CHECK(coeffs[n] == kd::n_step(lazy, n, 0, 0));
}

TEST_CASE("resolvent coefficients match matrix powers") {
  for (std::uint64_t s = 0; s < 15; ++s) {
    const auto p = kd::random_chain(1 + s % 5, 200 + s);
    const auto res = kd::resolvent_matrix(p);
    const std::size_t n = p.size();
    for (unsigned k = 0; k <= 12; ++k) {
      const auto pk = naive_power(p, k);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) CHECK(res[i * n + j].series(13)[k] == pk[i][j]);
    }
  }
}

TEST_CASE("theta series and the renewal identity") {
  for (std::uint64_t s = 0; s < 15; ++s) {
    const auto p = kd::random_chain(3, 300 + s);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto theta = kd::theta_gf(p, i);
      CHECK(theta.series(13) == kd::first_return(p, i, 12));
      const auto pii = kd::resolvent(p, i, i).series(13);
      const auto prod = kd::series_product(theta.series(13), pii, 13);
      for (std::size_t k = 0; k < 13; ++k) CHECK(prod[k] == pii[k] - (k == 0 ? 1 : 0));
    }
  }
}

TEST_CASE("radius of convergence") {
  const Polynomial r = Polynomial::variable();
  CHECK(std::isinf(kd::radius_of_convergence(RationalFunction(r * r))));
  CHECK(kd::radius_of_convergence(RationalFunction(1, 1 - r * r)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kd::radius_of_convergence(RationalFunction(1, 2 - r)) == doctest::Approx(2.0).epsilon(1e-12));
  std::size_t checked = 0;
  for (std::uint64_t s = 0; s < 40 && checked < 10; ++s) {
    const auto p = kd::random_chain(3, 700 + s);
    if (!kd::is_irreducible(p) || kd::period(p, 0) != 1) continue;
    ++checked;
    for (std::size_t i = 0; i < 3; ++i) {
      const auto theta = kd::theta_gf(p, i);
      CHECK(theta(Rational(1)) == 1);
      CHECK(kd::radius_of_convergence(theta) > 1.0);
      // The resolvent itself has its pole at r = 1.
      CHECK(kd::radius_of_convergence(kd::resolvent(p, i, i)) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("chain structure") {
  CHECK(kd::is_irreducible(kd::swap_chain()));
  CHECK(kd::period(kd::swap_chain(), 0) == 2);
  CHECK(kd::period(kd::lazy_chain(), 1) == 1);
  CHECK_FALSE(kd::is_irreducible(chain({{1, 0}, {Rational(1, 2), Rational(1, 2)}})));
}
