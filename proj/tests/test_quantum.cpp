#include "keydist/errors.hpp"
#include "keydist/quantum.hpp"

#include <doctest.h>

#include <cmath>

using kd::Ensemble;
using kd::Rational;
using kd::StateDensity;

namespace {

StateDensity basis(std::size_t n, std::size_t i) {
  std::vector<Rational> d(n, Rational(0));
  d[i] = 1;
  return StateDensity::diagonal(d);
}

StateDensity mixed(std::size_t n) { return StateDensity::diagonal(std::vector<Rational>(n, Rational(1, static_cast<unsigned long>(n)))); }

Ensemble orthogonal(std::size_t n) {
  std::vector<StateDensity> st;
  for (std::size_t i = 0; i < n; ++i) st.push_back(basis(n, i));
  return Ensemble::exact(std::vector<Rational>(n, Rational(1, static_cast<unsigned long>(n))), st);
}

// sum_q max_x P_x <q|T~_x|q> straight from the diagonals.
Rational guess_oracle(const Ensemble& e) {
  Rational total = 0;
  for (std::size_t q = 0; q < e.dim(); ++q) {
    Rational best = 0;
    for (std::size_t x = 0; x < e.size(); ++x) best = std::max(best, Rational(e.exact_priors()[x] * e.states()[x].exact_diagonal()[q]));
    total += best;
  }
  return total;
}

}  // namespace

TEST_CASE("ensemble validation") {
  CHECK_THROWS_AS(Ensemble::exact({Rational(1, 2), Rational(1, 3)}, {basis(2, 0), basis(2, 1)}), kd::ValidationError);
  CHECK_THROWS_AS(Ensemble::exact({Rational(1, 2), Rational(1, 2)}, {basis(2, 0), basis(3, 1)}), kd::ValidationError);
  CHECK_THROWS_AS(Ensemble::exact({Rational(1)}, {StateDensity::diagonal(std::vector<Rational>{Rational(1, 2), 0})}),
                  kd::ValidationError);
}

TEST_CASE("average state") {
  const auto single = Ensemble::exact({Rational(1)}, {basis(3, 2)});
  CHECK(kd::average_state(single).exact_diagonal() == basis(3, 2).exact_diagonal());
  CHECK(kd::average_state(orthogonal(2)).exact_diagonal() == mixed(2).exact_diagonal());
  const auto t = kd::average_state(kd::table_ensemble(2));
  CHECK(t.exact_diagonal() == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
}

TEST_CASE("pretty-good measurement of the table ensemble") {
  for (unsigned n = 2; n <= 6; ++n) {
    const auto e = kd::table_ensemble(n);
    const auto m = kd::pretty_good_measurement(e);
    for (unsigned x = 0; x < n; ++x)
      for (unsigned q = 0; q < n; ++q) CHECK(m.exact_diagonal(x)[q] == (q == x ? Rational(n, n + 1) : Rational(0)));
    for (unsigned q = 0; q < n; ++q) CHECK(m.exact_diagonal(n)[q] == Rational(1, n + 1));
    Rational phi(n * n + 1, (n + 1) * (n + 1));
    phi.canonicalize();
    CHECK(kd::exact_e_gen(e, m) == phi);
    CHECK(kd::phi_row(n).phi == phi);
  }
  CHECK(kd::phi_row(2).phi == Rational(5, 9));
  CHECK(kd::phi_row(3).phi == kd::parse_rational("10/16"));
}

TEST_CASE("orthogonal states are perfectly distinguishable") {
  const auto e = orthogonal(3);
  CHECK(kd::exact_e_gen(e, kd::pretty_good_measurement(e)) == 1);
  CHECK(kd::exact_e_opt(e) == 1);
  CHECK(kd::cond_min_entropy(e) == doctest::Approx(0.0));
}

TEST_CASE("PGM completeness on random qutrit ensembles") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto e = kd::random_ensemble(3, 3, s);
    const auto m = kd::pretty_good_measurement(e);
    CHECK(m.is_complete(1e-9));
    const double g = kd::e_gen(e, m);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0 + 1e-12);
  }
}

TEST_CASE("PGM on a rank-deficient average is the support projector") {
  const auto e = Ensemble::exact({Rational(1, 2), Rational(1, 2)}, {basis(3, 0), basis(3, 1)});
  const auto m = kd::pretty_good_measurement(e);
  CHECK(m.exact_diagonal(0) == std::vector<Rational>{1, 0, 0});
  CHECK(m.exact_diagonal(1) == std::vector<Rational>{0, 1, 0});
  CHECK_FALSE(m.is_complete());
}

TEST_CASE("random POVM success probability lies in [0, 1]") {
  const auto e = kd::random_ensemble(2, 2, 4);
  Eigen::MatrixXcd a(2, 2);
  a << 0.7, std::complex<double>(0.1, 0.2), std::complex<double>(0.1, -0.2), 0.4;
  const auto m = kd::Povm::dense({a, Eigen::MatrixXcd::Identity(2, 2) - a});
  CHECK(m.is_complete());
  CHECK(kd::e_gen(e, m) >= 0.0);
  CHECK(kd::e_gen(e, m) <= 1.0);
}

TEST_CASE("optimal guessing examples") {
  const auto trivial = Ensemble::exact({Rational(1, 5), Rational(3, 5), Rational(1, 5)}, {mixed(2), mixed(2), mixed(2)});
  CHECK(kd::exact_e_opt(trivial) == Rational(3, 5));
  const auto two = Ensemble::exact(
      {Rational(1, 2), Rational(1, 2)},
      {StateDensity::diagonal(std::vector<Rational>{Rational(3, 4), Rational(1, 4)}),
       StateDensity::diagonal(std::vector<Rational>{Rational(1, 4), Rational(3, 4)})});
  CHECK(kd::exact_e_opt(two) == Rational(3, 4));
  CHECK(kd::cond_min_entropy(two) == doctest::Approx(-std::log2(0.75)).epsilon(1e-12));
  CHECK(kd::cond_min_entropy(two) == doctest::Approx(0.415).epsilon(1e-3));
  const auto uniform4 = Ensemble::exact(std::vector<Rational>(4, Rational(1, 4)), std::vector<StateDensity>(4, mixed(3)),
                                        kd::Alphabet{4, 1});
  CHECK(kd::cond_min_entropy(uniform4) == doctest::Approx(1.0));
}

TEST_CASE("non-commuting ensembles are rejected by e_opt") {
  const auto e = kd::random_ensemble(3, 3, 1);
  CHECK_FALSE(kd::is_commuting(e));
  CHECK_THROWS_AS(kd::e_opt(e), kd::DomainError);
}

TEST_CASE("optimality sandwich on random commuting ensembles") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t dim = 1 + s % 4, symbols = 2 + s % 4;
    const auto d = kd::random_diagonal_ensemble(symbols, dim, s);
    const Rational opt = kd::exact_e_opt(d);
    CHECK(opt == guess_oracle(d));
    const Rational gen = kd::exact_e_gen(d, kd::pretty_good_measurement(d));
    CHECK(gen <= opt);
    CHECK(gen >= opt * opt);
    const auto r = kd::random_commuting_ensemble(symbols, dim, s);
    CHECK(kd::is_commuting(r));
    const double o = kd::e_opt(r), g = kd::e_gen(r, kd::pretty_good_measurement(r));
    CHECK(g <= o + 1e-12);
    CHECK(g >= o * o - 1e-12);
  }
}

TEST_CASE("rotating a diagonal ensemble leaves e_opt unchanged") {
  const auto d = kd::random_diagonal_ensemble(3, 3, 99);
  const double theta = 0.4;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(3, 3);
  u(0, 0) = std::cos(theta);
  u(0, 1) = -std::sin(theta);
  u(1, 0) = std::sin(theta);
  u(1, 1) = std::cos(theta);
  std::vector<StateDensity> rotated;
  std::vector<double> priors;
  for (std::size_t x = 0; x < d.size(); ++x) {
    rotated.push_back(StateDensity::dense(u * d.states()[x].matrix() * u.adjoint()));
    priors.push_back(d.priors()[x]);
  }
  const auto r = Ensemble::floating(priors, rotated);
  CHECK(kd::e_opt(r) == doctest::Approx(kd::exact_e_opt(d).get_d()).epsilon(1e-9));
}

TEST_CASE("partial trace") {
  Eigen::MatrixXcd a(2, 2), b(3, 3);
  a << 0.6, std::complex<double>(0.1, 0.1), std::complex<double>(0.1, -0.1), 0.4;
  b << 0.2, 0.05, 0.0, 0.05, 0.3, 0.0, 0.0, 0.0, 0.3;
  const auto ab = StateDensity::dense(kd::kron(a, b));
  const auto ra = kd::partial_trace(ab, {2, 3}, 1);
  CHECK((ra.matrix() - a * b.trace()).cwiseAbs().maxCoeff() < 1e-12);
  const auto rb = kd::partial_trace(ab, {2, 3}, 0);
  CHECK((rb.matrix() - b * a.trace()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(ra.trace() == doctest::Approx(ab.trace()));
  const auto diag = StateDensity::diagonal(std::vector<Rational>{Rational(1, 8), Rational(1, 8), Rational(1, 4), Rational(1, 2)});
  CHECK(kd::partial_trace(diag, {2, 2}, 0).exact_diagonal() == std::vector<Rational>{Rational(3, 8), Rational(5, 8)});
  CHECK_THROWS_AS(kd::partial_trace(diag, {3, 2}, 0), kd::ValidationError);
}

TEST_CASE("tracing the key out of the cq state leaves I_G / |G| (x) T_Q") {
  const auto fam = kd::HashFamily::all_linear(2, 2, 1);
  const auto e = kd::random_diagonal_ensemble(4, 2, 7);
  const auto cq = kd::cq_key_state(e, fam);
  CHECK(cq.total_trace() == doctest::Approx(1.0));
  const auto full = StateDensity::dense(cq.dense());
  const auto rest = kd::partial_trace(full, {cq.keys(), cq.members(), cq.dim_q()}, 0);
  const Eigen::MatrixXcd expected =
      kd::kron(Eigen::MatrixXcd::Identity(4, 4) / 4.0, kd::average_state(e).matrix());
  CHECK((rest.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(rest.trace() == doctest::Approx(full.trace()));
}

TEST_CASE("tripartite lemma") {
  const auto fam = kd::HashFamily::all_linear(2, 2, 1);
  SUBCASE("trivial side information reduces to the classical distance") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto px = kd::random_distribution({2, 2}, s, 9);
      const auto e = Ensemble::exact(px.exact_weights(),
                                     std::vector<StateDensity>(4, StateDensity::diagonal(std::vector<Rational>{1})),
                                     kd::Alphabet{2, 2});
      const auto r = kd::tripartite_lhl(e, fam);
      CHECK(std::abs(r.distance - kd::lhl_distance(px, fam).get_d()) < 1e-12);
    }
  }
  SUBCASE("uninformative side information with h_min = 2") {
    const auto e = Ensemble::exact(std::vector<Rational>(4, Rational(1, 4)), std::vector<StateDensity>(4, mixed(2)),
                                   kd::Alphabet{2, 2});
    const auto r = kd::tripartite_lhl(e, fam);
    CHECK(r.h_min == doctest::Approx(2.0));
    CHECK(r.satisfied);
    CHECK(r.distance <= std::pow(2.0, -0.5));
  }
  SUBCASE("side information revealing x") {
    std::vector<StateDensity> st;
    for (std::size_t i = 0; i < 4; ++i) st.push_back(basis(4, i));
    const auto e = Ensemble::exact(std::vector<Rational>(4, Rational(1, 4)), st, kd::Alphabet{2, 2});
    const auto r = kd::tripartite_lhl(e, fam, 1.0);
    CHECK(r.h_min == doctest::Approx(0.0));
    CHECK_FALSE(r.precondition_met);
    CHECK(r.distance > 0.0);
  }
  SUBCASE("random diagonal side information") {
    for (std::uint64_t s = 0; s < 30; ++s) {
      const auto r = kd::tripartite_lhl(kd::random_diagonal_ensemble(4, 1 + s % 4, 300 + s), fam);
      CHECK(r.precondition_met);
      CHECK(r.satisfied);
    }
  }
  SUBCASE("rotated commuting side information") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto e = kd::random_commuting_ensemble(4, 3, 400 + s);
      const auto r = kd::tripartite_lhl(Ensemble::floating(e.priors(), e.states(), kd::Alphabet{2, 2}), fam);
      CHECK(r.satisfied);
    }
  }
}
