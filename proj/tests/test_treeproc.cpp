#include "keydist/errors.hpp"
#include "keydist/treeproc.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using kd::Rational;

TEST_CASE("grid scales") {
  CHECK(kd::grid_scale(0) == 1);
  CHECK(kd::grid_scale(2) == 2);
  CHECK(kd::grid_scale(4) == 8);
  CHECK(kd::grid_scale(8) == 384);
  CHECK_THROWS_AS(kd::grid_scale(3), kd::ValidationError);
  CHECK_THROWS_AS(kd::grid_scale(18), kd::CapExceeded);
  CHECK(kd::grid(0).points() == std::vector<Rational>{0, 1});
  CHECK(kd::grid(2).points() == std::vector<Rational>{0, Rational(1, 2), 1});
  CHECK(kd::grid(4).size() == 9);
  for (unsigned eta = 0; eta + 2 <= kd::kMaxEta; eta += 2) {
    CHECK(kd::grid_scale(eta + 2) % kd::grid_scale(eta) == 0);
    CHECK(kd::grids_nest(eta, eta + 2));
  }
}

TEST_CASE("paths start at zero and are reproducible") {
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const auto p = kd::simulate(2, 6, seed);
    CHECK(p.at(0, 0) == 0.0);
    CHECK(p.at(0, 1) == 0.0);
    CHECK(p.points() == kd::grid(6).size());
    CHECK(p.values == kd::simulate(2, 6, seed).values);
  }
  CHECK(kd::simulate(1, 6, 1).values != kd::simulate(1, 6, 2).values);
  CHECK_FALSE(kd::simulate(1, 4, 0).nonstandard);
  CHECK(kd::simulate(1, 4, 0, kd::TreeMode::literal).nonstandard);
}

TEST_CASE("refinement keeps coarse values") {
  const auto coarse = kd::simulate(1, 4, 7), fine = kd::simulate(1, 8, 7);
  const std::uint64_t ratio = kd::grid_scale(8) / kd::grid_scale(4);
  for (std::size_t i = 0; i < coarse.points(); ++i) CHECK(fine.at(i * ratio, 0) == coarse.at(i, 0));
}

TEST_CASE("terminal variance and covariance in one dimension") {
  const auto set = kd::simulate_replications(1, 8, 10000, 3);
  const auto st = kd::increment_stats(set);
  REQUIRE(st.terminal_variance.size() == 1);
  CHECK(st.terminal_variance[0] == doctest::Approx(1.0).epsilon(0.05));
  CHECK(st.max_cov_error < 0.05);
}

TEST_CASE("increment statistics in three dimensions") {
  const auto set = kd::simulate_replications(3, 8, 10000, 5);
  const auto st = kd::increment_stats(set);
  CHECK(st.threshold == doctest::Approx(4.0 / std::sqrt(10000.0)));
  CHECK(st.flagged == 0);
  CHECK(st.max_abs_corr < st.threshold);
  CHECK(st.max_abs_mean < st.threshold);
  for (const auto& inc : st.increments) CHECK(inc.variance == doctest::Approx(inc.length).epsilon(0.1));
  for (double v : st.terminal_variance) CHECK((v >= 0.95 && v <= 1.05));
  CHECK_THROWS_AS(kd::increment_stats(kd::simulate_replications(1, 4, 100, 0)), kd::ValidationError);
}

TEST_CASE("refinement deltas") {
  const auto p = kd::simulate(1, 6, 4);
  const auto d = kd::refinement_delta(p, {2, 4, 6, 10});
  CHECK(d[0] > 0.0);
  CHECK(d[1] > 0.0);
  CHECK(d[2] == 0.0);
  CHECK(d[3] == 0.0);
  const auto med = kd::refinement_medians(1, {4, 6, 8}, 100, 2);
  CHECK(med.decreasing);
  CHECK(std::is_sorted(med.medians.rbegin(), med.medians.rend()));
  const auto lit = kd::refinement_medians(1, {4, 6, 8}, 20, 2, kd::TreeMode::literal);
  CHECK(lit.medians.size() == 3);
}

TEST_CASE("csv output") {
  std::ostringstream out;
  kd::write_csv(out, kd::simulate(2, 2, 0));
  const std::string s = out.str();
  CHECK(s.rfind("t,W1,W2\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);
}
