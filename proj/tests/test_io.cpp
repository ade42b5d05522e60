#include "keydist/errors.hpp"
#include "keydist/io.hpp"

#include <doctest.h>

using kd::Rational;
using kd::io::Json;

TEST_CASE("rationals round-trip as strings") {
  CHECK(kd::io::rational_json(Rational(5, 9)) == "5/9");
  CHECK(kd::io::rational_json(Rational(3)) == "3/1");
  CHECK(kd::io::read_rational(Json("10/16")) == Rational(5, 8));
  CHECK(kd::io::read_rational(Json(4)) == 4);
  CHECK_THROWS_AS(kd::io::read_rational(Json("1/0")), kd::ValidationError);
  CHECK_THROWS_AS(kd::io::read_rational(Json(0.5)), kd::ValidationError);
}

TEST_CASE("distributions") {
  const auto exact = kd::io::read_distribution(Json::parse(R"({"alphabet": {"size": 2, "power": 2}, "weights": ["1/2", "1/4", "1/8", "1/8"]})"));
  CHECK(exact.is_exact());
  CHECK(exact.alphabet() == kd::Alphabet{2, 2});
  CHECK(kd::io::read_distribution(kd::io::distribution_json(exact)).exact_weights() == exact.exact_weights());
  const auto floating = kd::io::read_distribution(Json::parse(R"({"weights": [0.25, 0.75]})"));
  CHECK_FALSE(floating.is_exact());
  CHECK(floating.alphabet() == kd::Alphabet{2, 1});
  CHECK_THROWS_AS(kd::io::read_distribution(Json::parse(R"({"weights": ["1/2", "1/3"]})")), kd::ValidationError);
  CHECK_THROWS_AS(kd::io::read_distribution(Json::parse(R"({"weight": []})")), kd::ValidationError);
}

TEST_CASE("matrices and ensembles") {
  Eigen::MatrixXcd m(2, 2);
  m << 0.5, std::complex<double>(0.1, -0.2), std::complex<double>(0.1, 0.2), 0.5;
  CHECK(kd::io::read_matrix(kd::io::matrix_json(m)) == m);
  CHECK_THROWS_AS(kd::io::read_matrix(Json::parse("[[1, 0]]")), kd::ValidationError);
  const auto e = kd::io::read_ensemble(kd::io::load_file(KD_TEST_DATA "/ensemble.json"));
  CHECK(e.is_exact());
  CHECK(e.size() == 4);
  const auto again = kd::io::read_ensemble(kd::io::ensemble_json(e));
  CHECK(again.exact_priors() == e.exact_priors());
}

TEST_CASE("transition matrices and covariance specs") {
  const auto p = kd::io::read_transition_matrix(kd::io::load_file(KD_TEST_DATA "/swap.json"));
  CHECK(p.size() == 2);
  CHECK(p(0, 1) == 1);
  CHECK(kd::io::read_transition_matrix(Json::parse(R"([["1/2", "1/2"], ["1/3", "2/3"]])")).size() == 2);
  const auto s = kd::io::read_cov_spec(kd::io::load_file(KD_TEST_DATA "/sigma.json"));
  CHECK(s.dim() == 2);
  CHECK(s.correlations == std::vector<double>{0.3});
  CHECK_THROWS_AS(kd::io::read_cov_spec(Json::parse(R"({"variances": [1, 1], "correlations": [1.5]})")), kd::ValidationError);
}

TEST_CASE("file errors") {
  CHECK_THROWS_AS(kd::io::load_file("/nonexistent/kd.json"), kd::ValidationError);
}

TEST_CASE("bound records carry the anchor fields") {
  const Json b = kd::io::bound_check("c", "a", 0.5, 1.0);
  for (const char* key : {"check", "paper_anchor", "value", "bound"}) CHECK(b.contains(key));
}
