#pragma once

#include "keydist/core.hpp"
#include "keydist/markov.hpp"
#include "keydist/quantum.hpp"
#include "keydist/semigroup.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <string>

namespace kd::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Reads and parses a JSON file; I/O and syntax errors become ValidationError.
Json load_file(const std::string& path);

Json rational_json(const Rational& r);
/// Accepts "num/den" strings, integers and decimal strings.
Rational read_rational(const Json& j);

/// {"alphabet": {"size": q, "power": m}, "weights": [...]}. String weights give
/// the exact backend, numeric weights the floating one.
FiniteDistribution read_distribution(const Json& j);
Json distribution_json(const FiniteDistribution& d);

/// Row-major nested arrays of [re, im] pairs (plain numbers are real).
Eigen::MatrixXcd read_matrix(const Json& j);
Json matrix_json(const Eigen::MatrixXcd& m);

/// {"alphabet": {...}?, "priors": [...], "states": [{"diagonal": [...]} | {"matrix": [...]}]}.
Ensemble read_ensemble(const Json& j);
Json ensemble_json(const Ensemble& e);

/// Either a bare array of rows or {"matrix": rows}; entries are "num/den" strings or integers.
TransitionMatrix read_transition_matrix(const Json& j);

/// {"variances": [...], "correlations": [...], "mean": [...], "t": t}; all but variances optional.
CovSpec read_cov_spec(const Json& j);

/// {"check", "paper_anchor", "value", "bound"} record used by every bound report.
Json bound_check(const std::string& check, const std::string& anchor, const Json& value, const Json& bound);

}  // namespace kd::io
