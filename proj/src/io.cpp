#include "keydist/io.hpp"

#include "keydist/errors.hpp"

#include <fstream>
#include <sstream>

namespace kd::io {

Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

Json rational_json(const Rational& r) { return to_string(r); }

Rational read_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  throw ValidationError("expected a rational as a \"num/den\" string or an integer, got " + j.dump());
}

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

unsigned read_unsigned(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ValidationError(std::string(what) + " must be a nonnegative integer");
  return j.get<unsigned>();
}

Alphabet read_alphabet(const Json& j) {
  Alphabet a;
  a.size = read_unsigned(require(j, "size"), "alphabet size");
  a.power = j.contains("power") ? read_unsigned(j.at("power"), "alphabet power") : 1;
  a.validate();
  return a;
}

Json alphabet_json(const Alphabet& a) { return Json{{"size", a.size}, {"power", a.power}}; }

bool all_strings(const Json& arr) {
  for (const auto& v : arr)
    if (!v.is_string()) return false;
  return true;
}

std::vector<double> read_doubles(const Json& arr, const char* what) {
  if (!arr.is_array()) throw ValidationError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (v.is_number()) out.push_back(v.get<double>());
    else if (v.is_string()) out.push_back(parse_rational(v.get<std::string>()).get_d());
    else throw ValidationError(std::string(what) + " entries must be numbers");
  }
  return out;
}

std::vector<Rational> read_rationals(const Json& arr, const char* what) {
  if (!arr.is_array()) throw ValidationError(std::string(what) + " must be an array");
  std::vector<Rational> out;
  for (const auto& v : arr) out.push_back(read_rational(v));
  return out;
}

}  // namespace

FiniteDistribution read_distribution(const Json& j) {
  const Alphabet a = j.contains("alphabet") ? read_alphabet(j.at("alphabet")) : Alphabet{};
  const Json& w = require(j, "weights");
  if (!w.is_array()) throw ValidationError("weights must be an array");
  Alphabet alphabet = a;
  if (!j.contains("alphabet")) alphabet = Alphabet{static_cast<unsigned>(w.size()), 1};
  if (all_strings(w)) return FiniteDistribution::exact(alphabet, read_rationals(w, "weights"));
  return FiniteDistribution::floating(alphabet, read_doubles(w, "weights"));
}

Json distribution_json(const FiniteDistribution& d) {
  Json w = Json::array();
  if (d.is_exact())
    for (const auto& v : d.exact_weights()) w.push_back(rational_json(v));
  else
    for (double v : d.weights()) w.push_back(v);
  return Json{{"alphabet", alphabet_json(d.alphabet())}, {"weights", w}};
}

Eigen::MatrixXcd read_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw ValidationError("matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) {
      const Json& e = row.at(static_cast<std::size_t>(c));
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = {e[0].get<double>(), e[1].get<double>()};
      } else {
        throw ValidationError("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

Json matrix_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Ensemble read_ensemble(const Json& j) {
  const Json& priors = require(j, "priors");
  const Json& states = require(j, "states");
  if (!priors.is_array() || !states.is_array()) throw ValidationError("priors and states must be arrays");
  std::vector<StateDensity> st;
  for (const auto& s : states) {
    if (s.contains("diagonal")) {
      const Json& d = s.at("diagonal");
      if (d.is_array() && all_strings(d))
        st.push_back(StateDensity::diagonal(read_rationals(d, "diagonal")));
      else
        st.push_back(StateDensity::diagonal(read_doubles(d, "diagonal")));
    } else if (s.contains("matrix")) {
      st.push_back(StateDensity::dense(read_matrix(s.at("matrix"))));
    } else {
      throw ValidationError("each state needs a \"diagonal\" or \"matrix\" field");
    }
  }
  std::optional<Alphabet> alphabet;
  if (j.contains("alphabet")) alphabet = read_alphabet(j.at("alphabet"));
  if (all_strings(priors)) return Ensemble::exact(read_rationals(priors, "priors"), std::move(st), alphabet);
  return Ensemble::floating(read_doubles(priors, "priors"), std::move(st), alphabet);
}

Json ensemble_json(const Ensemble& e) {
  Json priors = Json::array();
  try {
    for (const auto& p : e.exact_priors()) priors.push_back(rational_json(p));
  } catch (const ValidationError&) {
    for (double p : e.priors()) priors.push_back(p);
  }
  Json states = Json::array();
  for (const auto& s : e.states()) {
    if (s.is_exact()) {
      Json d = Json::array();
      for (const auto& v : s.exact_diagonal()) d.push_back(rational_json(v));
      states.push_back(Json{{"diagonal", d}});
    } else if (s.is_diagonal()) {
      states.push_back(Json{{"diagonal", s.diagonal_entries()}});
    } else {
      states.push_back(Json{{"matrix", matrix_json(s.matrix())}});
    }
  }
  return Json{{"alphabet", alphabet_json(e.alphabet())}, {"priors", priors}, {"states", states}};
}

TransitionMatrix read_transition_matrix(const Json& j) {
  const Json& rows = j.is_object() ? require(j, "matrix") : j;
  if (!rows.is_array()) throw ValidationError("transition matrix must be an array of rows");
  std::vector<std::vector<Rational>> out;
  for (const auto& row : rows) out.push_back(read_rationals(row, "transition matrix row"));
  return TransitionMatrix::from_rows(std::move(out));
}

CovSpec read_cov_spec(const Json& j) {
  CovSpec s;
  s.variances = read_doubles(require(j, "variances"), "variances");
  const std::size_t d = s.variances.size();
  s.correlations = j.contains("correlations") ? read_doubles(j.at("correlations"), "correlations")
                                              : std::vector<double>(d * (d - 1) / 2, 0.0);
  if (j.contains("mean")) s.mean = read_doubles(j.at("mean"), "mean");
  if (j.contains("t")) {
    if (!j.at("t").is_number()) throw ValidationError("t must be a number");
    s.t = j.at("t").get<double>();
  }
  s.validate();
  return s;
}

Json bound_check(const std::string& check, const std::string& anchor, const Json& value, const Json& bound) {
  return Json{{"check", check}, {"paper_anchor", anchor}, {"value", value}, {"bound", bound}};
}

}  // namespace kd::io
